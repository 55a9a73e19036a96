#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <variant>
#include <vector>

#include "uvlab/interactions.hpp"
#include "uvlab/lattice.hpp"
#include "uvlab/params.hpp"

namespace uvlab {

/// Continuum covariance C_Lambda from the proper-time integral.
struct ContinuumCovariance {
  ModelParams params;
  QuadratureSpec spec;
};

/// Lattice covariance kernel G(x) tabulated on every site of the torus.
struct LatticeCovariance {
  TorusLattice lattice;
  std::vector<double> kernel;

  static LatticeCovariance from(const SpectralDensity& spec);
  double zero() const { return kernel.front(); }
  double between(std::size_t site_a, std::size_t site_b) const;
};

using CovarianceSource = std::variant<ContinuumCovariance, LatticeCovariance>;

using Point = std::vector<double>;

/// M_alpha = I + alpha m with m_ij = C(x_i - x_j)/C(0) off the diagonal.
struct OverlapMatrix {
  Eigen::MatrixXd m;  ///< normalized off-diagonal covariance, zero diagonal
  Eigen::MatrixXd M;  ///< assembled I + alpha m
  double alpha = 1.0;
  double schur_bound = 0.0;  ///< max_i sum_j |m_ij|
  bool positive_definite = true;

  int size() const { return static_cast<int>(M.rows()); }
};

/// Assembles the overlap matrix and attempts a Cholesky factorization; a
/// failed factorization is reported through `positive_definite`, not thrown.
/// In lattice mode every point must coincide with a lattice site.
OverlapMatrix overlap_matrix(const std::vector<Point>& points, const CovarianceSource& source,
                             double alpha = 1.0);

/// Same, for points given directly as lattice sites.
OverlapMatrix overlap_matrix(const std::vector<std::size_t>& sites, const LatticeCovariance& cov,
                             double alpha = 1.0);

/// Site index of a point that lies on the lattice (within 1e-9 a); throws otherwise.
std::size_t site_of(const Point& x, const TorusLattice& lat);

/// q_i = (C~ J)(x_i) / C~(0)^{1/2}.
struct SourceVector {
  Eigen::VectorXd q;
};

SourceVector source_vector(const SourceField& ctilde_j, const std::vector<std::size_t>& sites,
                           double ctilde0);

/// Positive scale pair entering the one-point formula.
struct ScaleParams {
  double s_plus = 1.0;   ///< (Z C(0))^{1/2}
  double s_minus = 1.0;  ///< (Z / C(0))^{1/2}

  void validate() const;
};

/// E[V(C~(0)^{1/2} W_1) ... V(C~(0)^{1/2} W_l)] for W ~ N(q, M), l <= 3, by
/// nested adaptive quadrature along the Cholesky factor of M. Throws when M
/// is not positive definite.
double ell_point_expectation(const BoundedInteraction& v, const OverlapMatrix& M,
                             const SourceVector& q, double ctilde0, const QuadratureSpec& spec = {});

/// (2 pi)^{-1/2} int dw V(s_plus w) exp(-(w - mean)^2 / 2).
double one_point_density(const BoundedInteraction& v, double mean, double s_plus,
                         const QuadratureSpec& spec = {});

/// (2 pi)^{-1/2} int_B dx int dw V(s_plus w) exp(-(w - s_minus a(x))^2 / 2),
/// the x-integral taken as the lattice Riemann sum over `a_field`.
double one_point_ratio(const BoundedInteraction& v, const SourceField& a_field,
                       const ScaleParams& scales, const QuadratureSpec& spec = {});

/// d^n/dw^n erf(w / sqrt 2) at w = 0, equal to sqrt(2/pi) He_{n-1}(0).
double erf_derivative_coefficient(int n);

/// (2 pi)^{-1/2} int V(w) He_n(w) e^{-w^2/2} dw, i.e. the Gaussian average
/// of the n-th derivative of V after integrating by parts.
double gaussian_hermite_moment(const BoundedInteraction& v, int n, const QuadratureSpec& spec = {});

/// Half-width, in standard deviations, of every Gaussian w-integration window.
inline constexpr double kGaussianWindow = 12.0;

}  // namespace uvlab
