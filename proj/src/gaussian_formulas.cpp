#include "uvlab/gaussian_formulas.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "uvlab/errors.hpp"
#include "uvlab/propagator.hpp"
#include "uvlab/quadrature.hpp"
#include "uvlab/special.hpp"

namespace uvlab {

// ---------------------------------------------------------------------------
// Covariance sources and overlap matrices

LatticeCovariance LatticeCovariance::from(const SpectralDensity& spec) {
  return LatticeCovariance{spec.lattice(), spec.covariance_kernel()};
}

double LatticeCovariance::between(std::size_t site_a, std::size_t site_b) const {
  const auto ca = lattice.coords(site_a);
  const auto cb = lattice.coords(site_b);
  std::vector<int> lag(lattice.d);
  for (int i = 0; i < lattice.d; ++i) lag[i] = ca[i] - cb[i];
  return kernel[lattice.index(lag)];
}

std::size_t site_of(const Point& x, const TorusLattice& lat) {
  if (static_cast<int>(x.size()) != lat.d) throw PreconditionError("site_of: point rank mismatch");
  const double a = lat.spacing();
  std::vector<int> c(lat.d);
  for (int i = 0; i < lat.d; ++i) {
    const double n = x[i] / a;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9) {
      throw PreconditionError("site_of: lattice mode requires points on lattice sites");
    }
    c[i] = static_cast<int>(r);
  }
  return lat.index(c);
}

namespace {

OverlapMatrix finish_overlap(Eigen::MatrixXd m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("overlap_matrix: alpha must lie in [0, 1]");
  OverlapMatrix out;
  const auto n = m.rows();
  out.m = std::move(m);
  out.alpha = alpha;
  out.M = Eigen::MatrixXd::Identity(n, n) + alpha * out.m;
  out.schur_bound = n > 0 ? out.m.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(out.M);
  out.positive_definite = llt.info() == Eigen::Success;
  return out;
}

}  // namespace

OverlapMatrix overlap_matrix(const std::vector<std::size_t>& sites, const LatticeCovariance& cov,
                             double alpha) {
  const auto n = static_cast<Eigen::Index>(sites.size());
  if (n < 1) throw PreconditionError("overlap_matrix: need at least one point");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double c0 = cov.zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = cov.between(sites[i], sites[j]) / c0;
    }
  }
  return finish_overlap(std::move(m), alpha);
}

OverlapMatrix overlap_matrix(const std::vector<Point>& points, const CovarianceSource& source,
                             double alpha) {
  if (points.empty()) throw PreconditionError("overlap_matrix: need at least one point");
  if (const auto* lat = std::get_if<LatticeCovariance>(&source)) {
    std::vector<std::size_t> sites;
    for (const auto& x : points) sites.push_back(site_of(x, lat->lattice));
    return overlap_matrix(sites, *lat, alpha);
  }
  const auto& cont = std::get<ContinuumCovariance>(source);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double c0 = covariance_zero(cont.params);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Point diff(points[i].size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = points[i][k] - points[j][k];
      m(i, j) = m(j, i) = covariance_at(diff, cont.params, cont.spec) / c0;
    }
  }
  return finish_overlap(std::move(m), alpha);
}

SourceVector source_vector(const SourceField& ctilde_j, const std::vector<std::size_t>& sites,
                           double ctilde0) {
  if (!(ctilde0 > 0.0)) throw PreconditionError("source_vector: C~(0) must be positive");
  SourceVector out{Eigen::VectorXd(static_cast<Eigen::Index>(sites.size()))};
  const double norm = 1.0 / std::sqrt(ctilde0);
  for (std::size_t i = 0; i < sites.size(); ++i) out.q(i) = ctilde_j.values.at(sites[i]) * norm;
  return out;
}

void ScaleParams::validate() const {
  if (!(s_plus > 0.0) || !(s_minus >= 0.0) || !std::isfinite(s_plus) || !std::isfinite(s_minus)) {
    throw PreconditionError("ScaleParams: s_plus must be positive and s_minus non-negative");
  }
}

// ---------------------------------------------------------------------------
// Gaussian integrals

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double std_normal(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// z-values where V(scale * (offset + slope * z)) jumps or changes shape.
std::vector<double> breakpoints_for(const BoundedInteraction& v, double scale, double offset,
                                    double slope) {
  std::vector<double> out{0.0};
  auto add = [&](double u) {
    const double z = (u / scale - offset) / slope;
    if (std::abs(z) < kGaussianWindow) out.push_back(z);
  };
  for (double p : v.discontinuities) add(p);
  for (double f : v.features) {
    add(f);
    // Decades out to the window edge, so slowly decaying tails stay graded.
    const double reach = kGaussianWindow * std::abs(slope) * scale + std::abs(offset * scale);
    for (double c = 1.0; c * v.feature_scale <= std::max(reach, 100.0 * v.feature_scale); c *= 10.0) {
      add(f - c * v.feature_scale);
      add(f + c * v.feature_scale);
    }
  }
  return out;
}

struct NestedGaussian {
  const BoundedInteraction& v;
  const Eigen::MatrixXd& chol;
  const Eigen::VectorXd& q;
  double scale;
  const QuadratureSpec& spec;
  int dim;

  // Integrates coordinates k..dim-1 given z_0..z_{k-1}.
  double level(int k, std::vector<double>& z) const {
    double shift = q(k);
    for (int j = 0; j < k; ++j) shift += chol(k, j) * z[j];
    const double slope = chol(k, k);
    auto integrand = [&](double zk) {
      const double value = v(scale * (shift + slope * zk));
      if (value == 0.0) return 0.0;
      double rest = 1.0;
      if (k + 1 < dim) {
        z[k] = zk;
        rest = level(k + 1, z);
      }
      return std_normal(zk) * value * rest;
    };
    const auto cuts = breakpoints_for(v, scale, shift, slope);
    return quad::integral(integrand, -kGaussianWindow, kGaussianWindow, cuts, spec);
  }
};

}  // namespace

double ell_point_expectation(const BoundedInteraction& v, const OverlapMatrix& M,
                             const SourceVector& q, double ctilde0, const QuadratureSpec& spec) {
  const int ell = M.size();
  if (ell < 1 || ell > 3) throw PreconditionError("ell_point_expectation: supports 1 <= l <= 3");
  if (q.q.size() != ell) throw PreconditionError("ell_point_expectation: q has wrong length");
  if (!(ctilde0 > 0.0)) throw PreconditionError("ell_point_expectation: C~(0) must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(M.M);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError(
        "ell_point_expectation: overlap matrix is not positive definite (configuration lies in the "
        "near-diagonal region)");
  }
  const Eigen::MatrixXd chol = llt.matrixL();
  NestedGaussian nested{v, chol, q.q, std::sqrt(ctilde0), spec, ell};
  std::vector<double> z(ell, 0.0);
  return nested.level(0, z);
}

double one_point_density(const BoundedInteraction& v, double mean, double s_plus,
                         const QuadratureSpec& spec) {
  if (!(s_plus > 0.0)) throw PreconditionError("one_point_density: s_plus must be positive");
  const auto cuts = breakpoints_for(v, s_plus, mean, 1.0);
  if (mean == 0.0) {
    // Fold the even weight onto z > 0 so that odd V cancel pointwise.
    std::vector<double> folded;
    for (double c : cuts) {
      if (c != 0.0) folded.push_back(std::abs(c));
    }
    auto even = [&](double z) { return std_normal(z) * (v(s_plus * z) + v(-s_plus * z)); };
    return quad::integral(even, 0.0, kGaussianWindow, folded, spec);
  }
  auto integrand = [&](double z) { return std_normal(z) * v(s_plus * (mean + z)); };
  return quad::integral(integrand, -kGaussianWindow, kGaussianWindow, cuts, spec);
}

double one_point_ratio(const BoundedInteraction& v, const SourceField& a_field,
                       const ScaleParams& scales, const QuadratureSpec& spec) {
  scales.validate();
  std::unordered_map<double, double> cache;
  double sum = 0.0;
  for (double a : a_field.values) {
    const double mean = scales.s_minus * a;
    auto it = cache.find(mean);
    if (it == cache.end()) it = cache.emplace(mean, one_point_density(v, mean, scales.s_plus, spec)).first;
    sum += it->second;
  }
  return a_field.lattice.cell_volume() * sum;
}

double erf_derivative_coefficient(int n) {
  if (n < 1) throw PreconditionError("erf_derivative_coefficient: n must be >= 1");
  return std::sqrt(2.0 / std::numbers::pi) * special::hermite_he_at_zero(n - 1);
}

double gaussian_hermite_moment(const BoundedInteraction& v, int n, const QuadratureSpec& spec) {
  if (n < 0) throw PreconditionError("gaussian_hermite_moment: n must be >= 0");
  auto integrand = [&](double w) { return std_normal(w) * v(w) * special::hermite_he(n, w); };
  const auto cuts = breakpoints_for(v, 1.0, 0.0, 1.0);
  return quad::integral(integrand, -kGaussianWindow, kGaussianWindow, cuts, spec);
}

}  // namespace uvlab
