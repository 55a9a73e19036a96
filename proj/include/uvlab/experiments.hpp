#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uvlab/gaussian_formulas.hpp"
#include "uvlab/interactions.hpp"
#include "uvlab/lattice.hpp"
#include "uvlab/limits.hpp"
#include "uvlab/params.hpp"

namespace uvlab {

struct MCConfig {
  std::uint64_t master_seed = 20240611;
  std::size_t n_samples = 100000;
  std::size_t batch_size = 2000;
  double confidence = 3.0;
  /// 0 selects worker_count().
  int workers = 0;

  std::size_t batches() const { return n_samples / batch_size; }
  /// n_samples >= 2 batch_size and n_samples divisible by batch_size.
  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;  ///< jackknife standard error
};

/// Bias-corrected jackknife over batches for f(mean of k observables).
/// `batch_means[b][i]` is the mean of observable i in batch b.
Estimate jackknife(const std::vector<std::vector<double>>& batch_means,
                   const std::function<double(std::span<const double>)>& f);

/// Jackknife of the plain mean of observable `i`.
Estimate jackknife_mean(const std::vector<std::vector<double>>& batch_means, std::size_t i = 0);

/// Draws cfg.n_samples fields under `density`, adds `shift` (empty means none)
/// and calls observe(field, out) with `out` sized `n_observables`. Sample s
/// uses seed derive_seed(master_seed, s); batches run in parallel and are
/// reduced in batch order, so the result is independent of the worker count.
std::vector<std::vector<double>> sample_batches(
    const SpectralDensity& density, std::span<const double> shift, std::size_t n_observables,
    const std::function<void(std::span<const double>, std::span<double>)>& observe,
    const MCConfig& cfg);

/// The renormalized lattice density Z C_Lambda with Z = C_Lambda(0)^eta.
SpectralDensity renormalized_density(const TorusLattice& lat, const ModelParams& params);

/// One-point scales measured on the lattice: s_plus = (Z G(0))^{1/2}, s_minus = (Z/G(0))^{1/2}.
ScaleParams lattice_scales(const SpectralDensity& renormalized);

struct SigmaEstimate {
  double sigma_c = 0.0;
  double error = 0.0;
  double leading_term = 0.0;  ///< -lambda * one_point_ratio
  double rest_term = 0.0;     ///< sigma_c - leading_term
};

/// Sigma^c_Lambda(J) = log < exp(-lambda V(phi + C~ J)) > on the lattice of `j`.
SigmaEstimate mc_sigma_connected(const BoundedInteraction& v, const SourceField& j,
                                 const ModelParams& params, const MCConfig& cfg,
                                 const QuadratureSpec& spec = {});

/// Monte Carlo estimates of E[prod_i V(phi(x_i) + (C~ J)(x_i))] for every
/// interaction and site set, all from one common stream of fields.
/// Result index: interaction * site_sets.size() + set.
std::vector<Estimate> mc_ell_point_expectations(const std::vector<BoundedInteraction>& vs,
                                                const std::vector<std::vector<std::size_t>>& site_sets,
                                                const SpectralDensity& density,
                                                const SourceField& ctilde_j, const MCConfig& cfg);

/// delta = (ell / sqrt(log Lambda))^{1 / (d - 3/2)}.
double diagonal_delta(int ell, int d, double Lambda);

enum class GapMode { Quadrature, MonteCarlo };

struct GapRow {
  double Lambda = 0.0;
  int N = 0;
  double c0_lattice = 0.0;
  double gap = 0.0;       ///< <V^l> - <V>^l (signed)
  double error = 0.0;     ///< MC standard error; 0 in quadrature mode
  double gap_far = 0.0;   ///< contribution of D'_delta (quadrature mode)
  double gap_near = 0.0;  ///< contribution of D_delta (quadrature mode)
  double bound_shape = 0.0;  ///< 1 / sqrt(log Lambda)
  double delta = 0.0;
  double near_fraction = 0.0;     ///< lattice fraction of D_delta
  double near_fraction_c = 0.0;   ///< near_fraction L^d / (l^2 delta^d)
  bool positive_definite = true;  ///< every configuration in D'_delta factorized
};

struct GapReport {
  int ell = 2;
  GapMode mode = GapMode::Quadrature;
  std::vector<GapRow> rows;
  /// Smallest grid Lambda from which positive definiteness held on D'_delta.
  std::optional<double> empirical_Lambda0;
  /// Least-squares p in |gap| ~ (log Lambda)^{-p}; NaN with fewer than two usable rows.
  double fitted_exponent = 0.0;
};

struct GapSpec {
  int ell = 2;
  std::vector<double> Lambda_grid{4.0, 8.0, 16.0, 32.0};
  /// Fixed N for every Lambda; per-Lambda lattices when empty.
  std::optional<int> N;
  /// Source modes, re-synthesized on each lattice.
  std::vector<SourceMode> modes;
  GapMode mode = GapMode::Quadrature;
};

/// Quadrature mode handles ell in {1, 2} with J = 0, reducing the double
/// x-integral to a sum over lags; mc mode handles any ell and J.
GapReport factorization_gap(const GapSpec& gs, const BoundedInteraction& v,
                            const ModelParams& params, const MCConfig& cfg = {},
                            const QuadratureSpec& spec = {});

/// E[V(phi(0)) V(phi(r))] at J = 0 for the lattice lag r with site index
/// `lag_site`, phi distributed with covariance `cov`. The coincident lag uses
/// the one-point law of V^2.
double pair_expectation_at_lag(const BoundedInteraction& v, const LatticeCovariance& cov,
                               std::size_t lag_site, const QuadratureSpec& spec = {});

/// Scale-parameter mapping for pure-scale sweeps at grid value g:
/// A (1/g, 1/g), B (1, 1/g), C (g, 1/g), D (g, 1), E (g, g).
ScaleParams pure_scale_params(EtaRegime regime, double g);

struct SweepSpec {
  EtaRegime regime = EtaRegime::D;
  /// Pure-scale grid when true, cutoff grid otherwise.
  bool pure_scale = true;
  std::vector<double> grid{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
};

struct SweepRow {
  double grid_value = 0.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double finite = 0.0;
  double target = 0.0;
  double gap = 0.0;
};

struct SweepReport {
  std::string regime;
  std::vector<SweepRow> rows;
  bool monotone_gap = true;
};

/// Evaluates -lambda * one_point_ratio along the grid against limit_functional.
/// In cutoff mode the finite side uses a(x) = (C_Lambda J)(x) and scales from
/// C_Lambda(0); every grid Lambda must be resolved by the lattice of `j`.
SweepReport convergence_sweep(const SweepSpec& ss, const BoundedInteraction& v,
                              const SourceField& j, const ModelParams& params,
                              const QuadratureSpec& spec = {});

struct ProbeRow {
  double s_minus = 0.0;
  double s_plus = 0.0;
  double difference = 0.0;  ///< |ratio(J) - ratio(0)|
  double envelope = 0.0;    ///< a priori constant * s_minus
  double fitted = 0.0;      ///< fitted constant * s_minus
};

struct ProbeReport {
  double eta = 0.0;
  double envelope_constant = 0.0;  ///< sup|V| sqrt(2/pi) int |a(x)| dx
  double fitted_constant = 0.0;    ///< max difference / s_minus
  bool bounded = true;             ///< difference <= envelope on every row
  std::vector<ProbeRow> rows;
};

/// |one_point_ratio(V, a) - one_point_ratio(V, 0)| along s_minus, with
/// t = s_minus^{1/(eta - 1)} and s_plus = t^{eta + 1}. Requires eta < 1.
ProbeReport j_dependence_probe(const BoundedInteraction& v, const SourceField& a_field,
                               double eta, const std::vector<double>& s_minus_grid,
                               const QuadratureSpec& spec = {});

struct ClassicalProbeSpec {
  std::vector<double> Lambda_grid{4.0, 8.0, 16.0};
  std::vector<SourceMode> modes;
  std::optional<int> N;
};

struct ClassicalRow {
  double Lambda = 0.0;
  int N = 0;
  double hbar = 0.0;
  double estimate = 0.0;  ///< Scheck^c_Lambda(J)
  double error = 0.0;
  double half_jcj = 0.0;  ///< (1/2) <J, C_Lambda J>
  Estimate naive;         ///< same quantity from the unshifted tilt e^{phi(J)/hbar}
  double target = 0.0;    ///< Sigma^c(J) (regime D) + (1/2) <J, C J>
  double gap = 0.0;
};

/// Scheck^c_Lambda(J) = hbar log < e^{phi(J)/hbar} e^{-lambda V(phi)/hbar} >_{hbar C_Lambda}
/// with hbar = 1 / C_Lambda(0), estimated by the shift phi -> phi + C_Lambda J.
std::vector<ClassicalRow> classical_limit_probe(const ClassicalProbeSpec& cs,
                                                const BoundedInteraction& v,
                                                const ModelParams& params, const MCConfig& cfg,
                                                const QuadratureSpec& spec = {});

struct SourceConvergenceRow {
  int N = 0;
  double Lambda_max = 0.0;
  double jcj = 0.0;  ///< <J, C J> with C at Lambda_max
};

/// Residual dependence of the UV-limit covariance on the lattice size.
std::vector<SourceConvergenceRow> limit_source_convergence(const std::vector<SourceMode>& modes,
                                                           int d, double L, double m,
                                                           const std::vector<int>& N_grid);

}  // namespace uvlab
