#include "uvlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "uvlab/errors.hpp"
#include "uvlab/parallel.hpp"
#include "uvlab/propagator.hpp"

namespace uvlab {

void MCConfig::validate() const {
  if (batch_size == 0) throw PreconditionError("MCConfig: batch_size must be positive");
  if (n_samples < 2 * batch_size) throw PreconditionError("MCConfig: n_samples must be >= 2 batch_size");
  if (n_samples % batch_size != 0) {
    throw PreconditionError("MCConfig: n_samples must be a multiple of batch_size");
  }
  if (!(confidence > 0.0)) throw PreconditionError("MCConfig: confidence must be positive");
  if (workers < 0) throw PreconditionError("MCConfig: workers must be >= 0");
}

Estimate jackknife(const std::vector<std::vector<double>>& batch_means,
                   const std::function<double(std::span<const double>)>& f) {
  const std::size_t B = batch_means.size();
  if (B < 2) throw PreconditionError("jackknife: need at least two batches");
  const std::size_t k = batch_means.front().size();
  std::vector<double> total(k, 0.0);
  for (const auto& b : batch_means) {
    for (std::size_t i = 0; i < k; ++i) total[i] += b[i];
  }
  std::vector<double> mean(k), loo(k);
  for (std::size_t i = 0; i < k; ++i) mean[i] = total[i] / static_cast<double>(B);
  const double full = f(mean);

  std::vector<double> partial(B);
  double partial_mean = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < k; ++i) {
      loo[i] = (total[i] - batch_means[b][i]) / static_cast<double>(B - 1);
    }
    partial[b] = f(loo);
    partial_mean += partial[b];
  }
  partial_mean /= static_cast<double>(B);
  double var = 0.0;
  for (double p : partial) var += (p - partial_mean) * (p - partial_mean);
  var *= static_cast<double>(B - 1) / static_cast<double>(B);

  // A constant statistic returns itself; summing the partials would add rounding.
  if (std::all_of(partial.begin(), partial.end(), [&](double p) { return p == partial.front(); })) {
    return Estimate{full, 0.0};
  }
  const double Bd = static_cast<double>(B);
  return Estimate{Bd * full - (Bd - 1.0) * partial_mean, std::sqrt(var)};
}

Estimate jackknife_mean(const std::vector<std::vector<double>>& batch_means, std::size_t i) {
  return jackknife(batch_means, [i](std::span<const double> m) { return m[i]; });
}

std::vector<std::vector<double>> sample_batches(
    const SpectralDensity& density, std::span<const double> shift, std::size_t n_observables,
    const std::function<void(std::span<const double>, std::span<double>)>& observe,
    const MCConfig& cfg) {
  cfg.validate();
  const FieldSampler sampler(density);
  const std::size_t sites = sampler.lattice().sites();
  if (!shift.empty() && shift.size() != sites) {
    throw PreconditionError("sample_batches: shift does not match the lattice");
  }
  const std::size_t nb = cfg.batches();
  const int workers = cfg.workers > 0 ? cfg.workers : worker_count();
  std::vector<std::vector<double>> means(nb, std::vector<double>(n_observables, 0.0));

  parallel_for(nb, workers, [&](std::size_t b) {
    auto ws = sampler.make_workspace();
    std::vector<double> field(sites), out(n_observables), acc(n_observables, 0.0);
    for (std::size_t s = b * cfg.batch_size; s < (b + 1) * cfg.batch_size; ++s) {
      sampler.sample_into(derive_seed(cfg.master_seed, s), ws, field);
      if (!shift.empty()) {
        for (std::size_t x = 0; x < sites; ++x) field[x] += shift[x];
      }
      std::fill(out.begin(), out.end(), 0.0);
      observe(field, out);
      for (std::size_t i = 0; i < n_observables; ++i) acc[i] += out[i];
    }
    for (std::size_t i = 0; i < n_observables; ++i) {
      means[b][i] = acc[i] / static_cast<double>(cfg.batch_size);
    }
  });
  return means;
}

SpectralDensity renormalized_density(const TorusLattice& lat, const ModelParams& params) {
  params.validate();
  const double Z = renorm_factor(params).Z;
  return SpectralDensity::from_params(lat, params, Z);
}

ScaleParams lattice_scales(const SpectralDensity& renormalized) {
  const double ct0 = renormalized.covariance_zero();
  const double s_plus = std::sqrt(ct0);
  return ScaleParams{s_plus, renormalized.Z() / s_plus};
}

namespace {

double checked_interaction(std::span<const double> field, const TorusLattice& lat,
                           const BoundedInteraction& v) {
  const double value = interaction_integral(field, lat, v);
  const double bound = v.sup_norm * std::pow(lat.L, lat.d);
  if (!std::isfinite(value) || std::abs(value) > bound * (1.0 + 1e-12)) {
    throw std::logic_error("interaction integral of '" + v.name + "' exceeds sup|V| L^d");
  }
  return value;
}

}  // namespace

SigmaEstimate mc_sigma_connected(const BoundedInteraction& v, const SourceField& j,
                                 const ModelParams& params, const MCConfig& cfg,
                                 const QuadratureSpec& spec) {
  const auto& lat = j.lattice;
  const auto density = renormalized_density(lat, params);
  const auto ctilde_j = covariance_convolve(j, density);
  const double lam = params.lambda;
  const double K = lam * v.sup_norm * std::pow(lat.L, lat.d);

  const auto batches = sample_batches(
      density, ctilde_j.values, 1,
      [&](std::span<const double> phi, std::span<double> out) {
        out[0] = std::exp(-lam * checked_interaction(phi, lat, v) - K);
      },
      cfg);
  const auto est = jackknife(batches, [K](std::span<const double> m) { return std::log(m[0]) + K; });

  const auto a = covariance_convolve(j, density.with_Z(1.0));
  const double leading = -lam * one_point_ratio(v, a, lattice_scales(density), spec);
  return SigmaEstimate{est.value, est.error, leading, est.value - leading};
}

std::vector<Estimate> mc_ell_point_expectations(const std::vector<BoundedInteraction>& vs,
                                                const std::vector<std::vector<std::size_t>>& site_sets,
                                                const SpectralDensity& density,
                                                const SourceField& ctilde_j, const MCConfig& cfg) {
  const std::size_t sets = site_sets.size();
  for (const auto& set : site_sets) {
    for (std::size_t s : set) {
      if (s >= density.lattice().sites()) throw PreconditionError("mc_ell_point_expectations: site out of range");
    }
  }
  const auto batches = sample_batches(
      density, ctilde_j.values, vs.size() * sets,
      [&](std::span<const double> phi, std::span<double> out) {
        for (std::size_t iv = 0; iv < vs.size(); ++iv) {
          for (std::size_t is = 0; is < sets; ++is) {
            double prod = 1.0;
            for (std::size_t s : site_sets[is]) prod *= vs[iv](phi[s]);
            out[iv * sets + is] = prod;
          }
        }
      },
      cfg);
  std::vector<Estimate> out;
  for (std::size_t i = 0; i < vs.size() * sets; ++i) out.push_back(jackknife_mean(batches, i));
  return out;
}

double diagonal_delta(int ell, int d, double Lambda) {
  if (ell < 1 || d < 2 || !(Lambda > 1.0)) throw PreconditionError("diagonal_delta: need ell >= 1, d >= 2, Lambda > 1");
  return std::pow(ell / std::sqrt(std::log(Lambda)), 1.0 / (d - 1.5));
}

double pair_expectation_at_lag(const BoundedInteraction& v, const LatticeCovariance& cov,
                               std::size_t lag_site, const QuadratureSpec& spec) {
  const double ct0 = cov.zero();
  if (lag_site == 0) {
    BoundedInteraction sq = v;
    sq.name = v.name + "^2";
    sq.eval = [f = v.eval](double w) { return f(w) * f(w); };
    sq.sup_norm = v.sup_norm * v.sup_norm;
    for (auto* lim : {&sq.v_plus0, &sq.v_minus0, &sq.v_plusinf, &sq.v_minusinf}) {
      if (*lim) **lim = **lim * **lim;
    }
    return one_point_density(sq, 0.0, std::sqrt(ct0), spec);
  }
  const auto M = overlap_matrix(std::vector<std::size_t>{0, lag_site}, cov);
  if (!M.positive_definite) {
    throw PreconditionError("pair_expectation_at_lag: overlap matrix not positive definite");
  }
  SourceVector q{Eigen::VectorXd::Zero(2)};
  return ell_point_expectation(v, M, q, ct0, spec);
}

namespace {

// Orbit representative of a lag under axis reflections and permutations,
// which leave the lattice kernel invariant.
std::vector<int> canonical_lag(const TorusLattice& lat, std::size_t site) {
  auto c = lat.coords(site);
  for (int& k : c) k = std::min(k, lat.N - k);
  std::sort(c.begin(), c.end());
  return c;
}

double fit_log_exponent(const std::vector<GapRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.gap != 0.0 && std::isfinite(r.gap)) {
      xs.push_back(std::log(std::log(r.Lambda)));
      ys.push_back(std::log(std::abs(r.gap)));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void quadrature_gap_row(GapRow& row, int ell, const BoundedInteraction& v,
                        const SpectralDensity& density, const QuadratureSpec& spec) {
  const auto& lat = density.lattice();
  const double vol = std::pow(lat.L, lat.d);
  if (ell == 1) {
    row.gap = row.gap_far = row.gap_near = 0.0;
    return;
  }
  const auto cov = LatticeCovariance::from(density);
  const double e1 = one_point_density(v, 0.0, std::sqrt(cov.zero()), spec);
  std::map<std::vector<int>, double> cache;
  double far = 0.0, near = 0.0;
  std::size_t near_count = 0;
  for (std::size_t r = 0; r < lat.sites(); ++r) {
    const bool is_near = lat.torus_distance(0, r) < row.delta;
    const auto key = canonical_lag(lat, r);
    auto it = cache.find(key);
    if (it == cache.end()) {
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        value = pair_expectation_at_lag(v, cov, r, spec) - e1 * e1;
      } catch (const PreconditionError&) {
        if (!is_near) row.positive_definite = false;
      }
      it = cache.emplace(key, value).first;
    }
    if (is_near) {
      near += it->second;
      ++near_count;
    } else {
      far += it->second;
    }
  }
  const double w = vol * lat.cell_volume();
  row.gap_far = w * far;
  row.gap_near = w * near;
  row.gap = row.gap_far + row.gap_near;
  row.near_fraction = static_cast<double>(near_count) / static_cast<double>(lat.sites());
}

void mc_gap_row(GapRow& row, int ell, const BoundedInteraction& v, const SpectralDensity& density,
                const SourceField& j, const MCConfig& cfg) {
  const auto& lat = density.lattice();
  const auto ctilde_j = covariance_convolve(j, density);
  const auto batches = sample_batches(
      density, ctilde_j.values, 2,
      [&](std::span<const double> phi, std::span<double> out) {
        const double V = checked_interaction(phi, lat, v);
        out[0] = std::pow(V, ell);
        out[1] = V;
      },
      cfg);
  const auto est = jackknife(batches, [ell](std::span<const double> m) { return m[0] - std::pow(m[1], ell); });
  row.gap = est.value;
  row.error = est.error;
  std::size_t near_count = 0;
  for (std::size_t r = 0; r < lat.sites(); ++r) near_count += lat.torus_distance(0, r) < row.delta;
  row.near_fraction = static_cast<double>(near_count) / static_cast<double>(lat.sites());
}

}  // namespace

GapReport factorization_gap(const GapSpec& gs, const BoundedInteraction& v,
                            const ModelParams& params, const MCConfig& cfg,
                            const QuadratureSpec& spec) {
  if (gs.ell < 1) throw PreconditionError("factorization_gap: ell must be >= 1");
  if (gs.Lambda_grid.empty()) throw PreconditionError("factorization_gap: empty Lambda grid");
  if (gs.mode == GapMode::Quadrature) {
    if (gs.ell > 2) {
      throw PreconditionError("factorization_gap: quadrature mode supports ell <= 2; use mc mode");
    }
    if (!gs.modes.empty()) {
      throw PreconditionError(
          "factorization_gap: quadrature mode requires J = 0 (translation-invariant integrand); "
          "use mc mode for a nonzero source");
    }
  }
  GapReport report;
  report.ell = gs.ell;
  report.mode = gs.mode;
  for (double Lam : gs.Lambda_grid) {
    ModelParams p = params;
    p.Lambda = Lam;
    const TorusLattice lat = gs.N ? TorusLattice{p.d, *gs.N, p.L} : lattice_for_cutoff(p.d, p.L, Lam);
    const auto density = renormalized_density(lat, p);
    GapRow row;
    row.Lambda = Lam;
    row.N = lat.N;
    row.c0_lattice = density.covariance_zero();
    row.bound_shape = 1.0 / std::sqrt(std::log(Lam));
    row.delta = diagonal_delta(gs.ell, p.d, Lam);
    if (gs.mode == GapMode::Quadrature) {
      quadrature_gap_row(row, gs.ell, v, density, spec);
    } else {
      const SourceField j = gs.modes.empty() ? zero_source(lat) : band_limited_source(lat, gs.modes);
      mc_gap_row(row, gs.ell, v, density, j, cfg);
    }
    row.near_fraction_c = row.near_fraction * std::pow(p.L, p.d) /
                          (static_cast<double>(gs.ell * gs.ell) * std::pow(row.delta, p.d));
    report.rows.push_back(row);
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const bool tail_ok = std::all_of(report.rows.begin() + static_cast<std::ptrdiff_t>(i),
                                     report.rows.end(),
                                     [](const GapRow& r) { return r.positive_definite; });
    if (tail_ok) {
      report.empirical_Lambda0 = report.rows[i].Lambda;
      break;
    }
  }
  report.fitted_exponent = fit_log_exponent(report.rows);
  return report;
}

ScaleParams pure_scale_params(EtaRegime regime, double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw PreconditionError("pure_scale_params: grid value must be positive");
  switch (regime) {
    case EtaRegime::A: return {1.0 / g, 1.0 / g};
    case EtaRegime::B: return {1.0, 1.0 / g};
    case EtaRegime::C: return {g, 1.0 / g};
    case EtaRegime::D: return {g, 1.0};
    case EtaRegime::E: return {g, g};
  }
  throw PreconditionError("pure_scale_params: unknown regime");
}

SweepReport convergence_sweep(const SweepSpec& ss, const BoundedInteraction& v,
                              const SourceField& j, const ModelParams& params,
                              const QuadratureSpec& spec) {
  if (ss.grid.empty()) throw PreconditionError("convergence_sweep: empty grid");
  const EtaRegime regime = ss.pure_scale ? ss.regime : classify_eta(params.eta);
  const auto& lat = j.lattice;
  const auto target_field = uv_limit_convolve(j, params.m);
  const double target = limit_functional(regime, v, target_field, params, spec).value;

  SweepReport report;
  report.regime = to_string(regime);
  for (double g : ss.grid) {
    ScaleParams scales;
    const SourceField* a = &target_field;
    SourceField cutoff_field;
    if (ss.pure_scale) {
      scales = pure_scale_params(regime, g);
    } else {
      ModelParams p = params;
      p.Lambda = g;
      check_resolution(lat, g);
      const auto r = renorm_factor(p);
      scales = ScaleParams{r.s_plus, r.s_minus};
      cutoff_field = covariance_convolve(j, SpectralDensity(lat, p.m, g, 1.0));
      a = &cutoff_field;
    }
    SweepRow row;
    row.grid_value = g;
    row.s_plus = scales.s_plus;
    row.s_minus = scales.s_minus;
    row.finite = -params.lambda * one_point_ratio(v, *a, scales, spec);
    row.target = target;
    row.gap = std::abs(row.finite - target);
    // Gaps at the rounding level of the target carry no ordering.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(target);
    if (!report.rows.empty() && row.gap > report.rows.back().gap + floor) report.monotone_gap = false;
    report.rows.push_back(row);
  }
  return report;
}

ProbeReport j_dependence_probe(const BoundedInteraction& v, const SourceField& a_field,
                               double eta, const std::vector<double>& s_minus_grid,
                               const QuadratureSpec& spec) {
  if (!(eta < 1.0)) throw PreconditionError("j_dependence_probe: requires eta < 1");
  const auto& lat = a_field.lattice;
  ProbeReport report;
  report.eta = eta;
  double abs_a = 0.0;
  for (double a : a_field.values) abs_a += std::abs(a);
  report.envelope_constant =
      v.sup_norm * std::sqrt(2.0 / std::numbers::pi) * lat.cell_volume() * abs_a;

  for (double sm : s_minus_grid) {
    if (!(sm >= 0.0)) throw PreconditionError("j_dependence_probe: s_minus must be >= 0");
    ProbeRow row;
    row.s_minus = sm;
    if (sm == 0.0) {
      row.s_plus = std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(row);
      continue;
    }
    const double t = std::pow(sm, 1.0 / (eta - 1.0));
    row.s_plus = std::pow(t, eta + 1.0);
    const double g0 = one_point_density(v, 0.0, row.s_plus, spec);
    double sum = 0.0;
    for (double a : a_field.values) {
      if (a != 0.0) sum += one_point_density(v, sm * a, row.s_plus, spec) - g0;
    }
    row.difference = std::abs(lat.cell_volume() * sum);
    row.envelope = report.envelope_constant * sm;
    report.fitted_constant = std::max(report.fitted_constant, row.difference / sm);
    if (row.difference > row.envelope) report.bounded = false;
    report.rows.push_back(row);
  }
  for (auto& row : report.rows) row.fitted = report.fitted_constant * row.s_minus;
  return report;
}

std::vector<ClassicalRow> classical_limit_probe(const ClassicalProbeSpec& cs,
                                                const BoundedInteraction& v,
                                                const ModelParams& params, const MCConfig& cfg,
                                                const QuadratureSpec& spec) {
  if (cs.Lambda_grid.empty()) throw PreconditionError("classical_limit_probe: empty Lambda grid");
  std::vector<ClassicalRow> rows;
  for (double Lam : cs.Lambda_grid) {
    ModelParams p = params;
    p.Lambda = Lam;
    p.validate();
    const TorusLattice lat = cs.N ? TorusLattice{p.d, *cs.N, p.L} : lattice_for_cutoff(p.d, p.L, Lam);
    check_resolution(lat, Lam);
    const SourceField j = cs.modes.empty() ? zero_source(lat) : band_limited_source(lat, cs.modes);

    ClassicalRow row;
    row.Lambda = Lam;
    row.N = lat.N;
    row.hbar = 1.0 / covariance_zero(p);
    const SpectralDensity bare(lat, p.m, Lam, 1.0);
    const SpectralDensity scaled = bare.with_Z(row.hbar);
    const auto cj = covariance_convolve(j, bare);
    row.half_jcj = 0.5 * inner(j, cj);

    const double hbar = row.hbar;
    const double lam = p.lambda;
    const double K = lam * v.sup_norm * std::pow(lat.L, lat.d) / hbar;
    const double cell = lat.cell_volume();
    const auto batches = sample_batches(
        scaled, {}, 2,
        [&](std::span<const double> phi, std::span<double> out) {
          thread_local std::vector<double> shifted;
          shifted.resize(phi.size());
          for (std::size_t x = 0; x < phi.size(); ++x) shifted[x] = phi[x] + cj.values[x];
          out[0] = std::exp(-lam * checked_interaction(shifted, lat, v) / hbar - K);
          double pj = 0.0;
          for (std::size_t x = 0; x < phi.size(); ++x) pj += phi[x] * j.values[x];
          out[1] = std::exp(cell * pj / hbar - lam * checked_interaction(phi, lat, v) / hbar - K);
        },
        cfg);
    const auto est = jackknife(batches, [&](std::span<const double> m) {
      return row.half_jcj + hbar * (std::log(m[0]) + K);
    });
    row.estimate = est.value;
    row.error = est.error;
    row.naive = jackknife(batches, [&](std::span<const double> m) { return hbar * (std::log(m[1]) + K); });

    const auto c_limit = uv_limit_convolve(j, p.m);
    row.target = limit_functional(EtaRegime::D, v, c_limit, p, spec).value + 0.5 * inner(j, c_limit);
    row.gap = std::abs(row.estimate - row.target);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SourceConvergenceRow> limit_source_convergence(const std::vector<SourceMode>& modes,
                                                           int d, double L, double m,
                                                           const std::vector<int>& N_grid) {
  std::vector<SourceConvergenceRow> rows;
  for (int N : N_grid) {
    const TorusLattice lat{d, N, L};
    lat.validate();
    const auto j = band_limited_source(lat, modes);
    rows.push_back({N, lat.max_cutoff(), inner(j, uv_limit_convolve(j, m))});
  }
  return rows;
}

}  // namespace uvlab
