#include "uvlab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <algorithm>
#include <map>
#include <numbers>
#include <sstream>

#include "uvlab/errors.hpp"
#include "uvlab/experiments.hpp"
#include "uvlab/limits.hpp"
#include "uvlab/parallel.hpp"
#include "uvlab/propagator.hpp"

namespace uvlab {

using nlohmann::json;

const std::vector<std::string>& csv_header(const std::string& subcommand) {
  static const std::map<std::string, std::vector<std::string>> headers{
      {"propagator", {"Lambda", "log_Lambda", "x", "c_Lambda_x", "c0", "c0_over_log_Lambda"}},
      {"limits", {"regime", "constant_part", "j_part", "value"}},
      {"sweep", {"regime", "grid_value", "s_plus", "s_minus", "finite", "target", "gap"}},
      {"factorization",
       {"Lambda", "N", "c0_lattice", "gap", "stderr", "gap_far", "gap_near", "bound_shape", "delta",
        "near_fraction", "near_fraction_c", "positive_definite"}},
      {"schwinger", {"n", "family", "coefficient", "value"}},
      {"mc", {"Lambda", "N", "sigma_c", "stderr", "leading_term", "rest_term"}},
      {"classical",
       {"Lambda", "N", "hbar", "estimate", "stderr", "half_jcj", "naive", "naive_stderr", "target",
        "gap"}},
  };
  auto it = headers.find(subcommand);
  if (it == headers.end()) {
    std::string list;
    for (const auto& n : subcommand_names()) list += (list.empty() ? "" : ", ") + n;
    throw PreconditionError("unknown subcommand '" + subcommand + "'; valid: " + list);
  }
  return it->second;
}

namespace {

TorusLattice lattice_for(const RunConfig& c, double Lambda) {
  if (c.N) {
    const TorusLattice lat{c.model.d, *c.N, c.model.L};
    lat.validate();
    return lat;
  }
  return lattice_for_cutoff(c.model.d, c.model.L, Lambda);
}

SourceField source_on(const RunConfig& c, const TorusLattice& lat) {
  return c.source.empty() ? zero_source(lat) : band_limited_source(lat, c.source);
}

EtaRegime regime_from(const RunConfig& c) {
  if (c.regime.empty()) return classify_eta(c.model.eta);
  static const std::map<std::string, EtaRegime> names{{"A", EtaRegime::A},
                                                      {"B", EtaRegime::B},
                                                      {"C", EtaRegime::C},
                                                      {"D", EtaRegime::D},
                                                      {"E", EtaRegime::E}};
  auto it = names.find(c.regime);
  if (it == names.end()) throw PreconditionError("regime must be one of A, B, C, D, E");
  return it->second;
}

std::vector<double> grid_or(const RunConfig& c, std::vector<double> fallback) {
  return c.grid.empty() ? fallback : c.grid;
}

Table propagator_table(const RunConfig& c) {
  Table t;
  for (double Lam : grid_or(c, {std::exp(1.0), std::exp(2.0)})) {
    ModelParams p = c.model;
    p.Lambda = Lam;
    p.validate();
    const double c0 = covariance_zero(p);
    for (double r : c.radii) {
      std::vector<double> x(p.d, 0.0);
      x[0] = r;
      t.rows.push_back({Lam, std::log(Lam), r, covariance_at(x, p), c0, c0 / std::log(Lam)});
    }
  }
  return t;
}

Table limits_table(const RunConfig& c) {
  const auto lat = lattice_for(c, c.model.Lambda);
  const auto v = catalog_interaction(c.interaction, c.shape);
  const auto a = uv_limit_convolve(source_on(c, lat), c.model.m);
  const auto r = c.model.kappa
                     ? limit_functional_scaled(classify_kappa(*c.model.kappa), v, a, c.model)
                     : limit_functional(classify_eta(c.model.eta), v, a, c.model);
  Table t;
  t.rows.push_back({r.regime, r.constant_part, r.j_part, r.value});
  return t;
}

Table sweep_table(const RunConfig& c) {
  SweepSpec ss;
  ss.regime = regime_from(c);
  ss.pure_scale = c.pure_scale;
  if (!c.grid.empty()) ss.grid = c.grid;
  const double Lmax = *std::max_element(ss.grid.begin(), ss.grid.end());
  const auto lat = lattice_for(c, c.pure_scale ? c.model.Lambda : Lmax);
  const auto report = convergence_sweep(ss, catalog_interaction(c.interaction, c.shape),
                                        source_on(c, lat), c.model);
  Table t;
  for (const auto& r : report.rows) {
    t.rows.push_back({report.regime, r.grid_value, r.s_plus, r.s_minus, r.finite, r.target, r.gap});
  }
  t.summary["monotone_gap"] = report.monotone_gap;
  return t;
}

Table factorization_table(const RunConfig& c) {
  GapSpec gs;
  gs.ell = c.ell;
  if (!c.grid.empty()) gs.Lambda_grid = c.grid;
  gs.N = c.N;
  gs.modes = c.source;
  if (c.gap_mode == "quadrature") {
    gs.mode = GapMode::Quadrature;
  } else if (c.gap_mode == "mc") {
    gs.mode = GapMode::MonteCarlo;
  } else {
    throw PreconditionError("gap_mode must be quadrature or mc");
  }
  const auto report = factorization_gap(gs, catalog_interaction(c.interaction, c.shape), c.model, c.mc);
  Table t;
  for (const auto& r : report.rows) {
    t.rows.push_back({r.Lambda, r.N, r.c0_lattice, r.gap, r.error, r.gap_far, r.gap_near,
                      r.bound_shape, r.delta, r.near_fraction, r.near_fraction_c,
                      r.positive_definite});
  }
  t.summary["fitted_exponent"] =
      std::isfinite(report.fitted_exponent) ? json(report.fitted_exponent) : json(nullptr);
  t.summary["empirical_Lambda0"] =
      report.empirical_Lambda0 ? json(*report.empirical_Lambda0) : json(nullptr);
  return t;
}

Table schwinger_table(const RunConfig& c) {
  SchwingerFamily family;
  if (c.family == "erf_limit") {
    family = SchwingerFamily::ErfLimit;
  } else if (c.family == "convolution") {
    family = SchwingerFamily::Convolution;
  } else {
    throw PreconditionError("family must be erf_limit or convolution");
  }
  const auto v = catalog_interaction(c.interaction, c.shape);
  const double coef = schwinger_coefficient(c.n, v, family);
  const auto lat = lattice_for(c, c.model.Lambda);
  const std::vector<SourceField> tests(static_cast<std::size_t>(c.n), source_on(c, lat));
  Table t;
  t.rows.push_back({c.n, c.family, coef, schwinger_connected(c.n, tests, v, c.model, family)});
  return t;
}

Table mc_table(const RunConfig& c) {
  const auto lat = lattice_for(c, c.model.Lambda);
  const auto est = mc_sigma_connected(catalog_interaction(c.interaction, c.shape), source_on(c, lat),
                                      c.model, c.mc);
  Table t;
  t.rows.push_back({c.model.Lambda, lat.N, est.sigma_c, est.error, est.leading_term, est.rest_term});
  return t;
}

Table classical_table(const RunConfig& c) {
  ClassicalProbeSpec cs;
  if (!c.grid.empty()) cs.Lambda_grid = c.grid;
  cs.modes = c.source;
  cs.N = c.N;
  const auto rows = classical_limit_probe(cs, catalog_interaction(c.interaction, c.shape), c.model, c.mc);
  Table t;
  for (const auto& r : rows) {
    t.rows.push_back({r.Lambda, r.N, r.hbar, r.estimate, r.error, r.half_jcj, r.naive.value,
                      r.naive.error, r.target, r.gap});
  }
  return t;
}

std::string cell_text(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>() + 0.0);
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

Table compute(const RunConfig& c) {
  const auto& header = csv_header(c.subcommand);
  c.model.validate();
  Table t;
  if (c.subcommand == "propagator") t = propagator_table(c);
  if (c.subcommand == "limits") t = limits_table(c);
  if (c.subcommand == "sweep") t = sweep_table(c);
  if (c.subcommand == "factorization") t = factorization_table(c);
  if (c.subcommand == "schwinger") t = schwinger_table(c);
  if (c.subcommand == "mc") t = mc_table(c);
  if (c.subcommand == "classical") t = classical_table(c);
  t.header = header;
  return t;
}

std::string format_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

json format_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = row[i];
    rows.push_back(obj);
  }
  return rows.size() == 1 ? rows.front() : rows;
}

RunArtifacts run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Table t = compute(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string format = cfg.format;
  if (format == "auto") format = cfg.subcommand == "limits" ? "json" : "csv";
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  RunArtifacts out{dir / (cfg.subcommand + "." + format), dir / (cfg.subcommand + ".manifest.json")};
  {
    std::ofstream f(out.data, std::ios::binary);
    f << (format == "csv" ? format_csv(t) : format_json(t).dump(2) + "\n");
    if (!f) throw std::runtime_error("cannot write " + out.data.string());
  }
  const json manifest{
      {"version", kVersion},
      {"subcommand", cfg.subcommand},
      {"config", to_json(cfg)},
      {"master_seed", cfg.mc.master_seed},
      {"workers", worker_count()},
      {"workers_env", kWorkersEnv},
      {"wall_time_s", wall},
      {"outputs", {out.data.filename().string()}},
      {"summary", t.summary},
  };
  std::ofstream f(out.manifest, std::ios::binary);
  f << manifest.dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write " + out.manifest.string());
  return out;
}

}  // namespace uvlab
