#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uvlab/experiments.hpp"
#include "uvlab/lattice.hpp"
#include "uvlab/params.hpp"

namespace uvlab {

/// Valid subcommand names in dispatch order.
const std::vector<std::string>& subcommand_names();

struct RunConfig {
  std::string subcommand = "propagator";
  ModelParams model;
  std::string interaction = "sgn";
  std::map<std::string, double> shape;
  /// Empty means J = 0.
  std::vector<SourceMode> source;
  /// Lattice sites per side; empty selects a size from the cutoff.
  std::optional<int> N;
  MCConfig mc;
  /// Cutoff grid (propagator, factorization, classical) or scale grid (sweep).
  std::vector<double> grid;
  /// Radii |x| tabulated by the propagator subcommand (x along the first axis).
  std::vector<double> radii{0.0, 0.5, 1.0, 2.0};
  /// Explicit regime letter for sweeps ("A".."E"); empty derives it from eta.
  std::string regime;
  bool pure_scale = true;
  int ell = 2;
  std::string gap_mode = "quadrature";
  int n = 1;
  std::string family = "erf_limit";
  std::string output_dir = ".";
  /// "csv", "json", or "auto" (json for limits, csv otherwise).
  std::string format = "auto";

  bool operator==(const RunConfig&) const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
/// Reads a config file; a run manifest is accepted and its "config" entry returned.
nlohmann::json load_config_json(const std::string& path);
RunConfig load_config(const std::string& path);
/// RFC 7386 merge of `overrides` onto `base`; override values win.
nlohmann::json resolve_config(nlohmann::json base, const nlohmann::json& overrides);

}  // namespace uvlab
