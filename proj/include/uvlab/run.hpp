#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "uvlab/run_config.hpp"

namespace uvlab {

inline constexpr const char* kVersion = "0.1.0";

/// Rows of one subcommand, with a fixed header per subcommand.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;
  /// Derived scalars recorded in the manifest (fits, empirical thresholds).
  nlohmann::json summary = nlohmann::json::object();
};

const std::vector<std::string>& csv_header(const std::string& subcommand);

/// Runs the computation selected by cfg.subcommand without touching the disk.
Table compute(const RunConfig& cfg);

/// CSV with 17 significant digits; identical tables give identical text.
std::string format_csv(const Table& t);
/// Array of row objects; a single-row table becomes one object.
nlohmann::json format_json(const Table& t);

struct RunArtifacts {
  std::filesystem::path data;
  std::filesystem::path manifest;
};

/// Computes, then writes <subcommand>.{csv,json} and <subcommand>.manifest.json
/// into cfg.output_dir.
RunArtifacts run(const RunConfig& cfg);

}  // namespace uvlab
