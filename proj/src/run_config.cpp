#include "uvlab/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "uvlab/errors.hpp"

namespace uvlab {

using nlohmann::json;

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"propagator", "limits",    "sweep",    "factorization",
                                              "schwinger",  "mc",        "classical"};
  return names;
}

bool RunConfig::operator==(const RunConfig& other) const { return to_json(*this) == to_json(other); }

json to_json(const RunConfig& c) {
  json modes = json::array();
  for (const auto& m : c.source) modes.push_back({{"k", m.k}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  json model{{"d", c.model.d},           {"m", c.model.m},           {"L", c.model.L},
             {"lambda", c.model.lambda}, {"Lambda", c.model.Lambda}, {"eta", c.model.eta},
             {"kappa", c.model.kappa ? json(*c.model.kappa) : json(nullptr)}};
  return json{
      {"subcommand", c.subcommand},
      {"model", model},
      {"interaction", {{"name", c.interaction}, {"shape", c.shape}}},
      {"source", c.source.empty() ? json("zero") : modes},
      {"lattice", {{"N", c.N ? json(*c.N) : json("auto")}}},
      {"mc",
       {{"master_seed", c.mc.master_seed},
        {"n_samples", c.mc.n_samples},
        {"batch_size", c.mc.batch_size},
        {"confidence", c.mc.confidence}}},
      {"grid", c.grid},
      {"radii", c.radii},
      {"regime", c.regime},
      {"pure_scale", c.pure_scale},
      {"ell", c.ell},
      {"gap_mode", c.gap_mode},
      {"n", c.n},
      {"family", c.family},
      {"output", {{"dir", c.output_dir}, {"format", c.format}}},
  };
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw PreconditionError("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw PreconditionError("config: unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    reject_unknown(j,
                   {"subcommand", "model", "interaction", "source", "lattice", "mc", "grid", "radii", "regime",
                    "pure_scale", "ell", "gap_mode", "n", "family", "output"},
                   "config");
    read(j, "subcommand", c.subcommand);
    if (j.contains("model")) {
      const auto& m = j.at("model");
      reject_unknown(m, {"d", "m", "L", "lambda", "Lambda", "eta", "kappa"}, "model");
      read(m, "d", c.model.d);
      read(m, "m", c.model.m);
      read(m, "L", c.model.L);
      read(m, "lambda", c.model.lambda);
      read(m, "Lambda", c.model.Lambda);
      read(m, "eta", c.model.eta);
      if (m.contains("kappa") && !m.at("kappa").is_null()) c.model.kappa = m.at("kappa").get<double>();
    }
    if (j.contains("interaction")) {
      const auto& v = j.at("interaction");
      if (v.is_string()) {
        c.interaction = v.get<std::string>();
      } else {
        reject_unknown(v, {"name", "shape"}, "interaction");
        read(v, "name", c.interaction);
        read(v, "shape", c.shape);
      }
    }
    if (j.contains("source")) {
      const auto& s = j.at("source");
      if (s.is_string()) {
        if (s.get<std::string>() != "zero") throw PreconditionError("config: source must be \"zero\" or a mode list");
      } else {
        for (const auto& m : s) {
          reject_unknown(m, {"k", "amplitude", "phase"}, "source mode");
          SourceMode mode;
          read(m, "k", mode.k);
          read(m, "amplitude", mode.amplitude);
          read(m, "phase", mode.phase);
          c.source.push_back(mode);
        }
      }
    }
    if (j.contains("lattice")) {
      const auto& l = j.at("lattice");
      reject_unknown(l, {"N"}, "lattice");
      if (l.contains("N") && l.at("N").is_number_integer()) {
        c.N = l.at("N").get<int>();
      } else if (l.contains("N") && !(l.at("N").is_string() && l.at("N") == "auto")) {
        throw PreconditionError("config: lattice.N must be an integer or \"auto\"");
      }
    }
    if (j.contains("mc")) {
      const auto& m = j.at("mc");
      reject_unknown(m, {"master_seed", "n_samples", "batch_size", "confidence"}, "mc");
      read(m, "master_seed", c.mc.master_seed);
      read(m, "n_samples", c.mc.n_samples);
      read(m, "batch_size", c.mc.batch_size);
      read(m, "confidence", c.mc.confidence);
    }
    read(j, "grid", c.grid);
    read(j, "radii", c.radii);
    read(j, "regime", c.regime);
    read(j, "pure_scale", c.pure_scale);
    read(j, "ell", c.ell);
    read(j, "gap_mode", c.gap_mode);
    read(j, "n", c.n);
    read(j, "family", c.family);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      reject_unknown(o, {"dir", "format"}, "output");
      read(o, "dir", c.output_dir);
      read(o, "format", c.format);
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  if (c.format != "csv" && c.format != "json" && c.format != "auto") {
    throw PreconditionError("config: output.format must be csv, json or auto");
  }
  return c;
}

json resolve_config(json base, const json& overrides) {
  base.merge_patch(overrides);
  return base;
}

json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw PreconditionError("config: " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("version")) return j.at("config");
  return j;
}

RunConfig load_config(const std::string& path) { return config_from_json(load_config_json(path)); }

}  // namespace uvlab
