// Copyright 2026 The DRAB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration and its plain-text key/value format.
//
// One `key = value` pair per line; `#` starts a comment. Keys are dotted
// paths (scenario.snr_db, params.rho1_rel, sweep.values, ...). Lists are
// comma separated, interferers are written as doa_deg:inr_db. Keys not
// present keep their defaults; unknown keys are an error. serialize()
// writes every key, so parse(serialize(c)) reproduces c exactly.

#ifndef DRAB_HARNESS_CONFIG_HPP_
#define DRAB_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drab/array_model.hpp"
#include "drab/dro_builders.hpp"
#include "drab/inc_reconstruct.hpp"
#include "drab/rank_one.hpp"

namespace drab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NominalSource { kSampleCovariance, kReconstructedInc, kExactInc };
enum class SweepKind { kNone, kSnr, kSnapshots, kParam };

inline const char* to_string(NominalSource s) {
  switch (s) {
    case NominalSource::kSampleCovariance: return "sample_covariance";
    case NominalSource::kReconstructedInc: return "reconstructed_inc";
    case NominalSource::kExactInc: return "exact_inc";
  }
  return "?";
}

inline const char* to_string(SweepKind s) {
  switch (s) {
    case SweepKind::kNone: return "none";
    case SweepKind::kSnr: return "snr";
    case SweepKind::kSnapshots: return "snapshots";
    case SweepKind::kParam: return "param";
  }
  return "?";
}

inline const char* to_string(Quadrature q) {
  return q == Quadrature::kAdaptive ? "adaptive" : "rectangle";
}

/// Uncertainty-set radii relative to the per-run nominal quantities.
struct UncertaintyOverrides {
  double rho1_rel = 1e-3;    // rho1 / ||S0||_F
  double rho2_rel = 1.1;     // rho2 / tr S0
  double gamma1_rel = 1e-2;  // gamma1 / ||a0||
  double gamma2 = 0.1;
  double delta = 0.1;
  double d2prime_gamma1_rel = 1e-2;  // gamma1 / ||abar||, a squared radius
  double d2prime_gamma2_rel = 1e-2;  // gamma2 / ||Sigmabar||_F
  double d2pp_gamma2 = 0.1;
  double d1prime_rho1 = 0.1;
  double d1prime_eps_rel = 1e-2;  // eps / lambda_max(Rhat)
  double d1prime_rho2_rel = 1.1;
  int sector_samples = 100;
  double sector_loading = -1.0;  // < 0: 1e-6 tr(Sigma) / N
};

struct ExperimentConfig {
  std::string name = "experiment";
  ArrayScenario scenario;
  FormulationKind formulation;
  NominalSource nominal_source = NominalSource::kSampleCovariance;
  int runs = 50;
  int snapshots = 100;
  std::uint64_t master_seed = 1;
  SweepKind sweep = SweepKind::kNone;
  std::vector<double> sweep_values;
  std::string sweep_param;
  UncertaintyOverrides params;
  Algorithm1Settings algorithm;
  ReconstructionConfig reconstruction;
  double dl_factor = 10.0;  // mvdr_dl loading = dl_factor * lambda_min(Rhat)
  double failure_threshold = 0.1;
  int threads = 1;
  bool timing = false;  // wall-clock columns; off keeps outputs byte-identical

  void validate() const;
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
}

inline long long to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != static_cast<double>(static_cast<long long>(v)))
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return static_cast<long long>(v);
}

inline std::uint64_t to_u64(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

template <typename E>
E to_enum(const std::string& key, const std::string& s, std::initializer_list<E> options) {
  std::string names;
  for (E e : options) {
    if (s == to_string(e)) return e;
    names += std::string(names.empty() ? "" : ", ") + to_string(e);
  }
  throw ConfigError(key + ": '" + s + "' is not one of " + names);
}

struct Field {
  std::string key;
  bool numeric;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

inline Field real_field(const std::string& key, std::function<double&(ExperimentConfig&)> ref) {
  return {key, true,
          [ref](const ExperimentConfig& c) {
            return fmt(ref(const_cast<ExperimentConfig&>(c)));
          },
          [ref, key](ExperimentConfig& c, const std::string& s) { ref(c) = to_double(key, s); }};
}

inline Field int_field(const std::string& key, std::function<int&(ExperimentConfig&)> ref) {
  return {key, true,
          [ref](const ExperimentConfig& c) {
            return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
          },
          [ref, key](ExperimentConfig& c, const std::string& s) {
            ref(c) = static_cast<int>(to_int(key, s));
          }};
}

// The full key table, in serialization order.
inline const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"name", false, [](const C& c) { return c.name; },
                 [](C& c, const std::string& s) { c.name = s; }});
    f.push_back(int_field("scenario.n_sensors", [](C& c) -> int& { return c.scenario.geometry.n_sensors; }));
    f.push_back(real_field("scenario.spacing_wavelengths",
                           [](C& c) -> double& { return c.scenario.geometry.spacing_wavelengths; }));
    f.push_back(real_field("scenario.true_doa_deg", [](C& c) -> double& { return c.scenario.true_doa_deg; }));
    f.push_back(real_field("scenario.presumed_doa_deg",
                           [](C& c) -> double& { return c.scenario.presumed_doa_deg; }));
    f.push_back({"scenario.sector_deg", false,
                 [](const C& c) {
                   return fmt(c.scenario.sector_deg.lo_deg) + ", " + fmt(c.scenario.sector_deg.hi_deg);
                 },
                 [](C& c, const std::string& s) {
                   const auto p = split(s, ',');
                   if (p.size() != 2) throw ConfigError("scenario.sector_deg: expected lo, hi");
                   c.scenario.sector_deg = {to_double("scenario.sector_deg", p[0]),
                                            to_double("scenario.sector_deg", p[1])};
                 }});
    f.push_back({"scenario.interferers", false,
                 [](const C& c) {
                   std::string out;
                   for (const auto& i : c.scenario.interferers)
                     out += (out.empty() ? "" : ", ") + fmt(i.doa_deg) + ":" + fmt(i.inr_db);
                   return out;
                 },
                 [](C& c, const std::string& s) {
                   c.scenario.interferers.clear();
                   for (const auto& item : split(s, ',')) {
                     const auto p = split(item, ':');
                     if (p.size() != 2)
                       throw ConfigError("scenario.interferers: expected doa_deg:inr_db, got '" +
                                         item + "'");
                     c.scenario.interferers.push_back({to_double("scenario.interferers", p[0]),
                                                       to_double("scenario.interferers", p[1])});
                   }
                 }});
    f.push_back(real_field("scenario.noise_power", [](C& c) -> double& { return c.scenario.noise_power; }));
    f.push_back(real_field("scenario.snr_db", [](C& c) -> double& { return c.scenario.snr_db; }));
    f.push_back(real_field("scenario.phase_distortion_std",
                           [](C& c) -> double& { return c.scenario.phase_distortion_std; }));
    f.push_back({"formulation.family", false,
                 [](const C& c) { return std::string(to_string(c.formulation.family)); },
                 [](C& c, const std::string& s) {
                   c.formulation.family =
                       to_enum("formulation.family", s,
                               {Family::kMainD1D2, Family::kAltD2Prime, Family::kAltD2PP,
                                Family::kAltD1Prime});
                 }});
    f.push_back({"formulation.d1_support", false,
                 [](const C& c) { return std::string(to_string(c.formulation.d1_support)); },
                 [](C& c, const std::string& s) {
                   c.formulation.d1_support = to_enum(
                       "formulation.d1_support", s, {D1Support::kFrobeniusBall, D1Support::kTraceBall});
                 }});
    f.push_back({"formulation.z2_support", false,
                 [](const C& c) { return std::string(to_string(c.formulation.z2_support)); },
                 [](C& c, const std::string& s) {
                   c.formulation.z2_support = to_enum("formulation.z2_support", s,
                                                      {D2Support::kNormShell, D2Support::kUnbounded});
                 }});
    f.push_back({"nominal_source", false,
                 [](const C& c) { return std::string(to_string(c.nominal_source)); },
                 [](C& c, const std::string& s) {
                   c.nominal_source = to_enum("nominal_source", s,
                                              {NominalSource::kSampleCovariance,
                                               NominalSource::kReconstructedInc,
                                               NominalSource::kExactInc});
                 }});
    f.push_back(int_field("runs", [](C& c) -> int& { return c.runs; }));
    f.push_back(int_field("snapshots", [](C& c) -> int& { return c.snapshots; }));
    f.push_back({"master_seed", true, [](const C& c) { return std::to_string(c.master_seed); },
                 [](C& c, const std::string& s) { c.master_seed = to_u64("master_seed", s); }});
    f.push_back({"sweep.kind", false, [](const C& c) { return std::string(to_string(c.sweep)); },
                 [](C& c, const std::string& s) {
                   c.sweep = to_enum("sweep.kind", s,
                                     {SweepKind::kNone, SweepKind::kSnr, SweepKind::kSnapshots,
                                      SweepKind::kParam});
                 }});
    f.push_back({"sweep.values", false,
                 [](const C& c) {
                   std::string out;
                   for (double v : c.sweep_values) out += (out.empty() ? "" : ", ") + fmt(v);
                   return out;
                 },
                 [](C& c, const std::string& s) {
                   c.sweep_values.clear();
                   for (const auto& item : split(s, ','))
                     c.sweep_values.push_back(to_double("sweep.values", item));
                 }});
    f.push_back({"sweep.param", false, [](const C& c) { return c.sweep_param; },
                 [](C& c, const std::string& s) { c.sweep_param = s; }});
    f.push_back(real_field("params.rho1_rel", [](C& c) -> double& { return c.params.rho1_rel; }));
    f.push_back(real_field("params.rho2_rel", [](C& c) -> double& { return c.params.rho2_rel; }));
    f.push_back(real_field("params.gamma1_rel", [](C& c) -> double& { return c.params.gamma1_rel; }));
    f.push_back(real_field("params.gamma2", [](C& c) -> double& { return c.params.gamma2; }));
    f.push_back(real_field("params.delta", [](C& c) -> double& { return c.params.delta; }));
    f.push_back(real_field("params.d2prime_gamma1_rel",
                           [](C& c) -> double& { return c.params.d2prime_gamma1_rel; }));
    f.push_back(real_field("params.d2prime_gamma2_rel",
                           [](C& c) -> double& { return c.params.d2prime_gamma2_rel; }));
    f.push_back(real_field("params.d2pp_gamma2", [](C& c) -> double& { return c.params.d2pp_gamma2; }));
    f.push_back(real_field("params.d1prime_rho1", [](C& c) -> double& { return c.params.d1prime_rho1; }));
    f.push_back(real_field("params.d1prime_eps_rel",
                           [](C& c) -> double& { return c.params.d1prime_eps_rel; }));
    f.push_back(real_field("params.d1prime_rho2_rel",
                           [](C& c) -> double& { return c.params.d1prime_rho2_rel; }));
    f.push_back(int_field("params.sector_samples", [](C& c) -> int& { return c.params.sector_samples; }));
    f.push_back(real_field("params.sector_loading", [](C& c) -> double& { return c.params.sector_loading; }));
    f.push_back(real_field("algorithm.alpha", [](C& c) -> double& { return c.algorithm.alpha; }));
    f.push_back(real_field("algorithm.eta", [](C& c) -> double& { return c.algorithm.eta; }));
    f.push_back(int_field("algorithm.max_iter", [](C& c) -> int& { return c.algorithm.max_iter; }));
    f.push_back(real_field("algorithm.solver_tol", [](C& c) -> double& { return c.algorithm.solver_tol; }));
    f.push_back(real_field("algorithm.feasibility_tol",
                           [](C& c) -> double& { return c.algorithm.feasibility_tol; }));
    f.push_back(real_field("reconstruction.grid_step_deg",
                           [](C& c) -> double& { return c.reconstruction.grid_step_deg; }));
    f.push_back({"reconstruction.angle_range_deg", false,
                 [](const C& c) {
                   return fmt(c.reconstruction.angle_range_deg.lo_deg) + ", " +
                          fmt(c.reconstruction.angle_range_deg.hi_deg);
                 },
                 [](C& c, const std::string& s) {
                   const auto p = split(s, ',');
                   if (p.size() != 2)
                     throw ConfigError("reconstruction.angle_range_deg: expected lo, hi");
                   c.reconstruction.angle_range_deg = {
                       to_double("reconstruction.angle_range_deg", p[0]),
                       to_double("reconstruction.angle_range_deg", p[1])};
                 }});
    f.push_back(real_field("reconstruction.inversion_loading",
                           [](C& c) -> double& { return c.reconstruction.inversion_loading; }));
    f.push_back({"reconstruction.rule", false,
                 [](const C& c) { return std::string(to_string(c.reconstruction.rule)); },
                 [](C& c, const std::string& s) {
                   c.reconstruction.rule = to_enum("reconstruction.rule", s,
                                                   {Quadrature::kAdaptive, Quadrature::kRectangle});
                 }});
    f.push_back({"reconstruction.noise_floor", false,
                 [](const C& c) { return std::string(c.reconstruction.add_noise_floor ? "true" : "false"); },
                 [](C& c, const std::string& s) {
                   c.reconstruction.add_noise_floor = to_bool("reconstruction.noise_floor", s);
                 }});
    f.push_back(real_field("baseline.dl_factor", [](C& c) -> double& { return c.dl_factor; }));
    f.push_back(real_field("failure_threshold", [](C& c) -> double& { return c.failure_threshold; }));
    f.push_back(int_field("threads", [](C& c) -> int& { return c.threads; }));
    f.push_back({"output.timing", false,
                 [](const C& c) { return std::string(c.timing ? "true" : "false"); },
                 [](C& c, const std::string& s) { c.timing = to_bool("output.timing", s); }});
    return f;
  }();
  return table;
}

inline const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

}  // namespace config_detail

/// Sets one key from its text form. The reconstruction's excluded sector
/// always follows scenario.sector_deg.
inline void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const auto* f = config_detail::find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  f->set(c, value);
  c.reconstruction.excluded_sector_deg = c.scenario.sector_deg;
}

inline void set_config_value(ExperimentConfig& c, const std::string& key, double value) {
  set_config_value(c, key, config_detail::fmt(value));
}

inline std::string get_config_value(const ExperimentConfig& c, const std::string& key) {
  const auto* f = config_detail::find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  return f->get(c);
}

/// Keys a param sweep may vary.
inline std::vector<std::string> numeric_config_keys() {
  std::vector<std::string> out;
  for (const auto& f : config_detail::fields())
    if (f.numeric) out.push_back(f.key);
  return out;
}

inline void ExperimentConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigError(m); };
  try {
    scenario.validate();
    reconstruction.validate();
  } catch (const InvalidArgument& e) {
    bad(e.what());
  }
  if (runs < 1) bad("runs must be >= 1");
  if (snapshots < 1) bad("snapshots must be >= 1");
  if (threads < 1) bad("threads must be >= 1");
  if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0))
    bad("failure_threshold must lie in [0, 1]");
  if (!(dl_factor >= 0.0)) bad("baseline.dl_factor must be >= 0");
  if (params.sector_samples < 2) bad("params.sector_samples must be >= 2");
  if (!(algorithm.alpha > 0.0)) bad("algorithm.alpha must be > 0");
  if (!(algorithm.eta > 0.0)) bad("algorithm.eta must be > 0");
  if (algorithm.max_iter < 1) bad("algorithm.max_iter must be >= 1");
  if (!(algorithm.solver_tol > 0.0)) bad("algorithm.solver_tol must be > 0");
  if (!(params.delta > 0.0 && params.delta < 1.0)) bad("params.delta must lie in (0, 1)");
  if (!(params.d1prime_rho1 >= 0.0 && params.d1prime_rho1 < 1.0))
    bad("params.d1prime_rho1 must lie in [0, 1)");
  for (double v : {params.rho1_rel, params.gamma1_rel, params.gamma2, params.d2prime_gamma1_rel,
                   params.d2prime_gamma2_rel, params.d2pp_gamma2})
    if (!(v >= 0.0)) bad("uncertainty radii must be >= 0");
  for (double v : {params.rho2_rel, params.d1prime_eps_rel, params.d1prime_rho2_rel})
    if (!(v > 0.0)) bad("params.rho2_rel, d1prime_eps_rel and d1prime_rho2_rel must be > 0");
  if (sweep != SweepKind::kNone && sweep_values.empty()) bad("sweep.values must be non-empty");
  if (sweep == SweepKind::kSnapshots)
    for (double v : sweep_values)
      if (!(v >= 1.0) || v != static_cast<double>(static_cast<long>(v)))
        bad("snapshot sweep values must be positive integers");
  if (sweep == SweepKind::kParam) {
    const auto* f = config_detail::find_field(sweep_param);
    if (!f || !f->numeric) bad("sweep.param '" + sweep_param + "' is not a numeric key");
  }
}

inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = config_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = config_detail::trim(line.substr(0, eq));
    const std::string value = config_detail::trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ConfigError(where + "duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    try {
      set_config_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  c.validate();
  return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

inline std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  for (const auto& f : config_detail::fields()) out += f.key + " = " + f.get(c) + "\n";
  return out;
}

}  // namespace drab

#endif  // DRAB_HARNESS_CONFIG_HPP_
