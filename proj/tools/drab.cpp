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

// drab: Monte Carlo experiments for distributionally robust beamforming.
//
//   drab run             --config FILE --out DIR [--seed K] [--runs N]
//   drab sweep-snr       --config FILE --out DIR [--values "-20,-10,0"]
//   drab sweep-snapshots --config FILE --out DIR [--values "20,40,100"]
//   drab sweep-param     --config FILE --out DIR --param KEY --values "..."
//   drab validate        [--config FILE]
//
// Exit status: 0 success, 1 runtime error or failed property, 2 bad
// configuration or arguments, 3 robust-beamformer failure rate above
// failure_threshold.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "drab/harness/config.hpp"
#include "drab/harness/experiment.hpp"
#include "drab/harness/properties.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailures = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> threads;
  bool timing = false;
  std::string values;
  std::string param;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool sweep_values) {
  cmd->add_option("--config", o.config, "experiment config file")->required();
  cmd->add_option("--out", o.out, "output directory")->required();
  cmd->add_option("--seed", o.seed, "override master_seed");
  cmd->add_option("--runs", o.runs, "override runs");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_flag("--timing", o.timing, "record wall-clock columns");
  if (sweep_values) cmd->add_option("--values", o.values, "comma-separated sweep values");
}

drab::ExperimentConfig load(const CommonOptions& o, std::optional<drab::SweepKind> kind) {
  drab::ExperimentConfig cfg = drab::load_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  if (o.threads) cfg.threads = *o.threads;
  if (o.timing) cfg.timing = true;
  if (kind) {
    if (cfg.sweep != *kind) cfg.sweep_values.clear();
    cfg.sweep = *kind;
    if (!o.param.empty()) cfg.sweep_param = o.param;
    if (!o.values.empty()) drab::set_config_value(cfg, "sweep.values", o.values);
  }
  cfg.validate();
  return cfg;
}

int execute(const drab::ExperimentConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::fprintf(stderr, "drab: %s, sweep %s over %zu value(s), %d run(s) each\n",
               cfg.name.c_str(), drab::to_string(cfg.sweep),
               cfg.sweep == drab::SweepKind::kNone ? std::size_t{1} : cfg.sweep_values.size(),
               cfg.runs);
  const drab::SweepResult res = drab::sweep(cfg);
  {
    std::ofstream csv(fs::path(out_dir) / "results.csv");
    drab::write_csv(csv, res);
    std::ofstream json(fs::path(out_dir) / "results.json");
    json << drab::to_json(res, cfg).dump(1) << "\n";
    std::ofstream resolved(fs::path(out_dir) / "config.txt");
    resolved << drab::serialize_config(cfg);
    if (!csv || !json || !resolved) {
      std::fprintf(stderr, "drab: cannot write outputs under %s\n", out_dir.c_str());
      return kExitError;
    }
  }
  drab::write_csv(std::cout, res);
  const std::string dro = drab::dro_method_name(cfg.formulation);
  const double rate = res.worst_failure_rate(dro);
  if (rate > cfg.failure_threshold) {
    std::fprintf(stderr, "drab: %s failure rate %.3f exceeds threshold %.3f\n", dro.c_str(),
                 rate, cfg.failure_threshold);
    return kExitFailures;
  }
  return kExitOk;
}

int validate(const std::string& config) {
  if (!config.empty()) {
    const drab::ExperimentConfig cfg = drab::load_config(config);
    std::printf("config %s: ok\n", config.c_str());
    const drab::ExperimentConfig again = drab::parse_config_string(drab::serialize_config(cfg));
    if (drab::serialize_config(again) != drab::serialize_config(cfg)) {
      std::printf("FAIL config round trip\n");
      return kExitError;
    }
  }
  bool all = true;
  for (const auto& r : {drab::rank_gap_suite(), drab::embedding_suite(),
                        drab::weak_duality_suite()}) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.passed;
  }
  return all ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust adaptive beamforming experiments"};
  app.require_subcommand(1);

  CommonOptions run_o, snr_o, snap_o, param_o;
  auto* run = app.add_subcommand("run", "run the config as written");
  add_common(run, run_o, false);
  auto* snr = app.add_subcommand("sweep-snr", "sweep scenario.snr_db");
  add_common(snr, snr_o, true);
  auto* snap = app.add_subcommand("sweep-snapshots", "sweep the snapshot count T");
  add_common(snap, snap_o, true);
  auto* par = app.add_subcommand("sweep-param", "sweep any numeric config key");
  add_common(par, param_o, true);
  par->add_option("--param", param_o.param, "config key to sweep, e.g. params.rho1_rel");
  std::string validate_config;
  auto* val = app.add_subcommand("validate", "run the property suites");
  val->add_option("--config", validate_config, "also check that this config parses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return execute(load(run_o, std::nullopt), run_o.out);
    if (*snr) return execute(load(snr_o, drab::SweepKind::kSnr), snr_o.out);
    if (*snap) return execute(load(snap_o, drab::SweepKind::kSnapshots), snap_o.out);
    if (*par) return execute(load(param_o, drab::SweepKind::kParam), param_o.out);
    if (*val) return validate(validate_config);
  } catch (const drab::ConfigError& e) {
    std::fprintf(stderr, "drab: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "drab: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
