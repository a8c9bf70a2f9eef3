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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "drab/harness/config.hpp"
#include "drab/random.hpp"

namespace drab {
namespace {

TEST(ExperimentConfig, DefaultsMatchReferenceScenario) {
  const ExperimentConfig c;
  EXPECT_EQ(c.scenario.geometry.n_sensors, 10);
  EXPECT_EQ(c.scenario.geometry.spacing_wavelengths, 0.5);
  EXPECT_EQ(c.scenario.true_doa_deg, 5.0);
  EXPECT_EQ(c.scenario.presumed_doa_deg, 1.0);
  EXPECT_EQ(c.scenario.sector_deg.lo_deg, 0.0);
  EXPECT_EQ(c.scenario.sector_deg.hi_deg, 10.0);
  EXPECT_EQ(c.scenario.phase_distortion_std, 0.02);
  EXPECT_EQ(c.snapshots, 100);
  EXPECT_EQ(c.runs, 50);
  EXPECT_EQ(c.params.rho1_rel, 1e-3);
  EXPECT_EQ(c.params.rho2_rel, 1.1);
  EXPECT_EQ(c.params.gamma1_rel, 1e-2);
  EXPECT_EQ(c.params.gamma2, 0.1);
  EXPECT_EQ(c.params.delta, 0.1);
  EXPECT_EQ(c.params.d2prime_gamma2_rel, 1e-2);
  EXPECT_EQ(c.params.d2pp_gamma2, 0.1);
  EXPECT_EQ(c.params.d1prime_eps_rel, 1e-2);
  EXPECT_EQ(c.params.d1prime_rho1, 0.1);
  EXPECT_EQ(c.params.sector_samples, 100);
  EXPECT_EQ(c.algorithm.alpha, 1e3);
  EXPECT_EQ(c.algorithm.eta, 1e-6);
  EXPECT_EQ(c.reconstruction.grid_step_deg, 0.5);
  EXPECT_NO_THROW(c.validate());
}

TEST(ParseConfig, ReadsKeysCommentsAndLists) {
  const ExperimentConfig c = parse_config_string(
      "# comment line\n"
      "name = probe   # trailing comment\n"
      "scenario.n_sensors = 8\n"
      "scenario.interferers = -20:25, 30:35\n"
      "scenario.sector_deg = -2, 12\n"
      "formulation.family = alt_d2_pp\n"
      "nominal_source = reconstructed_inc\n"
      "sweep.kind = snr\n"
      "sweep.values = 10, -10, 0\n"
      "master_seed = 18446744073709551615\n");
  EXPECT_EQ(c.name, "probe");
  EXPECT_EQ(c.scenario.geometry.n_sensors, 8);
  ASSERT_EQ(c.scenario.interferers.size(), 2u);
  EXPECT_EQ(c.scenario.interferers[1].doa_deg, 30.0);
  EXPECT_EQ(c.scenario.interferers[1].inr_db, 35.0);
  EXPECT_EQ(c.formulation.family, Family::kAltD2PP);
  EXPECT_EQ(c.nominal_source, NominalSource::kReconstructedInc);
  EXPECT_EQ(c.sweep, SweepKind::kSnr);
  EXPECT_EQ(c.sweep_values.size(), 3u);
  EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.reconstruction.excluded_sector_deg.lo_deg, -2.0);
  EXPECT_EQ(c.reconstruction.excluded_sector_deg.hi_deg, 12.0);
}

TEST(ParseConfig, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    try {
      parse_config_string(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("runs = 3\nbogus.key = 1\n").find(":2:"), std::string::npos);
  EXPECT_NE(message("scenario.snr_db = loud\n").find("expected a number"), std::string::npos);
  EXPECT_NE(message("runs = 3\nruns = 4\n").find("duplicate"), std::string::npos);
  EXPECT_NE(message("just words\n").find("key = value"), std::string::npos);
  EXPECT_NE(message("runs = 2.5\n").find("integer"), std::string::npos);
  EXPECT_NE(message("formulation.family = other\n").find("not one of"), std::string::npos);
  EXPECT_NE(message("runs = 0\n").find("runs"), std::string::npos);
  EXPECT_NE(message("sweep.kind = snr\n").find("non-empty"), std::string::npos);
  EXPECT_NE(message("sweep.kind = param\nsweep.values = 1\nsweep.param = name\n")
                .find("not a numeric key"),
            std::string::npos);
  EXPECT_NE(message("scenario.presumed_doa_deg = 40\n").find("presumed"), std::string::npos);
  EXPECT_NE(message("params.delta = 1\n").find("delta"), std::string::npos);
}

TEST(ParseConfig, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/drab.conf"), ConfigError);
}

TEST(SerializeConfig, DefaultRoundTrip) {
  const ExperimentConfig c;
  const std::string text = serialize_config(c);
  EXPECT_EQ(serialize_config(parse_config_string(text)), text);
}

TEST(SerializeConfig, RandomNumericValuesRoundTripLosslessly) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    ExperimentConfig c;
    for (const std::string& key : numeric_config_keys()) {
      if (key == "scenario.true_doa_deg" || key == "scenario.presumed_doa_deg" ||
          key == "scenario.snr_db") {
        set_config_value(c, key, rng.uniform(0.0, 10.0));
        continue;
      }
      try {
        set_config_value(c, key, rng.uniform(0.01, 0.9));
      } catch (const ConfigError&) {
        set_config_value(c, key, std::to_string(2 + static_cast<int>(rng.uniform(0.0, 60.0))));
      }
    }
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config_string(text);
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(back.params.rho1_rel, c.params.rho1_rel);
    EXPECT_EQ(back.params.gamma1_rel, c.params.gamma1_rel);
    EXPECT_EQ(back.scenario.snr_db, c.scenario.snr_db);
  }
}

TEST(SerializeConfig, ShippedConfigsParseAndRoundTrip) {
  namespace fs = std::filesystem;
  int count = 0;
  for (const auto& e : fs::directory_iterator(fs::path(DRAB_SOURCE_DIR) / "configs")) {
    if (e.path().extension() != ".conf") continue;
    ++count;
    const ExperimentConfig c = load_config(e.path().string());
    const std::string text = serialize_config(c);
    EXPECT_EQ(serialize_config(parse_config_string(text)), text) << e.path();
  }
  EXPECT_GE(count, 10);
}

TEST(ConfigValues, GetAndSetByKey) {
  ExperimentConfig c;
  set_config_value(c, "params.rho1_rel", 0.25);
  EXPECT_EQ(get_config_value(c, "params.rho1_rel"), "0.25");
  EXPECT_EQ(get_config_value(c, "formulation.family"), "main_d1_d2");
  EXPECT_THROW(get_config_value(c, "nope"), ConfigError);
  set_config_value(c, "scenario.sector_deg", "-3, 7");
  EXPECT_EQ(c.reconstruction.excluded_sector_deg.lo_deg, -3.0);
  const auto keys = numeric_config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "params.gamma1_rel"), keys.end());
  EXPECT_EQ(std::find(keys.begin(), keys.end(), "name"), keys.end());
}

}  // namespace
}  // namespace drab
