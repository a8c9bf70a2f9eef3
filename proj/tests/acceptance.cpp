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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
//
//   drab_acceptance --cli PATH/drab --configs DIR --work DIR [--only 1,4,9]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drab/harness/config.hpp"
#include "drab/harness/experiment.hpp"
#include "drab/harness/properties.hpp"
#include "drab/inc_reconstruct.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string cli;
  std::string configs;
  std::string work;
  std::vector<int> only;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Criterion 4 checks on one finished (or failed) penalty iteration.
struct IterationAudit {
  int scenarios = 0;
  int solver_failures = 0;
  int hit_max_iter = 0;
  int non_monotone = 0;
  int negative_f2 = 0;
  int bad_ratio = 0;
  int infeasible = 0;
  double worst_ratio = 0.0;
  double worst_violation = 0.0;
  int max_iterations_used = 0;

  void add(const drab::RankOneDiagnostics& d, bool finished) {
    ++scenarios;
    const auto& v = d.objective_sequence;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] > v[k - 1] + 1e-6 * std::max(1.0, std::abs(v[k - 1]))) {
        ++non_monotone;
        break;
      }
    for (double f2 : d.penalty_sequence)
      if (f2 < -1e-9) {
        ++negative_f2;
        break;
      }
    max_iterations_used = std::max(max_iterations_used, d.iterations);
    if (!finished) return;
    worst_ratio = std::max(worst_ratio, d.eigen_ratio);
    worst_violation = std::max(worst_violation, d.feasibility_violation);
    if (d.eigen_ratio > 1e-3) ++bad_ratio;
    if (!d.feasible) ++infeasible;
  }

  void run(const drab::ConicProblemIR& ir, const drab::FormulationKind& f,
           const drab::Algorithm1Settings& s) {
    try {
      add(drab::algorithm1(ir, f, s).diagnostics, true);
    } catch (const drab::Algorithm1Error& e) {
      if (e.kind() == drab::Algorithm1Error::Kind::kMaxIterations) {
        ++hit_max_iter;
        add(e.diagnostics(), false);
      } else {
        ++scenarios;
        ++solver_failures;
      }
    }
  }

  bool pass() const {
    return scenarios > 0 && solver_failures == 0 && non_monotone == 0 && negative_f2 == 0 &&
           hit_max_iter <= 0.05 * scenarios && bad_ratio == 0 && infeasible == 0;
  }

  std::string summary() const {
    std::ostringstream os;
    os << scenarios << " scenarios: " << solver_failures << " solver failures, "
       << non_monotone << " non-monotone v_k, " << negative_f2 << " negative f2, "
       << hit_max_iter << " hit max_iter (most iterations " << max_iterations_used << "), "
       << bad_ratio << " eigen_ratio > 1e-3 (worst " << worst_ratio << "), " << infeasible
       << " infeasible (worst violation " << worst_violation << ")";
    return os.str();
  }
};

drab::ExperimentConfig load(const Options& o, const std::string& name) {
  return drab::load_config((fs::path(o.configs) / name).string());
}

Verdict criterion_rank_gap() {
  const auto r = drab::rank_gap_suite(1000);
  return {r.passed, r.detail};
}

Verdict criterion_embedding() {
  const auto r = drab::embedding_suite(1000);
  return {r.passed, r.detail};
}

Verdict criterion_weak_duality() {
  const auto r = drab::weak_duality_suite(100, 5, 3);
  return {r.passed, r.detail};
}

Verdict criterion_algorithm1() {
  drab::Rng rng(2026);
  IterationAudit audit;
  for (int s = 0; s < 50; ++s) {
    drab::ExperimentConfig cfg;
    cfg.master_seed = 1000 + static_cast<std::uint64_t>(s);
    cfg.scenario.snr_db = rng.uniform(-20.0, 30.0);
    cfg.scenario.true_doa_deg = rng.uniform(0.0, 10.0);
    cfg.snapshots = 20 + static_cast<int>(rng.uniform(0.0, 81.0));
    const drab::RunInputs in = drab::prepare_run(cfg, 0);
    audit.run(drab::build_relaxation(cfg, in), cfg.formulation, cfg.algorithm);
  }
  return {audit.pass(), audit.summary()};
}

Verdict criterion_fig1(const Options& o) {
  drab::ExperimentConfig cfg = load(o, "fig1_snr.conf");
  cfg.runs = 50;
  cfg.sweep_values = {-20, -15, -10, -5, 0, 5, 10};
  const drab::SweepResult r = drab::sweep(cfg);
  bool ok = r.worst_failure_rate("dro") == 0.0;
  std::ostringstream os;
  double worst_gap = 0.0, worst_margin = 1e300;
  for (double snr : cfg.sweep_values) {
    const auto* dro = r.row(snr, "dro");
    const auto* dl = r.row(snr, "mvdr_dl");
    const auto* opt = r.row(snr, "optimal");
    const double margin = dro->mean_sinr_db - dl->mean_sinr_db;
    worst_margin = std::min(worst_margin, margin);
    if (!(margin >= 0.0)) ok = false;
    if (snr <= 0.0) {
      const double gap = opt->mean_sinr_db - dro->mean_sinr_db;
      worst_gap = std::max(worst_gap, gap);
      if (!(gap <= 4.0)) ok = false;
    }
  }
  os << "50 runs x 7 SNRs; min(dro - mvdr_dl) = " << worst_margin
     << " dB; max gap to optimal for SNR <= 0 = " << worst_gap << " dB; dro failure rate "
     << r.worst_failure_rate("dro");
  return {ok, os.str()};
}

Verdict criterion_fig2(const Options& o) {
  drab::ExperimentConfig cfg = load(o, "fig2_exact_inc.conf");
  cfg.runs = 50;
  cfg.snapshots = 10;
  const drab::SweepResult r = drab::sweep(cfg);
  bool ok = r.worst_failure_rate("dro") == 0.0;
  double worst_gap = 0.0;
  for (double snr : cfg.sweep_values) {
    const double gap = r.row(snr, "optimal")->mean_sinr_db - r.row(snr, "dro")->mean_sinr_db;
    worst_gap = std::max(worst_gap, gap);
    if (!(gap <= 2.0)) ok = false;
  }
  return {ok, "50 runs x " + std::to_string(cfg.sweep_values.size()) +
                  " SNRs at T = 10; max gap to optimal = " + fmt("%.4f", worst_gap) +
                  " dB; dro failure rate " + fmt("%.3f", r.worst_failure_rate("dro"))};
}

std::pair<double, std::string> spread(const drab::SweepResult& r,
                                      const std::vector<double>& values, bool& failures) {
  double lo = 1e300, hi = -1e300;
  std::ostringstream os;
  for (double v : values) {
    const auto* row = r.row(v, "dro");
    if (row->failures > 0) failures = true;
    lo = std::min(lo, row->mean_sinr_db);
    hi = std::max(hi, row->mean_sinr_db);
    os << (os.tellp() > 0 ? ", " : "") << v << ": " << fmt("%.2f", row->mean_sinr_db);
  }
  return {hi - lo, os.str()};
}

Verdict criterion_stability(const Options& o) {
  drab::ExperimentConfig rho = load(o, "fig5_rho1.conf");
  drab::ExperimentConfig gam = load(o, "fig6_gamma1.conf");
  for (auto* c : {&rho, &gam}) {
    c->runs = 30;
    c->scenario.snr_db = -10.0;
    c->snapshots = 100;
  }
  bool failures = false;
  const auto [sr, dr] = spread(drab::sweep(rho), rho.sweep_values, failures);
  const auto [sg, dg] = spread(drab::sweep(gam), gam.sweep_values, failures);
  std::ostringstream os;
  os << "rho1 spread " << fmt("%.2f", sr) << " dB {" << dr << "}; gamma1 spread "
     << fmt("%.2f", sg) << " dB {" << dg << "}" << (failures ? "; dro failures" : "");
  return {sr <= 2.0 && sg <= 2.0 && !failures, os.str()};
}

Verdict criterion_alternatives(const Options& o) {
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"fig3_d2prime.conf", "fig3_d2pp.conf", "fig3_d1prime.conf"}) {
    drab::ExperimentConfig cfg = load(o, name);
    IterationAudit audit;
    for (double snr : {-10.0, 0.0, 10.0}) {
      cfg.scenario.snr_db = snr;
      for (int run = 0; run < 5; ++run) {
        const drab::RunInputs in = drab::prepare_run(cfg, run);
        audit.run(drab::build_relaxation(cfg, in), cfg.formulation, cfg.algorithm);
      }
    }
    ok = ok && audit.pass();
    os << drab::dro_method_name(cfg.formulation) << " [" << audit.summary() << "]; ";
  }
  drab::ExperimentConfig alt = load(o, "fig3_d1prime.conf");
  drab::ExperimentConfig main = load(o, "fig1_snr.conf");
  double means[2];
  int k = 0;
  for (auto* c : {&alt, &main}) {
    c->runs = 50;
    c->sweep_values = {20.0};
    const drab::SweepResult r = drab::sweep(*c);
    const auto* row = r.row(20.0, drab::dro_method_name(c->formulation));
    means[k++] = row->mean_sinr_db;
    if (row->failures > 0) ok = false;
  }
  os << "SNR 20 dB, 50 runs: dro_d1prime " << fmt("%.2f", means[0]) << " dB vs dro "
     << fmt("%.2f", means[1]) << " dB";
  return {ok && means[0] - means[1] >= 0.0, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict criterion_determinism(const Options& o) {
  const fs::path conf = fs::path(o.configs) / "determinism.conf";
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = fs::path(o.work) / ("determinism_" + std::to_string(i));
    fs::remove_all(out);
    const std::string cmd = "\"" + o.cli + "\" sweep-snr --config \"" + conf.string() +
                            "\" --out \"" + out.string() + "\" > \"" +
                            (fs::path(o.work) / "determinism.log").string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, "drab sweep-snr exited with status " + std::to_string(rc)};
    csv[i] = slurp(out / "results.csv");
  }
  const bool same = !csv[0].empty() && csv[0] == csv[1];
  return {same, std::to_string(csv[0].size()) + " bytes, " +
                    (same ? "byte-identical" : "outputs differ")};
}

double subspace_angle_deg(const drab::ComplexMatrix& a, const drab::ComplexMatrix& b) {
  using drab::ComplexMatrix;
  const ComplexMatrix qa =
      ComplexMatrix(Eigen::HouseholderQR<ComplexMatrix>(a).householderQ()).leftCols(a.cols());
  const ComplexMatrix qb =
      ComplexMatrix(Eigen::HouseholderQR<ComplexMatrix>(b).householderQ()).leftCols(b.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(qa.adjoint() * qb);
  return drab::rad2deg(std::acos(std::min(1.0, svd.singularValues().minCoeff())));
}

Verdict criterion_reconstruction() {
  drab::ArrayScenario sc;
  sc.snr_db = 10.0;
  const drab::HermitianMatrix rhat =
      drab::sample_covariance(drab::synth_snapshots(sc, 100, drab::derive_seed(10, 0, drab::Stream::kSnapshots)));
  drab::ReconstructionConfig coarse, fine;
  coarse.grid_step_deg = 1.0;
  fine.grid_step_deg = 0.25;
  const drab::HermitianMatrix a = drab::capon_reconstruct(rhat, sc.geometry, coarse);
  const drab::HermitianMatrix b = drab::capon_reconstruct(rhat, sc.geometry, fine);
  Eigen::SelfAdjointEigenSolver<drab::HermitianMatrix> es(b);
  drab::ComplexMatrix intf(sc.geometry.n_sensors, 2);
  intf.col(0) = drab::ula_steering(sc.geometry, -5.0);
  intf.col(1) = drab::ula_steering(sc.geometry, 15.0);
  const double angle = subspace_angle_deg(es.eigenvectors().rightCols(2), intf);
  const double change = (a - b).norm() / b.norm();
  return {angle <= 5.0 && change <= 0.02,
          "subspace angle " + fmt("%.4g", angle) + " deg; refinement 1.0 -> 0.25 deg changes " +
              fmt("%.4g", 100.0 * change) + "%"};
}

struct Criterion {
  int id;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"drab acceptance criteria"};
  app.add_option("--cli", o.cli, "path to the drab executable")->required();
  app.add_option("--configs", o.configs, "directory of shipped configs")->required();
  app.add_option("--work", o.work, "scratch directory")->required();
  app.add_option("--only", o.only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(o.work);

  const std::vector<Criterion> all = {
      {1, 5, criterion_rank_gap},
      {2, 5, criterion_embedding},
      {3, 120, criterion_weak_duality},
      {4, 900, criterion_algorithm1},
      {5, 1800, [&] { return criterion_fig1(o); }},
      {6, 1200, [&] { return criterion_fig2(o); }},
      {7, 1800, [&] { return criterion_stability(o); }},
      {8, 1200, [&] { return criterion_alternatives(o); }},
      {9, 600, [&] { return criterion_determinism(o); }},
      {10, 60, criterion_reconstruction},
  };
  const std::set<int> only(o.only.begin(), o.only.end());
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %d: %s; %.1f s of %.0f s budget%s\n", pass ? "PASS" : "FAIL", c.id,
                v.detail.c_str(), secs, c.budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
