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

// Monte Carlo driver: one run synthesizes snapshots, forms the nominal
// quantities, solves the robust beamformer and the baselines, and scores
// each against the realized steering vector and the true INC matrix.

#ifndef DRAB_HARNESS_EXPERIMENT_HPP_
#define DRAB_HARNESS_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "drab/array_model.hpp"
#include "drab/dro_builders.hpp"
#include "drab/harness/config.hpp"
#include "drab/inc_reconstruct.hpp"
#include "drab/moments.hpp"
#include "drab/random.hpp"
#include "drab/rank_one.hpp"
#include "json.hpp"

namespace drab {

/// MVDR weight (Rhat + loading I)^{-1} d0, scaled so that w^H d0 = 1.
inline ComplexVector mvdr_smi(const HermitianMatrix& Rhat, const ComplexVector& d0,
                              double loading) {
  const Eigen::Index n = d0.size();
  if (Rhat.rows() != n || Rhat.cols() != n)
    throw InvalidArgument("mvdr_smi: dimension mismatch");
  if (!(loading >= 0.0)) throw InvalidArgument("mvdr_smi: loading must be >= 0");
  const HermitianMatrix loaded = Rhat + loading * HermitianMatrix::Identity(n, n);
  Eigen::LLT<ComplexMatrix> llt(loaded);
  const double scale = std::max(1.0, lambda_max(loaded));
  if (llt.info() != Eigen::Success || !(lambda_min(loaded) > 1e-13 * scale))
    throw SingularMatrix("mvdr_smi: loaded covariance is singular");
  const ComplexVector u = llt.solve(d0);
  return u / d0.dot(u);  // d0^H u is real positive
}

struct MethodResult {
  std::string method;
  bool ok = false;
  double sinr_db = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double seconds = 0.0;
  std::string error;
  nlohmann::json diagnostics;
};

struct RunResult {
  int run_index = 0;
  std::uint64_t snapshot_seed = 0;
  double optimal_sinr_db = 0.0;
  std::vector<MethodResult> methods;

  const MethodResult* find(const std::string& method) const {
    for (const auto& m : methods)
      if (m.method == method) return &m;
    return nullptr;
  }
};

/// CSV/JSON name of the robust beamformer for a formulation.
inline std::string dro_method_name(const FormulationKind& f) {
  switch (f.family) {
    case Family::kMainD1D2: return "dro";
    case Family::kAltD2Prime: return "dro_d2prime";
    case Family::kAltD2PP: return "dro_d2pp";
    case Family::kAltD1Prime: return "dro_d1prime";
  }
  return "dro";
}

/// Everything a run needs besides the solver: data, nominal and moments.
struct RunInputs {
  SnapshotBlock block;
  HermitianMatrix Rhat;
  HermitianMatrix S0;
  SectorMoments moments;
  HermitianMatrix Q;
  HermitianMatrix Rin;
  double signal_power = 0.0;
};

inline RunInputs prepare_run(const ExperimentConfig& cfg, int run_index) {
  RunInputs in;
  const auto run = static_cast<std::uint64_t>(run_index);
  const int n = cfg.scenario.geometry.n_sensors;
  in.block = synth_snapshots(cfg.scenario, cfg.snapshots,
                             derive_seed(cfg.master_seed, run, Stream::kSnapshots));
  in.Rhat = sample_covariance(in.block);
  in.Rin = true_inc(cfg.scenario);
  in.signal_power = cfg.scenario.signal_power();
  switch (cfg.nominal_source) {
    case NominalSource::kSampleCovariance: in.S0 = in.Rhat; break;
    case NominalSource::kReconstructedInc: {
      ReconstructionConfig rc = cfg.reconstruction;
      rc.excluded_sector_deg = cfg.scenario.sector_deg;
      in.S0 = capon_reconstruct(in.Rhat, cfg.scenario.geometry, rc);
      break;
    }
    case NominalSource::kExactInc: in.S0 = in.Rin; break;
  }
  in.moments = sector_moments(cfg.scenario.geometry, cfg.scenario.sector_deg,
                              cfg.params.sector_samples,
                              derive_seed(cfg.master_seed, run, Stream::kSectorSamples),
                              cfg.params.sector_loading);
  if (cfg.formulation.family == Family::kAltD2Prime ||
      cfg.formulation.family == Family::kAltD2PP)
    in.Q = random_shape_matrix(n, derive_seed(cfg.master_seed, run, Stream::kShapeMatrix));
  return in;
}

inline D1Params make_d1(const ExperimentConfig& cfg, const HermitianMatrix& S0) {
  D1Params d1;
  d1.S0 = S0;
  d1.rho1 = cfg.params.rho1_rel * S0.norm();
  d1.rho2 = cfg.params.rho2_rel * real_trace(S0);
  d1.support = cfg.formulation.d1_support;
  return d1;
}

inline D2Params make_d2(const ExperimentConfig& cfg, const SectorMoments& m) {
  D2Params d2;
  d2.a0 = m.a0;
  d2.Sigma = m.Sigma;
  d2.gamma1 = cfg.params.gamma1_rel * m.a0.norm();
  d2.gamma2 = cfg.params.gamma2;
  d2.Delta = cfg.params.delta;
  d2.support = cfg.formulation.z2_support;
  return d2;
}

inline D2PrimeParams make_d2prime(const ExperimentConfig& cfg, const SectorMoments& m,
                                  const HermitianMatrix& Q) {
  D2PrimeParams p;
  p.abar = m.a0;
  p.Sigmabar = m.Sigma;
  p.Q = Q;
  p.gamma1 = cfg.params.d2prime_gamma1_rel * m.a0.norm();
  p.gamma2 = cfg.params.d2prime_gamma2_rel * m.Sigma.norm();
  p.Delta = cfg.params.delta;
  return p;
}

inline D2PPParams make_d2pp(const ExperimentConfig& cfg, const SectorMoments& m,
                            const HermitianMatrix& Q) {
  D2PPParams p;
  static_cast<D2PrimeParams&>(p) = make_d2prime(cfg, m, Q);
  p.gamma2 = cfg.params.d2pp_gamma2;
  return p;
}

inline D1PrimeParams make_d1prime(const ExperimentConfig& cfg, const HermitianMatrix& S0,
                                  const HermitianMatrix& Rhat) {
  D1PrimeParams p;
  p.S0 = S0;
  p.rho1 = cfg.params.d1prime_rho1;
  p.eps = cfg.params.d1prime_eps_rel * lambda_max(Rhat);
  p.rho2 = cfg.params.d1prime_rho2_rel * real_trace(S0);
  p.support = cfg.formulation.d1_support;
  return p;
}

/// The relaxation the configured formulation solves for one run.
inline ConicProblemIR build_relaxation(const ExperimentConfig& cfg, const RunInputs& in) {
  const D2Params d2 = make_d2(cfg, in.moments);
  switch (cfg.formulation.family) {
    case Family::kMainD1D2: return build_main_relaxation(make_d1(cfg, in.S0), d2);
    case Family::kAltD2Prime:
      return build_d2prime_relaxation(make_d1(cfg, in.S0), make_d2prime(cfg, in.moments, in.Q),
                                      cfg.formulation.z2_support);
    case Family::kAltD2PP:
      return build_d2pp_relaxation(make_d1(cfg, in.S0), make_d2pp(cfg, in.moments, in.Q),
                                   cfg.formulation.z2_support);
    case Family::kAltD1Prime:
      return build_d1prime_relaxation(make_d1prime(cfg, in.S0, in.Rhat), d2);
  }
  throw InvalidArgument("build_relaxation: unknown family");
}

namespace experiment_detail {

inline MethodResult score(const std::string& method, const ComplexVector& w,
                          const RunInputs& in) {
  MethodResult r;
  r.method = method;
  r.sinr_db = output_sinr(w, in.block.desired_steering, in.signal_power, in.Rin);
  r.ok = std::isfinite(r.sinr_db);
  if (!r.ok) r.error = "non-finite SINR";
  return r;
}

template <typename F>
MethodResult guarded(const std::string& method, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  MethodResult r;
  try {
    r = body();
  } catch (const Algorithm1Error& e) {
    r = MethodResult{};
    r.error = e.what();
    r.diagnostics = to_json(e.diagnostics());
    r.iterations = e.diagnostics().iterations;
  } catch (const std::exception& e) {
    r = MethodResult{};
    r.error = e.what();
  }
  r.method = method;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace experiment_detail

/// One Monte Carlo run; deterministic in (master_seed, run_index). Errors in
/// any method are recorded in its MethodResult, never thrown.
inline RunResult run_once(const ExperimentConfig& cfg, int run_index) {
  RunResult out;
  out.run_index = run_index;
  out.snapshot_seed =
      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run_index), Stream::kSnapshots);
  RunInputs in;
  try {
    in = prepare_run(cfg, run_index);
  } catch (const std::exception& e) {
    for (const auto& m : {dro_method_name(cfg.formulation), std::string("mvdr_smi"),
                                std::string("mvdr_dl"), std::string("optimal")}) {
      MethodResult r;
      r.method = m;
      r.error = e.what();
      out.methods.push_back(r);
    }
    out.optimal_sinr_db = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  using experiment_detail::guarded;
  using experiment_detail::score;

  out.methods.push_back(guarded(dro_method_name(cfg.formulation), [&] {
    const ConicProblemIR ir = build_relaxation(cfg, in);
    const BeamformerResult b = algorithm1(ir, cfg.formulation, cfg.algorithm);
    MethodResult r = score("", b.w, in);
    r.iterations = b.diagnostics.iterations;
    r.diagnostics = to_json(b.diagnostics);
    if (!b.diagnostics.feasible) {
      r.ok = false;
      r.error = "rank-one point fails the feasibility re-check";
    }
    return r;
  }));
  const ComplexVector d0 = ula_steering(cfg.scenario.geometry, cfg.scenario.presumed_doa_deg);
  out.methods.push_back(guarded("mvdr_smi", [&] { return score("", mvdr_smi(in.Rhat, d0, 0.0), in); }));
  out.methods.push_back(guarded("mvdr_dl", [&] {
    return score("", mvdr_smi(in.Rhat, d0, cfg.dl_factor * std::max(0.0, lambda_min(in.Rhat))), in);
  }));
  out.methods.push_back(guarded("optimal", [&] {
    MethodResult r;
    r.sinr_db = optimal_sinr(in.block.desired_steering, in.signal_power, in.Rin);
    r.ok = true;
    return r;
  }));
  out.optimal_sinr_db = out.methods.back().sinr_db;
  return out;
}

struct SweepRow {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string method;
  double mean_sinr_db = 0.0;
  double std_sinr_db = 0.0;
  int runs = 0;
  int failures = 0;
  double mean_iters = 0.0;
  double mean_seconds = 0.0;
};

struct SweepPoint {
  double value = 0.0;
  std::vector<RunResult> runs;
};

struct SweepResult {
  std::string sweep_name;
  std::vector<SweepRow> rows;
  std::vector<SweepPoint> points;

  const SweepRow* row(double value, const std::string& method) const {
    for (const auto& r : rows)
      if (r.sweep_value == value && r.method == method) return &r;
    return nullptr;
  }
  /// Largest failure fraction of the robust beamformer over all rows.
  double worst_failure_rate(const std::string& method) const {
    double worst = 0.0;
    for (const auto& r : rows)
      if (r.method == method && r.runs > 0)
        worst = std::max(worst, static_cast<double>(r.failures) / r.runs);
    return worst;
  }
};

inline std::string sweep_name(const ExperimentConfig& cfg) {
  switch (cfg.sweep) {
    case SweepKind::kNone: return "none";
    case SweepKind::kSnr: return "snr_db";
    case SweepKind::kSnapshots: return "snapshots";
    case SweepKind::kParam: return cfg.sweep_param;
  }
  return "none";
}

/// Copy of cfg with one sweep value applied.
inline ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  switch (cfg.sweep) {
    case SweepKind::kNone: break;
    case SweepKind::kSnr: c.scenario.snr_db = value; break;
    case SweepKind::kSnapshots: c.snapshots = static_cast<int>(value); break;
    case SweepKind::kParam: set_config_value(c, cfg.sweep_param, value); break;
  }
  c.sweep = SweepKind::kNone;
  return c;
}

/// Runs every (sweep value, run index) pair. Run i uses the same seeds at
/// every sweep value. A sweep of kind none is a single point at value 0.
inline SweepResult sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> values = cfg.sweep == SweepKind::kNone ? std::vector<double>{0.0}
                                                             : cfg.sweep_values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  SweepResult res;
  res.sweep_name = sweep_name(cfg);
  std::vector<ExperimentConfig> point_cfg;
  for (double v : values) {
    point_cfg.push_back(apply_sweep_value(cfg, v));
    point_cfg.back().validate();
    res.points.push_back({v, std::vector<RunResult>(static_cast<std::size_t>(cfg.runs))});
  }

  const std::size_t total = values.size() * static_cast<std::size_t>(cfg.runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t p = job / cfg.runs;
      const int run = static_cast<int>(job % cfg.runs);
      res.points[p].runs[run] = run_once(point_cfg[p], run);
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& point : res.points) {
    for (std::size_t m = 0; m < point.runs.front().methods.size(); ++m) {
      SweepRow row;
      row.sweep_name = res.sweep_name;
      row.sweep_value = point.value;
      row.method = point.runs.front().methods[m].method;
      std::vector<double> s;
      double iters = 0.0, secs = 0.0;
      for (const auto& run : point.runs) {
        const auto& mr = run.methods[m];
        ++row.runs;
        secs += mr.seconds;
        if (!mr.ok) {
          ++row.failures;
          continue;
        }
        s.push_back(mr.sinr_db);
        iters += mr.iterations;
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      if (s.empty()) {
        row.mean_sinr_db = row.std_sinr_db = row.mean_iters = nan;
      } else {
        double sum = 0.0;
        for (double v : s) sum += v;
        row.mean_sinr_db = sum / s.size();
        double ss = 0.0;
        for (double v : s) ss += (v - row.mean_sinr_db) * (v - row.mean_sinr_db);
        row.std_sinr_db = s.size() > 1 ? std::sqrt(ss / (s.size() - 1)) : 0.0;
        row.mean_iters = iters / s.size();
      }
      row.mean_seconds = cfg.timing ? secs / row.runs : 0.0;
      res.rows.push_back(row);
    }
  }
  return res;
}

namespace experiment_detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace experiment_detail

inline const char* kCsvHeader =
    "sweep_name,sweep_value,method,mean_sinr_db,std_sinr_db,runs,failures,mean_iters,"
    "mean_seconds";

inline void write_csv(std::ostream& os, const SweepResult& r) {
  using experiment_detail::num;
  os << kCsvHeader << "\n";
  for (const auto& row : r.rows) {
    os << row.sweep_name << "," << num(row.sweep_value) << "," << row.method << ","
       << num(row.mean_sinr_db) << "," << num(row.std_sinr_db) << "," << row.runs << ","
       << row.failures << "," << num(row.mean_iters) << "," << num(row.mean_seconds) << "\n";
  }
}

/// Full per-run record. Wall-clock fields appear only when cfg.timing is set.
inline nlohmann::json to_json(const SweepResult& r, const ExperimentConfig& cfg) {
  using nlohmann::json;
  json out;
  out["name"] = cfg.name;
  out["sweep_name"] = r.sweep_name;
  out["master_seed"] = cfg.master_seed;
  out["config"] = serialize_config(cfg);
  auto fin = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"sweep_value", row.sweep_value}, {"method", row.method},
           {"mean_sinr_db", fin(row.mean_sinr_db)}, {"std_sinr_db", fin(row.std_sinr_db)},
           {"runs", row.runs}, {"failures", row.failures}, {"mean_iters", fin(row.mean_iters)}};
    if (cfg.timing) j["mean_seconds"] = row.mean_seconds;
    rows.push_back(j);
  }
  out["rows"] = rows;
  json points = json::array();
  for (const auto& p : r.points) {
    json runs = json::array();
    for (const auto& run : p.runs) {
      json methods = json::array();
      for (const auto& m : run.methods) {
        json j{{"method", m.method}, {"ok", m.ok}, {"sinr_db", fin(m.sinr_db)},
               {"iterations", m.iterations}};
        if (!m.error.empty()) j["error"] = m.error;
        if (!m.diagnostics.is_null()) {
          json d = m.diagnostics;
          if (!cfg.timing) d.erase("seconds");
          j["diagnostics"] = d;
        }
        if (cfg.timing) j["seconds"] = m.seconds;
        methods.push_back(j);
      }
      runs.push_back({{"run_index", run.run_index},
                      {"snapshot_seed", run.snapshot_seed},
                      {"methods", methods}});
    }
    points.push_back({{"sweep_value", p.value}, {"runs", runs}});
  }
  out["points"] = points;
  return out;
}

}  // namespace drab

#endif  // DRAB_HARNESS_EXPERIMENT_HPP_
