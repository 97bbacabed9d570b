#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "uavdeploy/dynamic_extremal.hpp"
#include "uavdeploy/static_placement.hpp"
#include "uavdeploy/trajectory_optimizer.hpp"
#include "uavdeploy/harness/compare.hpp"
#include "uavdeploy/harness/config.hpp"
#include "uavdeploy/harness/records.hpp"

namespace uavdeploy::harness {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kOutputRootEnv = "UAVDEPLOY_OUTPUT_ROOT";

struct RunOptions {
  std::filesystem::path out_dir;  // empty: derived from the environment and the scenario id
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  int verbosity = 0;
  bool write_files = true;
};

/// Explicit directory, else $UAVDEPLOY_OUTPUT_ROOT/<id>, else ./out/<id>.
inline std::filesystem::path resolve_output_dir(const std::filesystem::path& flag, const std::string& id) {
  if (!flag.empty()) return flag;
  const std::string leaf = id.empty() ? "scenario" : id;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return std::filesystem::path(root) / leaf;
  return std::filesystem::path("out") / leaf;
}

inline void apply_overrides(ScenarioConfig& cfg, const RunOptions& opt) {
  if (opt.seed) cfg.solver.seed = *opt.seed;
  if (opt.resolution) {
    if (*opt.resolution < 8) throw config_error("solver.resolution", "must be at least 8");
    cfg.solver.resolution = *opt.resolution;
  }
}

struct RunOutput {
  ScenarioConfig config;
  std::vector<ResultRecord> records;
  std::filesystem::path out_dir;
  std::vector<std::string> files;
  int failed = 0;
};

namespace detail {

inline LloydOptions lloyd_options(const SolverSettings& s) {
  LloydOptions o;
  o.max_iterations = s.lloyd_max_iterations;
  o.tolerance = s.lloyd_tolerance;
  return o;
}

inline ExtremalOptions extremal_options(const SolverSettings& s) {
  ExtremalOptions o;
  o.lloyd = lloyd_options(s);
  o.starts = s.lloyd_starts;
  o.cold_restarts = s.cold_restarts;
  o.seed = s.seed;
  return o;
}

class Runner {
 public:
  Runner(const ScenarioConfig& cfg, int verbosity) : cfg_(cfg), verbosity_(verbosity), predictor_(cfg) {}

  std::vector<ResultRecord> run() {
    for (int n : cfg_.n_list) {
      switch (cfg_.kind) {
        case ExperimentKind::Static: guarded(n, "static", [&](ResultRecord& r) { static_record(r, n); }); break;
        case ExperimentKind::ZeroMovement: guarded(n, "zero", [&](ResultRecord& r) { zero_record(r, n); }); break;
        case ExperimentKind::UnlimitedMovement:
          guarded(n, "unlimited", [&](ResultRecord& r) { unlimited_record(r, n); });
          break;
        case ExperimentKind::Sweep: sweep(n); break;
        case ExperimentKind::BaselineRandom: baseline(n); break;
        case ExperimentKind::AnalyticCompare:
          guarded(n, "unlimited", [&](ResultRecord& r) {
            unlimited_record(r, n);
            analytic_extras(r, n);
          });
          break;
      }
    }
    return std::move(records_);
  }

 private:
  const DynamicProblem& problem() {
    if (!prob_) prob_.emplace(cfg_.model, cfg_.density, cfg_.K, cfg_.solver.resolution);
    return *prob_;
  }

  void log(const std::string& msg) const {
    if (verbosity_ > 0) std::cerr << "[" << cfg_.id << "] " << msg << '\n';
  }

  ResultRecord blank(int n, const std::string& label) const {
    ResultRecord r;
    r.scenario_id = cfg_.id;
    r.kind = to_string(cfg_.kind);
    r.label = label;
    r.n = n;
    r.seed = cfg_.solver.seed;
    return r;
  }

  void finish(ResultRecord& r) {
    r.Q_minus_hr = r.Q - std::pow(cfg_.model.h, cfg_.model.r);
    if (!r.predicted) r.predicted = predictor_.for_label(r.label, r.n);
  }

  /// Runs one solve; failures become an error record and the run carries on.
  void guarded(int n, const std::string& label, const std::function<void(ResultRecord&)>& body) {
    ResultRecord r = blank(n, label);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(r);
      finish(r);
    } catch (const std::exception& e) {
      r.status = std::string("error: ") + e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log(label + " n=" + std::to_string(n) + " Q=" + fmt(r.Q) + " (" + fmt(r.wall_time) + " s) " + r.status);
    records_.push_back(std::move(r));
  }

  void static_record(ResultRecord& r, int n) {
    const Quadrature q = build_quadrature(cfg_.density, cfg_.solver.time, cfg_.solver.resolution);
    const LloydResult res =
        lloyd_multistart(cfg_.model, q, n, cfg_.solver.lloyd_starts, cfg_.solver.seed, lloyd_options(cfg_.solver));
    r.Q = res.cost;
    r.points = res.points;
    r.metrics = {{"iterations", static_cast<double>(res.iterations)}, {"converged", res.converged ? 1.0 : 0.0}};
  }

  const ZeroMovementResult& zero(int n) {
    if (!zero_ || zero_->points.size() != static_cast<std::size_t>(n))
      zero_ = solve_zero_movement(problem(), n, extremal_options(cfg_.solver));
    return *zero_;
  }

  const UnlimitedMovementResult& unlimited(int n) {
    if (!unlimited_ || unlimited_->trajectory.n() != n)
      unlimited_ = solve_unlimited_movement(problem(), n, extremal_options(cfg_.solver));
    return *unlimited_;
  }

  void zero_record(ResultRecord& r, int n) {
    const ZeroMovementResult& z = zero(n);
    r.Q = z.Q;
    r.points = z.points;
    r.L = z.Q;
    r.per_uav_movement.assign(n, 0.0);
    r.metrics = {{"Q_time_average", z.Q_time_average}, {"iterations", static_cast<double>(z.lloyd.iterations)}};
  }

  void unlimited_record(ResultRecord& r, int n) {
    const UnlimitedMovementResult& u = unlimited(n);
    r.Q = u.Q;
    r.M_total = u.movement.total;
    r.M_per_uav = u.movement.total / n;
    r.per_uav_movement = u.movement.per_uav;
    r.trajectory = u.trajectory;
  }

  void analytic_extras(ResultRecord& r, int n) {
    const DynamicProblem& p = problem();
    const Trajectory ref = analytic_trajectory_1d(cfg_.density, cfg_.model, n, cfg_.K);
    double worst = 0.0;
    for (int k = 0; k < cfg_.K; ++k) {
      r.drift.push_back(cfg_.density.support(p.slot_time(k)).lo[0]);
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(r.trajectory->slot(k)[i][0] - ref.slot(k)[i][0]));
    }
    const MovementReport m = trajectory_movement(ref);
    r.metrics = {{"max_deviation", worst}, {"analytic_Q", p.average_cost(ref)}, {"analytic_M_total", m.total}};
    r.reference = ref;
  }

  LagrangianConfig lagrangian_config() const {
    LagrangianConfig c;
    c.K = cfg_.K;
    c.max_epochs = cfg_.solver.max_epochs;
    c.max_iterations = cfg_.solver.max_iterations;
    c.inner_tol = cfg_.solver.inner_tol;
    c.seed = cfg_.solver.seed;
    return c;
  }

  void sweep(int n) {
    guarded(n, "zero", [&](ResultRecord& r) { zero_record(r, n); });
    guarded(n, "unlimited", [&](ResultRecord& r) { unlimited_record(r, n); });
    if (records_.end()[-1].status != "ok" || records_.end()[-2].status != "ok") return;
    const DynamicProblem& p = problem();
    const Trajectory fixed = Trajectory::stationary(zero(n).points, cfg_.K, p.period());
    Trajectory warm = unlimited(n).trajectory;
    std::vector<double> ells = cfg_.ells(n);
    std::sort(ells.begin(), ells.end());
    for (double ell : ells) {
      guarded(n, "sweep", [&](ResultRecord& r) {
        const SweepResult s = sweep_tradeoff(p, n, {ell}, lagrangian_config(), fixed, warm);
        const LagrangianReport& rep = s.reports.front();
        r.ell = ell;
        r.Q = rep.last().Q;
        r.L = rep.last().L;
        r.M_total = rep.last().M;
        r.M_per_uav = r.M_total / n;
        r.per_uav_movement = trajectory_movement(rep.final_trajectory).per_uav;
        r.epochs_run = rep.epochs_run;
        r.convergence.push_back(rep.initial);
        r.convergence.insert(r.convergence.end(), rep.per_epoch.begin(), rep.per_epoch.end());
        r.trajectory = rep.final_trajectory;
        r.metrics = {{"rejected_updates", static_cast<double>(rep.rejected_updates)}};
        warm = rep.final_trajectory;
      });
    }
  }

  void baseline(int n) {
    guarded(n, "zero", [&](ResultRecord& r) { zero_record(r, n); });
    guarded(n, "unlimited", [&](ResultRecord& r) { unlimited_record(r, n); });
    const DynamicProblem& p = problem();
    const int samples = cfg_.solver.baseline_samples;
    const std::uint64_t seed = cfg_.solver.seed;
    const bool have_zero = records_.end()[-2].status == "ok";
    const bool have_unlimited = records_.end()[-1].status == "ok";
    guarded(n, "random_static", [&](ResultRecord& r) {
      const Quadrature mix = mixture_quadrature(p.slot_quadratures);
      r.Q = random_baseline_cost(cfg_.model, mix, cfg_.density.union_support(), n, samples, seed);
      if (have_zero) r.metrics = {{"ratio_to_optimal", r.Q / zero(n).Q}};
    });
    guarded(n, "random_dynamic", [&](ResultRecord& r) {
      CompensatedSum s;
      for (int k = 0; k < p.K; ++k)
        s += random_baseline_cost(cfg_.model, p.slot(k), cfg_.density.support(p.slot_time(k)), n, samples,
                                  seed + static_cast<std::uint64_t>(k));
      r.Q = s.value() / p.K;
      if (have_unlimited) r.metrics = {{"ratio_to_optimal", r.Q / unlimited(n).Q}};
    });
  }

  const ScenarioConfig& cfg_;
  int verbosity_;
  AsymptoticPredictor predictor_;
  std::optional<DynamicProblem> prob_;
  std::optional<ZeroMovementResult> zero_;
  std::optional<UnlimitedMovementResult> unlimited_;
  std::vector<ResultRecord> records_;
};

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

/// Runs every (n, multiplier) cell of a scenario and writes results.tsv, records.json and
/// manifest.json into the output directory.
inline RunOutput run_scenario(ScenarioConfig cfg, const RunOptions& opt = {}) {
  apply_overrides(cfg, opt);
  RunOutput out;
  out.records = detail::Runner(cfg, opt.verbosity).run();
  for (const auto& r : out.records)
    if (r.status != "ok") ++out.failed;
  out.config = std::move(cfg);
  if (!opt.write_files) return out;

  out.out_dir = resolve_output_dir(opt.out_dir, out.config.id);
  std::filesystem::create_directories(out.out_dir);
  {
    std::ofstream f(out.out_dir / "results.tsv");
    write_results_tsv(f, out.records);
  }
  {
    std::ofstream f(out.out_dir / "records.json");
    write_records_json(f, out.records);
  }
  out.files = {"results.tsv", "records.json", "manifest.json"};
  json m;
  m["scenario_id"] = out.config.id;
  m["kind"] = to_string(out.config.kind);
  m["config_hash"] = "fnv1a64:" + detail::hex64(fnv1a(out.config.source_text));
  m["seed"] = out.config.solver.seed;
  m["resolution"] = out.config.solver.resolution;
  m["version"] = kVersion;
  m["compiler"] = __VERSION__;
  m["records"] = out.records.size();
  m["failed_records"] = out.failed;
  m["files"] = out.files;
  std::ofstream f(out.out_dir / "manifest.json");
  f << m.dump(1) << '\n';
  return out;
}

}  // namespace uavdeploy::harness
