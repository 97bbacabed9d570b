#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/density.hpp"
#include "uavdeploy/quadrature.hpp"
#include "uavdeploy/static_placement.hpp"
#include "uavdeploy/harness/config.hpp"
#include "uavdeploy/harness/records.hpp"

namespace uavdeploy::harness {

/// Large-n cost predictions for one scenario. Norms are computed once; predictions
/// are then affine in the norm.
class AsymptoticPredictor {
 public:
  AsymptoticPredictor(const SpatioTemporalDensity& density, const CostModel& model, int K, int resolution = 256,
                      int time_steps = 0, double snapshot_time = 0.0)
      : model_(model), dim_(density.dim()), density_(density), K_(K), resolution_(resolution),
        time_steps_(time_steps), snapshot_time_(snapshot_time) {}

  explicit AsymptoticPredictor(const ScenarioConfig& cfg)
      : AsymptoticPredictor(cfg.density, cfg.model, cfg.K, std::max(cfg.solver.resolution, 64), cfg.solver.time_steps,
                            cfg.solver.time) {}

  double order() const { return asymptotic_norm_order(model_, dim_); }

  /// Norm of the time-averaged density.
  double time_average_norm() {
    if (!fbar_norm_) {
      if (density_.time_invariant()) {
        fbar_norm_ = alpha_norm(build_quadrature(density_, 0.0, resolution_), order());
      } else {
        const int steps = time_steps_ > 0 ? time_steps_ : (dim_ == 1 ? 2001 : 201);
        const SpatioTemporalDensity fbar = time_averaged_density(density_, steps);
        fbar_norm_ = alpha_norm(build_quadrature(fbar, 0.0, resolution_), order());
      }
    }
    return *fbar_norm_;
  }

  /// Mean over the K slots of the per-slot norm.
  double slot_mean_norm() {
    if (!slot_norm_) {
      CompensatedSum s;
      for (int k = 0; k < K_; ++k)
        s += alpha_norm(build_quadrature(density_, density_.period() * k / K_, resolution_), order());
      slot_norm_ = s.value() / K_;
    }
    return *slot_norm_;
  }

  double snapshot_norm() {
    if (!snap_norm_) snap_norm_ = alpha_norm(build_quadrature(density_, snapshot_time_, resolution_), order());
    return *snap_norm_;
  }

  double zero_movement(int n) { return asymptotic_power_from_norm(model_, dim_, time_average_norm(), n); }
  double unlimited_movement(int n) { return asymptotic_power_from_norm(model_, dim_, slot_mean_norm(), n); }
  double snapshot(int n) { return asymptotic_power_from_norm(model_, dim_, snapshot_norm(), n); }

  /// n-independent part of the prediction (h^r for the fixed-rate model).
  double limit() const { return asymptotic_power_from_norm(model_, dim_, 0.0, 1); }

  /// Prediction matching a record label, if there is one.
  std::optional<double> for_label(const std::string& label, int n) {
    if (label == "zero") return zero_movement(n);
    if (label == "unlimited") return unlimited_movement(n);
    if (label == "static") return snapshot(n);
    return std::nullopt;
  }

  int dim() const { return dim_; }

 private:
  CostModel model_;
  int dim_;
  SpatioTemporalDensity density_;
  int K_;
  int resolution_;
  int time_steps_;
  double snapshot_time_;
  std::optional<double> fbar_norm_, slot_norm_, snap_norm_;
};

struct ComparisonRow {
  std::string scenario_id;
  std::string label;
  int n = 0;
  double simulated = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;  // on the excess over the n -> infinity limit
  double threshold = 0.0;
  bool gated = false;
  bool pass = true;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (r.gated && !r.pass) return false;
    return true;
  }
};

/// Counts at or above this are gated; below it errors are only reported.
inline constexpr int kGateMinimumN = 32;

inline double gate_threshold(int dim) { return dim == 1 ? 0.06 : 0.15; }

inline ComparisonReport compare_with_asymptotics(const std::vector<ResultRecord>& records,
                                                 AsymptoticPredictor& predictor) {
  ComparisonReport rep;
  const double lead = predictor.limit();
  for (const auto& r : records) {
    if (r.status != "ok") continue;
    const auto pred = predictor.for_label(r.label, r.n);
    if (!pred) continue;
    ComparisonRow row;
    row.scenario_id = r.scenario_id;
    row.label = r.label;
    row.n = r.n;
    row.simulated = r.Q;
    row.predicted = *pred;
    row.relative_error = (r.Q - lead) / (*pred - lead) - 1.0;
    row.threshold = gate_threshold(predictor.dim());
    row.gated = r.n >= kGateMinimumN;
    row.pass = std::fabs(row.relative_error) <= row.threshold;
    rep.rows.push_back(row);
  }
  return rep;
}

inline void write_comparison_tsv(std::ostream& out, const ComparisonReport& rep) {
  out << "scenario\tlabel\tn\tQ\tpredicted\trelative_error\tthreshold\tgated\tpass\n";
  for (const auto& r : rep.rows)
    out << r.scenario_id << '\t' << r.label << '\t' << r.n << '\t' << fmt(r.simulated) << '\t' << fmt(r.predicted)
        << '\t' << fmt(r.relative_error) << '\t' << fmt(r.threshold) << '\t' << (r.gated ? "yes" : "no") << '\t'
        << (r.pass ? "pass" : r.gated ? "FAIL" : "over") << '\n';
}

}  // namespace uavdeploy::harness
