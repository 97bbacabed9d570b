#pragma once

#include <cmath>
#include <vector>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/density.hpp"
#include "uavdeploy/error.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/quadrature.hpp"
#include "uavdeploy/static_placement.hpp"

namespace uavdeploy {

/// K periodic slots of n points; slot k sits at time k T / K and slot K is slot 0.
struct Trajectory {
  std::vector<Deployment> slots;
  double period = 1.0;

  Trajectory() = default;
  Trajectory(std::vector<Deployment> s, double T) : slots(std::move(s)), period(T) { validate(); }

  static Trajectory stationary(const Deployment& x, int K, double T) {
    return Trajectory(std::vector<Deployment>(K, x), T);
  }

  int K() const { return static_cast<int>(slots.size()); }
  int n() const { return slots.empty() ? 0 : static_cast<int>(slots.front().size()); }
  int dim() const { return slots.empty() || slots.front().empty() ? 1 : slots.front().front().dim; }
  double slot_time(int k) const { return period * k / K(); }

  const Deployment& slot(int k) const { return slots[((k % K()) + K()) % K()]; }
  Deployment& slot(int k) { return slots[((k % K()) + K()) % K()]; }

  void validate() const {
    require(slots.size() >= 2, "Trajectory: need at least two slots");
    require(period > 0.0, "Trajectory: period must be positive");
    const std::size_t n = slots.front().size();
    require(n >= 1, "Trajectory: empty slot");
    const int d = slots.front().front().dim;
    for (const auto& s : slots) {
      require(s.size() == n, "Trajectory: every slot must have the same n");
      for (const auto& p : s) require(p.dim == d && p.finite(), "Trajectory: bad point");
    }
  }

  /// Piecewise-linear reconstruction of UAV i at time t (periodic).
  Point at(double t, int i) const {
    double u = std::fmod(t / period, 1.0);
    if (u < 0.0) u += 1.0;
    const double pos = u * K();
    const int k = std::min(static_cast<int>(std::floor(pos)), K() - 1);
    const double frac = pos - k;
    const Point& a = slot(k)[i];
    const Point& b = slot(k + 1)[i];
    return a + (b - a) * frac;
  }
};

struct MovementReport {
  std::vector<double> per_uav;
  double total = 0.0;
};

/// Path length per unit time of each UAV, wrap segment included.
inline MovementReport trajectory_movement(const Trajectory& traj) {
  require(traj.K() >= 2, "trajectory_movement: need at least two slots");
  MovementReport rep;
  rep.per_uav.assign(traj.n(), 0.0);
  CompensatedSum total;
  for (int i = 0; i < traj.n(); ++i) {
    CompensatedSum s;
    for (int k = 0; k < traj.K(); ++k) s += distance(traj.slot(k)[i], traj.slot(k - 1)[i]);
    rep.per_uav[i] = s.value() / traj.period;
    total += rep.per_uav[i];
  }
  rep.total = total.value();
  return rep;
}

/// Cost model, density and per-slot quadratures shared by the dynamic solvers.
struct DynamicProblem {
  CostModel model;
  SpatioTemporalDensity density;
  int K = 20;
  int resolution = 128;
  std::vector<Quadrature> slot_quadratures;

  DynamicProblem(CostModel m, SpatioTemporalDensity f, int slots, int res)
      : model(m), density(std::move(f)), K(slots), resolution(res) {
    model.validate();
    require(K >= 2, "DynamicProblem: K must be at least 2");
    slot_quadratures.reserve(K);
    for (int k = 0; k < K; ++k) slot_quadratures.push_back(build_quadrature(density, slot_time(k), resolution));
  }

  int dim() const { return density.dim(); }
  double period() const { return density.period(); }
  double slot_time(int k) const { return density.period() * k / K; }
  const Quadrature& slot(int k) const { return slot_quadratures[((k % K) + K) % K]; }

  double slot_cost(const Deployment& x, int k) const { return deployment_cost(model, x, slot(k)); }

  /// (1/K) sum_k P(y_k, f_k).
  double average_cost(const Trajectory& traj) const {
    require(traj.K() == K, "average_cost: slot count mismatch");
    CompensatedSum s;
    for (int k = 0; k < K; ++k) s += slot_cost(traj.slot(k), k);
    return s.value() / K;
  }
};

}  // namespace uavdeploy
