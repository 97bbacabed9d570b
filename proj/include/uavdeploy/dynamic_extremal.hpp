#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/error.hpp"
#include "uavdeploy/quadrature.hpp"
#include "uavdeploy/static_placement.hpp"
#include "uavdeploy/trajectory.hpp"

namespace uavdeploy {

struct ExtremalOptions {
  LloydOptions lloyd{};
  int starts = 1;         // Lloyd starts per solve (default start + k-means++ seeds)
  int cold_restarts = 0;  // extra k-means++ starts per slot in the unlimited-movement solve
  std::uint64_t seed = 1;
};

struct ZeroMovementResult {
  Deployment points;
  double Q = 0.0;             // (1/K) sum_k P(x, f_k)
  double Q_time_average = 0.0;  // P(x, fbar) against the slot mixture
  std::vector<double> slot_costs;
  LloydResult lloyd;
};

/// Best fixed deployment: Lloyd against the slot average of the density.
inline ZeroMovementResult solve_zero_movement(const DynamicProblem& prob, int n, const ExtremalOptions& opt = {}) {
  require(n >= 1, "solve_zero_movement: n must be positive");
  const Quadrature mix = mixture_quadrature(prob.slot_quadratures);
  ZeroMovementResult res;
  res.lloyd = lloyd_multistart(prob.model, mix, n, opt.starts, opt.seed, opt.lloyd);
  res.points = res.lloyd.points;
  CompensatedSum s;
  for (int k = 0; k < prob.K; ++k) {
    res.slot_costs.push_back(prob.slot_cost(res.points, k));
    s += res.slot_costs.back();
  }
  res.Q = s.value() / prob.K;
  res.Q_time_average = deployment_cost(prob.model, res.points, mix);
  return res;
}

namespace detail {

/// Relabels `next` so that point i stays close to prev[i]: pairs are taken in
/// increasing distance order, ties by lower (prev, next) index.
inline Deployment greedy_match(const Deployment& prev, const Deployment& next) {
  const std::size_t n = prev.size();
  struct Pair {
    double d;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) pairs.push_back({squared_distance(prev[a], next[b]), a, b});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
  std::vector<bool> used_a(n, false), used_b(n, false);
  Deployment out(n);
  for (const auto& p : pairs) {
    if (used_a[p.a] || used_b[p.b]) continue;
    used_a[p.a] = used_b[p.b] = true;
    out[p.a] = next[p.b];
  }
  return out;
}

inline void sort_1d(Deployment& x) {
  std::sort(x.begin(), x.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
}

}  // namespace detail

struct UnlimitedMovementResult {
  Trajectory trajectory;
  double Q = 0.0;
  std::vector<double> slot_costs;
  MovementReport movement;
};

/// Per-slot optimum. Slot k is warm-started from slot k-1 and also solved from the
/// default start (plus optional cold restarts); the cheapest result is kept.
/// Labels follow rank order in 1-D and greedy nearest matching in 2-D.
inline UnlimitedMovementResult solve_unlimited_movement(const DynamicProblem& prob, int n,
                                                        const ExtremalOptions& opt = {}) {
  require(n >= 1, "solve_unlimited_movement: n must be positive");
  std::vector<Deployment> slots;
  UnlimitedMovementResult res;
  UniformSource rng(opt.seed);
  for (int k = 0; k < prob.K; ++k) {
    const Quadrature& q = prob.slot(k);
    LloydResult best = lloyd_static(prob.model, q, default_init(prob.model, q, n, opt.seed + k), opt.lloyd);
    if (k > 0) {
      LloydResult warm = lloyd_static(prob.model, q, slots.back(), opt.lloyd);
      if (warm.cost <= best.cost) best = std::move(warm);
    }
    for (int c = 0; c < opt.cold_restarts; ++c) {
      LloydResult cold = lloyd_static(prob.model, q, kmeanspp_init(q, n, rng), opt.lloyd);
      if (cold.cost < best.cost) best = std::move(cold);
    }
    Deployment x = std::move(best.points);
    if (prob.dim() == 1)
      detail::sort_1d(x);
    else if (k > 0)
      x = detail::greedy_match(slots.back(), x);
    res.slot_costs.push_back(best.cost);
    slots.push_back(std::move(x));
  }
  res.trajectory = Trajectory(std::move(slots), prob.period());
  CompensatedSum s;
  for (double c : res.slot_costs) s += c;
  res.Q = s.value() / prob.K;
  res.movement = trajectory_movement(res.trajectory);
  return res;
}

/// x_{k,i} = inverse CDF of lambda*(.; f_k) at (2i-1)/2n.
inline Trajectory analytic_trajectory_1d(const SpatioTemporalDensity& density, const CostModel& model, int n, int K,
                                         int panels = 256) {
  if (density.dim() != 1) throw unsupported_dimension("analytic_trajectory_1d: one-dimensional densities only");
  require(n >= 1 && K >= 2, "analytic_trajectory_1d: need n >= 1 and K >= 2");
  std::vector<Deployment> slots;
  for (int k = 0; k < K; ++k) {
    const double t = density.period() * k / K;
    const OptimalPointDensity lambda(density, model, t, panels);
    const Box box = density.support(t);
    const Cdf1D cdf([&lambda](double q) { return lambda(Point(q)); }, box.lo[0], box.hi[0], panels);
    Deployment x;
    for (int i = 1; i <= n; ++i) x.emplace_back(cdf.inverse((2.0 * i - 1.0) / (2.0 * n)));
    slots.push_back(std::move(x));
  }
  return Trajectory(std::move(slots), density.period());
}

}  // namespace uavdeploy
