#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/dynamic_extremal.hpp"
#include "uavdeploy/error.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/subproblem.hpp"
#include "uavdeploy/trajectory.hpp"

namespace uavdeploy {

struct LagrangianConfig {
  double ell = 0.0;
  int K = 20;
  int max_epochs = 20;
  int max_iterations = 30;  // inner iterations per slot visit
  double inner_tol = 1e-10;
  double epoch_tol = 1e-10;  // stop when an epoch improves L by less than this (relative)
  int max_descent_steps = 50;
  std::uint64_t seed = 1;

  void validate() const {
    require(std::isfinite(ell) && ell >= 0.0, "LagrangianConfig: ell must be >= 0");
    require(K >= 2, "LagrangianConfig: K must be at least 2");
    require(max_epochs >= 1, "LagrangianConfig: max_epochs must be at least 1");
    require(max_iterations >= 1, "LagrangianConfig: max_iterations must be at least 1");
  }
};

/// L = Q + ell M, with Q the slot-averaged cost and M the movement per unit time.
struct LagrangianValue {
  double L = 0.0;
  double Q = 0.0;
  double M = 0.0;
};

inline LagrangianValue discrete_lagrangian(const DynamicProblem& prob, const Trajectory& traj, double ell) {
  require(traj.K() == prob.K, "discrete_lagrangian: slot count mismatch");
  LagrangianValue v;
  v.Q = prob.average_cost(traj);
  v.M = trajectory_movement(traj).total;
  v.L = v.Q + ell * v.M;
  return v;
}

struct EpochRecord {
  int epoch = 0;
  double L = 0.0;
  double Q = 0.0;
  double M = 0.0;
};

struct LagrangianReport {
  EpochRecord initial;
  std::vector<EpochRecord> per_epoch;
  Trajectory final_trajectory;
  int epochs_run = 0;
  int rejected_updates = 0;

  const EpochRecord& last() const { return per_epoch.empty() ? initial : per_epoch.back(); }
};

/// Per-UAV slot objective with cells held fixed:
///   cost_scale * int_cell g(|y - q|^2) f + move_scale * (|y - u| + |y - v|).
struct UavObjective {
  const CostModel& model;
  const Quadrature& quad;
  const VoronoiPartition& part;
  std::size_t i;
  Point u, v;
  double cost_scale;
  double move_scale;

  double value(const Point& y) const {
    return cost_scale * cell_cost(model, y, part, i, quad) + move_scale * (distance(y, u) + distance(y, v));
  }
};

/// Gradient of the per-UAV objective; the norm terms contribute nothing when y sits on u or v.
inline Point subproblem_gradient(const UavObjective& obj, const Point& y) {
  Point g = cell_cost_gradient(obj.model, y, obj.part, obj.i, obj.quad) * obj.cost_scale;
  for (const Point* a : {&obj.u, &obj.v}) {
    const double d = distance(y, *a);
    if (d > 0.0) g += (y - *a) * (obj.move_scale / d);
  }
  return g;
}

namespace detail {

/// Minimizes the per-UAV objective from y. Each step solves the quadratic model
/// whose weights are m_j g'(s_j) exactly, then backtracks; gradient steps are the fallback.
inline Point minimize_uav(const UavObjective& obj, Point y, int max_steps) {
  const CostModel& model = obj.model;
  const double mass = obj.part.cell_mass[obj.i];
  if (!(mass > 0.0)) return obj.move_scale > 0.0 ? project_onto_segment(y, obj.u, obj.v) : y;

  if (model.quadratic()) {
    const Point w = obj.part.centroid(obj.i);
    if (obj.move_scale == 0.0) return w;
    const double c = obj.cost_scale * mass / obj.move_scale;
    return solve_subproblem({obj.u, obj.v, w, c}, y.dim);
  }

  double fy = obj.value(y);
  for (int step = 0; step < max_steps; ++step) {
    const double f_start = fy;
    CompensatedSum A, wx, wy;
    for (std::size_t m = obj.part.offsets[obj.i]; m < obj.part.offsets[obj.i + 1]; ++m) {
      const std::size_t j = obj.part.members[m];
      const double a = obj.quad.mass[j] * model.derivative(squared_distance(y, obj.quad.nodes[j]));
      A += a;
      wx += a * obj.quad.nodes[j][0];
      wy += a * obj.quad.nodes[j][1];
    }
    bool moved = false;
    if (A.value() > 0.0) {
      Point w = Point::zero(y.dim);
      w[0] = wx.value() / A.value();
      w[1] = wy.value() / A.value();
      const Point z = obj.move_scale > 0.0
                          ? solve_subproblem({obj.u, obj.v, w, obj.cost_scale * A.value() / obj.move_scale}, y.dim)
                          : w;
      const Point y0 = y, dir = z - y;
      double t = 1.0;
      for (int h = 0; h < 30; ++h, t *= 0.5) {
        const Point trial = y0 + dir * t;
        const double ft = obj.value(trial);
        if (ft < fy) {
          y = trial;
          fy = ft;
          moved = true;
        } else if (moved) {
          break;
        }
      }
    }
    if (!moved) {
      const Point g = subproblem_gradient(obj, y);
      const double gn = norm(g);
      if (gn <= 1e-9) break;
      double t = A.value() > 0.0 ? 0.5 / (obj.cost_scale * A.value()) : 1.0 / gn;
      for (int h = 0; h < 60; ++h, t *= 0.5) {
        const Point trial = y - g * t;
        const double ft = obj.value(trial);
        if (ft < fy) {
          y = trial;
          fy = ft;
          moved = true;
          break;
        }
      }
    }
    if (!moved || f_start - fy <= 1e-13 * std::fabs(fy)) break;
  }
  return y;
}

inline double slot_movement(const Deployment& a, const Deployment& b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s += distance(a[i], b[i]);
  return s.value();
}

}  // namespace detail

/// Slot-k Lagrangian: P_k / K plus ell/T times the two movement edges touching slot k.
inline double slot_lagrangian(const DynamicProblem& prob, const Trajectory& traj, int k, const Deployment& x,
                              double ell) {
  const double move = detail::slot_movement(traj.slot(k - 1), x) + detail::slot_movement(x, traj.slot(k + 1));
  return prob.slot_cost(x, k) / prob.K + ell / traj.period * move;
}

/// Repartition-and-update loop for slot k with its neighbours fixed.
inline Deployment minimize_slot(const DynamicProblem& prob, int k, const Trajectory& traj, double ell,
                                int max_iterations, double tol, int max_descent_steps = 50) {
  const Quadrature& quad = prob.slot(k);
  const Deployment& prev = traj.slot(k - 1);
  const Deployment& next = traj.slot(k + 1);
  Deployment x = traj.slot(k);
  double Lx = slot_lagrangian(prob, traj, k, x, ell);
  const double cost_scale = 1.0 / prob.K;
  const double move_scale = ell / traj.period;
  for (int it = 0; it < max_iterations; ++it) {
    const VoronoiPartition part = build_partition(x, quad);
    Deployment y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const UavObjective obj{prob.model, quad, part, i, prev[i], next[i], cost_scale, move_scale};
      y[i] = detail::minimize_uav(obj, x[i], max_descent_steps);
    }
    const double Ly = slot_lagrangian(prob, traj, k, y, ell);
    if (!(Ly <= Lx)) break;
    const double change = Lx - Ly;
    x = std::move(y);
    Lx = Ly;
    if (change <= tol * std::fabs(Lx)) break;
  }
  return x;
}

/// Alternating minimization over slots k = 0..K-1, repeated for up to max_epochs.
/// A slot update is kept only if the full Lagrangian does not increase.
inline LagrangianReport optimize_trajectory(const DynamicProblem& prob, int n, const LagrangianConfig& cfg,
                                            Trajectory init) {
  cfg.validate();
  require(cfg.K == prob.K, "optimize_trajectory: config K differs from the problem's");
  require(init.K() == prob.K && init.n() == n, "optimize_trajectory: init has the wrong shape");
  require(init.dim() == prob.dim(), "optimize_trajectory: init dimension mismatch");
  const int K = prob.K;
  const double T = init.period;

  std::vector<double> P(K), E(K);  // E[k]: movement on the edge (k-1, k)
  for (int k = 0; k < K; ++k) {
    P[k] = prob.slot_cost(init.slot(k), k);
    E[k] = detail::slot_movement(init.slot(k - 1), init.slot(k));
  }
  auto totals = [&](const std::vector<double>& p, const std::vector<double>& e) {
    CompensatedSum q, m;
    for (int k = 0; k < K; ++k) {
      q += p[k];
      m += e[k];
    }
    EpochRecord r;
    r.Q = q.value() / K;
    r.M = m.value() / T;
    r.L = r.Q + cfg.ell * r.M;
    return r;
  };

  LagrangianReport rep;
  rep.initial = totals(P, E);
  EpochRecord current = rep.initial;
  Trajectory traj = std::move(init);
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double L_before = current.L;
    for (int k = 0; k < K; ++k) {
      Deployment cand = minimize_slot(prob, k, traj, cfg.ell, cfg.max_iterations, cfg.inner_tol, cfg.max_descent_steps);
      std::vector<double> P2 = P, E2 = E;
      P2[k] = prob.slot_cost(cand, k);
      E2[k] = detail::slot_movement(traj.slot(k - 1), cand);
      E2[(k + 1) % K] = detail::slot_movement(cand, traj.slot(k + 1));
      const EpochRecord trial = totals(P2, E2);
      if (trial.L <= current.L) {
        traj.slot(k) = std::move(cand);
        P.swap(P2);
        E.swap(E2);
        current = trial;
      } else {
        ++rep.rejected_updates;
      }
    }
    current.epoch = epoch;
    rep.per_epoch.push_back(current);
    rep.epochs_run = epoch;
    if (L_before - current.L <= cfg.epoch_tol * std::fabs(L_before)) break;
  }
  rep.final_trajectory = std::move(traj);
  return rep;
}

/// Runs optimize_trajectory from each start and keeps the lowest final L.
inline LagrangianReport optimize_trajectory_best(const DynamicProblem& prob, int n, const LagrangianConfig& cfg,
                                                 const std::vector<Trajectory>& inits) {
  require(!inits.empty(), "optimize_trajectory_best: no starts");
  std::optional<LagrangianReport> best;
  for (const auto& init : inits) {
    LagrangianReport r = optimize_trajectory(prob, n, cfg, init);
    if (!best || r.last().L < best->last().L) best = std::move(r);
  }
  return std::move(*best);
}

struct TradeoffPoint {
  double ell = 0.0;
  double M_total = 0.0;
  double M_per_uav = 0.0;
  double Q = 0.0;
  double L = 0.0;
  int epochs = 0;
};

struct SweepResult {
  std::vector<TradeoffPoint> points;
  std::vector<LagrangianReport> reports;
};

/// Tradeoff curve over ascending multipliers. Every ell is started from the previous
/// ell's trajectory (the first from `first_start`) and from the stationary `fixed_start`;
/// the start reaching the lower L is kept.
inline SweepResult sweep_tradeoff(const DynamicProblem& prob, int n, const std::vector<double>& ell_values,
                                  const LagrangianConfig& cfg, const Trajectory& fixed_start,
                                  const Trajectory& first_start) {
  require(!ell_values.empty(), "sweep_tradeoff: no multipliers");
  for (std::size_t j = 0; j < ell_values.size(); ++j) {
    require(ell_values[j] > 0.0, "sweep_tradeoff: multipliers must be positive");
    require(j == 0 || ell_values[j] >= ell_values[j - 1], "sweep_tradeoff: multipliers must be sorted");
  }
  SweepResult out;
  Trajectory warm = first_start;
  for (double ell : ell_values) {
    LagrangianConfig c = cfg;
    c.ell = ell;
    LagrangianReport rep = optimize_trajectory_best(prob, n, c, {warm, fixed_start});
    TradeoffPoint p;
    p.ell = ell;
    p.Q = rep.last().Q;
    p.M_total = rep.last().M;
    p.M_per_uav = p.M_total / n;
    p.L = rep.last().L;
    p.epochs = rep.epochs_run;
    out.points.push_back(p);
    warm = rep.final_trajectory;
    out.reports.push_back(std::move(rep));
  }
  return out;
}

/// Points not dominated by a point with smaller movement, sorted by movement;
/// Q is strictly decreasing along the result.
inline std::vector<TradeoffPoint> lower_envelope(std::vector<TradeoffPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    return a.M_total < b.M_total || (a.M_total == b.M_total && a.Q < b.Q);
  });
  std::vector<TradeoffPoint> env;
  double best_q = std::numeric_limits<double>::infinity();
  for (const auto& p : pts)
    if (p.Q < best_q) {
      env.push_back(p);
      best_q = p.Q;
    }
  return env;
}

/// Piecewise-linear Q at per-UAV movement m on an envelope; nullopt outside its range.
inline std::optional<double> interpolate_q_at_movement(const std::vector<TradeoffPoint>& env, double m) {
  if (env.empty() || m < env.front().M_per_uav || m > env.back().M_per_uav) return std::nullopt;
  for (std::size_t j = 1; j < env.size(); ++j)
    if (m <= env[j].M_per_uav) {
      const double span = env[j].M_per_uav - env[j - 1].M_per_uav;
      const double s = span > 0.0 ? (m - env[j - 1].M_per_uav) / span : 0.0;
      return env[j - 1].Q + s * (env[j].Q - env[j - 1].Q);
    }
  return env.back().Q;
}

}  // namespace uavdeploy
