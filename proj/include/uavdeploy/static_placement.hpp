#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/density.hpp"
#include "uavdeploy/error.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/quadrature.hpp"

namespace uavdeploy {

using Deployment = std::vector<Point>;

/// Normalized r-th moment of the optimal cell: the unit interval (d = 1) or the
/// unit-area regular hexagon (d = 2).
inline double kappa(double r, int d) {
  require(r > 0.0, "kappa: r must be positive");
  if (d == 1) return std::pow(2.0, -r) / (1.0 + r);
  if (d != 2) throw unsupported_dimension("kappa: only d = 1 and d = 2");
  const double sec_integral =
      integrate_panels([r](double th) { return std::pow(1.0 / std::cos(th), r + 2.0); }, 0.0, std::numbers::pi / 6, 8);
  return 12.0 / (r + 2.0) * sec_integral * std::pow(2.0 * std::sqrt(3.0), -(r + 2.0) / 2.0);
}

/// Exponent a in lambda* ~ f^a for the given model and dimension.
inline double point_density_exponent(const CostModel& model, int d) {
  const double r = model.h > 0.0 ? 2.0 : model.r;
  return d / (d + r);
}

/// High-resolution prediction of the optimal cost from the relevant alpha-norm of f.
inline double asymptotic_power_from_norm(const CostModel& model, int d, double norm, int n) {
  require(n >= 1, "asymptotic_power: n must be positive");
  const double h = model.h;
  const double r = model.r;
  switch (model.variant) {
    case CostVariant::FixedRatePower:
      if (h == 0.0) return kappa(r, d) * std::pow(n, -r / d) * norm;
      return std::pow(h, r) + 0.5 * r * std::pow(h, r - 2.0) * kappa(2.0, d) * std::pow(n, -2.0 / d) * norm;
    case CostVariant::VariableRateFixedPower:
    case CostVariant::InterferenceAwareRate: {
      require(h > 0.0, "asymptotic_power: rate models need h > 0");
      const double hr = std::pow(h, r);
      const double slope = r * model.P / (2.0 * h * h * (model.P + hr) * std::numbers::ln2);
      return -std::log2(1.0 + model.P / hr) + slope * kappa(2.0, d) * std::pow(n, -2.0 / d) * norm;
    }
    case CostVariant::ProbabilisticLoS: {
      require(h > 0.0, "asymptotic_power: line-of-sight model needs h > 0");
      // first order in the ground distance, which here is |x - q| rather than its square
      const double p0 = model.los_probability(0.0);
      const double hr = std::pow(h, r);
      const double lead = hr * (p0 + (1.0 - p0) / model.delta);
      const double slope = std::pow(h, r - 1.0) * (1.0 / model.delta - 1.0) * model.b * p0 * (1.0 - p0);
      return lead + slope * kappa(1.0, d) * std::pow(n, -1.0 / d) * norm;
    }
  }
  return 0.0;
}

/// Norm order used by asymptotic_power for this model.
inline double asymptotic_norm_order(const CostModel& model, int d) {
  if (model.variant == CostVariant::ProbabilisticLoS) return d / (d + 1.0);
  return point_density_exponent(model, d);
}

inline double asymptotic_power(const CostModel& model, const Quadrature& quad, int n) {
  return asymptotic_power_from_norm(model, quad.dim, alpha_norm(quad, asymptotic_norm_order(model, quad.dim)), n);
}

inline double asymptotic_power(const CostModel& model, const SpatioTemporalDensity& density, int n,
                               int resolution = 256, double t = 0.0) {
  return asymptotic_power(model, build_quadrature(density, t, resolution), n);
}

/// lambda*(q) = f(q)^a / int f^a for one density snapshot.
class OptimalPointDensity {
 public:
  OptimalPointDensity(const SpatioTemporalDensity& density, const CostModel& model, double t = 0.0,
                      int resolution = 256)
      : density_(density), t_(t), exponent_(point_density_exponent(model, density.dim())) {
    const Quadrature q = build_quadrature(density, t, resolution);
    CompensatedSum s;
    for (std::size_t j = 0; j < q.size(); ++j)
      if (q.mass[j] > 0.0) s += q.weights[j] * std::pow(q.density_at(j), exponent_);
    // undo the quadrature rescaling so lambda* is built from f itself
    normalizer_ = s.value() * std::pow(q.raw_mass, exponent_);
  }

  double exponent() const { return exponent_; }
  double operator()(const Point& q) const {
    const double f = density_.evaluate(t_, q);
    return f > 0.0 ? std::pow(f, exponent_) / normalizer_ : 0.0;
  }

 private:
  SpatioTemporalDensity density_;
  double t_;
  double exponent_;
  double normalizer_ = 1.0;
};

inline double optimal_point_density(const SpatioTemporalDensity& density, const CostModel& model, const Point& q,
                                    double t = 0.0, int resolution = 256) {
  return OptimalPointDensity(density, model, t, resolution)(q);
}

/// n points i.i.d. uniform over `box`.
inline Deployment random_deployment(const Box& box, int n, UniformSource& rng) {
  require(n >= 1, "random_deployment: n must be positive");
  Deployment x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) {
    Point p = Point::zero(box.dim());
    for (int j = 0; j < box.dim(); ++j) p[j] = rng.uniform(box.lo[j], box.hi[j]);
    x.push_back(p);
  }
  return x;
}

inline Deployment random_deployment(const Box& box, int n, std::uint64_t seed) {
  UniformSource rng(seed);
  return random_deployment(box, n, rng);
}

/// Uniform over the union support of the density (the static baseline).
inline Deployment random_deployment(const SpatioTemporalDensity& density, int n, std::uint64_t seed) {
  return random_deployment(density.union_support(), n, seed);
}

/// 1-D start: quantiles (2i-1)/2n of a histogram estimate of lambda* ~ f^a built
/// from the quadrature masses.
inline Deployment quantile_init_1d(const Quadrature& quad, int n, double exponent) {
  require(quad.dim == 1, "quantile_init_1d: one-dimensional quadrature required");
  std::vector<std::size_t> order(quad.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return quad.nodes[a][0] < quad.nodes[b][0]; });
  // piecewise-linear cdf of f^exponent through the nodes; each node carries half its share on either side
  std::vector<double> xs, cs;
  const std::size_t first = order.front(), last = order.back();
  xs.push_back(quad.nodes[first][0] - 0.5 * quad.weights[first]);
  cs.push_back(0.0);
  double acc = 0.0;
  for (std::size_t j : order) {
    const double share = quad.mass[j] > 0.0 ? std::pow(quad.density_at(j), exponent) * quad.weights[j] : 0.0;
    acc += 0.5 * share;
    xs.push_back(quad.nodes[j][0]);
    cs.push_back(acc);
    acc += 0.5 * share;
  }
  xs.push_back(quad.nodes[last][0] + 0.5 * quad.weights[last]);
  cs.push_back(acc);
  Deployment x;
  for (int i = 0; i < n; ++i) {
    const double target = (2.0 * i + 1.0) / (2.0 * n) * acc;
    const std::size_t b = std::min<std::size_t>(
        std::lower_bound(cs.begin() + 1, cs.end(), target) - cs.begin(), cs.size() - 1);
    const double span = cs[b] - cs[b - 1];
    const double frac = span > 0.0 ? (target - cs[b - 1]) / span : 0.5;
    x.emplace_back(xs[b - 1] + frac * (xs[b] - xs[b - 1]));
  }
  return x;
}

/// Weighted k-means++ seeding on the quadrature nodes.
inline Deployment kmeanspp_init(const Quadrature& quad, int n, UniformSource& rng) {
  require(n >= 1 && quad.size() > 0, "kmeanspp_init: empty input");
  auto draw = [&](const std::vector<double>& w) {
    CompensatedSum total;
    for (double v : w) total += v;
    double u = rng.uniform() * total.value();
    for (std::size_t j = 0; j < w.size(); ++j) {
      u -= w[j];
      if (u < 0.0) return j;
    }
    return w.size() - 1;
  };
  Deployment x;
  x.push_back(quad.nodes[draw(quad.mass)]);
  std::vector<double> d2(quad.size());
  for (std::size_t j = 0; j < quad.size(); ++j) d2[j] = squared_distance(quad.nodes[j], x[0]);
  std::vector<double> w(quad.size());
  while (static_cast<int>(x.size()) < n) {
    for (std::size_t j = 0; j < quad.size(); ++j) w[j] = quad.mass[j] * d2[j];
    const bool degenerate = std::all_of(w.begin(), w.end(), [](double v) { return v <= 0.0; });
    x.push_back(quad.nodes[draw(degenerate ? quad.mass : w)]);
    for (std::size_t j = 0; j < quad.size(); ++j) d2[j] = std::min(d2[j], squared_distance(quad.nodes[j], x.back()));
  }
  return x;
}

inline Deployment default_init(const CostModel& model, const Quadrature& quad, int n, std::uint64_t seed = 1) {
  if (quad.dim == 1) return quantile_init_1d(quad, n, point_density_exponent(model, 1));
  UniformSource rng(seed);
  return kmeanspp_init(quad, n, rng);
}

struct LloydOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;           // relative cost change
  double step_tolerance = 1e-10;      // largest point move, relative to the node extent
  double gradient_tolerance = 1e-12;  // per-cell descent: trial step relative to the cell radius
  int max_descent_steps = 200;
};

struct LloydResult {
  Deployment points;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;
  std::vector<bool> empty_cell;  // cell was empty in at least one iteration
};

/// Minimizes the cell cost of cell i in y by descent with step halving, starting at y.
/// The trial step is the reweighted centroid y - grad / (2 sum m g'), exact when g is affine in s.
inline Point minimize_cell(const CostModel& model, Point y, const VoronoiPartition& part, std::size_t i,
                           const Quadrature& quad, const LloydOptions& opt) {
  double fy = cell_cost(model, y, part, i, quad);
  for (int step = 0; step < opt.max_descent_steps; ++step) {
    const double f_start = fy;
    const Point g = cell_cost_gradient(model, y, part, i, quad);
    CompensatedSum curv, spread, mass;
    for (std::size_t m = part.offsets[i]; m < part.offsets[i + 1]; ++m) {
      const std::size_t j = part.members[m];
      const double s = squared_distance(y, quad.nodes[j]);
      curv += quad.mass[j] * model.derivative(s);
      spread += quad.mass[j] * s;
      mass += quad.mass[j];
    }
    double alpha = curv.value() > 0.0 ? 0.5 / curv.value() : 1.0;
    const double radius = mass.value() > 0.0 ? std::sqrt(spread.value() / mass.value()) : 0.0;
    if (norm(g) * alpha <= opt.gradient_tolerance * radius) break;
    bool moved = false;
    const Point y0 = y;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      const Point trial = y0 - g * alpha;
      const double ft = cell_cost(model, trial, part, i, quad);
      if (ft < fy) {
        y = trial;
        fy = ft;
        moved = true;
      } else if (moved) {
        break;  // the previous, longer step was the better one
      }
    }
    if (!moved || f_start - fy <= 1e-15 * std::fabs(fy)) break;
  }
  return y;
}

/// Lloyd iteration: partition, move each point to its cell minimizer, repeat.
inline LloydResult lloyd_static(const CostModel& model, const Quadrature& quad, Deployment init,
                                const LloydOptions& opt = {}) {
  require(!init.empty(), "lloyd_static: n must be at least 1");
  if (init.size() > quad.size()) throw invalid_input("lloyd_static: n exceeds the quadrature node count");
  for (const auto& p : init) require(p.dim == quad.dim && p.finite(), "lloyd_static: bad initial point");

  LloydResult res;
  res.empty_cell.assign(init.size(), false);
  Deployment x = std::move(init);
  VoronoiPartition part = build_partition(x, quad);
  double cost = partitioned_cost(model, x, part, quad);
  res.cost_history.push_back(cost);
  const Box ext = quad.bounding_box();
  const double extent = std::max(distance(ext.lo, ext.hi), std::numeric_limits<double>::min());

  for (int it = 1; it <= opt.max_iterations; ++it) {
    Deployment y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(part.cell_mass[i] > 0.0)) {
        res.empty_cell[i] = true;
        continue;
      }
      y[i] = model.quadratic() ? part.centroid(i) : minimize_cell(model, x[i], part, i, quad, opt);
    }
    VoronoiPartition part_y = build_partition(y, quad);
    const double cost_y = partitioned_cost(model, y, part_y, quad);
    res.iterations = it;
    if (cost_y > cost) {  // rounding only; keep the better iterate
      res.converged = true;
      break;
    }
    const double change = cost - cost_y;
    double moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) moved = std::max(moved, distance(x[i], y[i]));
    x = std::move(y);
    part = std::move(part_y);
    cost = cost_y;
    res.cost_history.push_back(cost);
    if (change <= opt.tolerance * std::fabs(cost) && moved <= opt.step_tolerance * extent) {
      res.converged = true;
      break;
    }
  }
  res.points = std::move(x);
  res.cost = cost;
  return res;
}

/// Best of `starts` Lloyd runs: the default start plus k-means++ seeds.
inline LloydResult lloyd_multistart(const CostModel& model, const Quadrature& quad, int n, int starts,
                                    std::uint64_t seed, const LloydOptions& opt = {}) {
  require(starts >= 1, "lloyd_multistart: need at least one start");
  LloydResult best = lloyd_static(model, quad, default_init(model, quad, n, seed), opt);
  UniformSource rng(seed ^ 0x5851F42D4C957F2DULL);
  for (int s = 1; s < starts; ++s) {
    LloydResult r = lloyd_static(model, quad, kmeanspp_init(quad, n, rng), opt);
    if (r.cost < best.cost) best = std::move(r);
  }
  return best;
}

/// Mean cost of `samples` uniform random deployments over `box`.
inline double random_baseline_cost(const CostModel& model, const Quadrature& quad, const Box& box, int n,
                                   int samples, std::uint64_t seed) {
  UniformSource rng(seed);
  CompensatedSum s;
  for (int k = 0; k < samples; ++k) s += deployment_cost(model, random_deployment(box, n, rng), quad);
  return s.value() / samples;
}

}  // namespace uavdeploy
