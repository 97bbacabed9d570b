#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "uavdeploy/error.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/point.hpp"
#include "uavdeploy/quadrature.hpp"

namespace uavdeploy {

enum class CostVariant { FixedRatePower, ProbabilisticLoS, VariableRateFixedPower, InterferenceAwareRate };
enum class Sense { minimize, maximize };

inline const char* to_string(CostVariant v) {
  switch (v) {
    case CostVariant::FixedRatePower: return "FixedRatePower";
    case CostVariant::ProbabilisticLoS: return "ProbabilisticLoS";
    case CostVariant::VariableRateFixedPower: return "VariableRateFixedPower";
    case CostVariant::InterferenceAwareRate: return "InterferenceAwareRate";
  }
  return "?";
}

/// Access-cost kernel g(s) of the squared ground distance s. Rate variants are
/// stored negated so that every variant is minimized.
struct CostModel {
  CostVariant variant = CostVariant::FixedRatePower;
  double h = 0.0;  // altitude
  double r = 2.0;  // path-loss exponent
  // probabilistic line of sight
  double b = 4.0;
  double c = 0.6;
  double delta = 0.5;
  // transmit power of the rate variants
  double P = 1.0;

  static CostModel fixed_rate(double h, double r) {
    CostModel m;
    m.h = h;
    m.r = r;
    m.validate();
    return m;
  }
  static CostModel probabilistic_los(double h, double r, double b, double c, double delta) {
    CostModel m{CostVariant::ProbabilisticLoS, h, r, b, c, delta, 1.0};
    m.validate();
    return m;
  }
  static CostModel variable_rate(double h, double r, double P) {
    CostModel m{CostVariant::VariableRateFixedPower, h, r};
    m.P = P;
    m.validate();
    return m;
  }
  static CostModel interference_aware(double h, double r, double P) {
    CostModel m = variable_rate(h, r, P);
    m.variant = CostVariant::InterferenceAwareRate;
    return m;
  }

  void validate() const {
    require(std::isfinite(h) && h >= 0.0, "CostModel: h must be >= 0");
    require(std::isfinite(r) && r > 0.0, "CostModel: r must be > 0");
    if (variant == CostVariant::ProbabilisticLoS) {
      require(b > 0.0 && c > 0.0, "CostModel: b and c must be > 0");
      require(delta > 0.0 && delta < 1.0, "CostModel: delta must lie in (0, 1)");
    }
    if (variant == CostVariant::VariableRateFixedPower || variant == CostVariant::InterferenceAwareRate)
      require(P > 0.0, "CostModel: P must be > 0");
  }

  /// Sense of the physical quantity (power is minimized, rate maximized).
  Sense sense() const {
    return variant == CostVariant::FixedRatePower || variant == CostVariant::ProbabilisticLoS ? Sense::minimize
                                                                                               : Sense::maximize;
  }

  /// Squared-distance identity: the r = 2 fixed-rate kernel is s + h^2.
  bool quadratic() const { return variant == CostVariant::FixedRatePower && r == 2.0; }

  double los_probability(double s) const {
    const double theta = s > 0.0 ? std::atan(h / std::sqrt(s)) : std::numbers::pi / 2;
    return 1.0 / (1.0 + c * std::exp(-b * (theta - c)));
  }

  /// (s + h^2)^{r/2}, with the common integer and half-integer exponents spelled out.
  double power(double a) const {
    if (r == 2.0) return a;
    if (r == 3.0) return a * std::sqrt(a);
    if (r == 4.0) return a * a;
    if (r == 1.0) return std::sqrt(a);
    return std::pow(a, 0.5 * r);
  }

  /// g(s), always in minimization form.
  double pointwise_cost(double s) const {
    const double base = power(s + h * h);
    switch (variant) {
      case CostVariant::FixedRatePower: return base;
      case CostVariant::ProbabilisticLoS: {
        const double p = los_probability(s);
        return base * (p + (1.0 - p) / delta);
      }
      case CostVariant::VariableRateFixedPower:
      case CostVariant::InterferenceAwareRate: return -std::log2(1.0 + P / base);
    }
    return base;
  }

  /// The physical quantity: power for minimize-sense variants, rate for the others.
  double physical_kernel(double s) const {
    return sense() == Sense::minimize ? pointwise_cost(s) : -pointwise_cost(s);
  }

  /// dg/ds. At s = 0 the line-of-sight angle term is dropped (one-sided limit of the
  /// vector gradient 2 g'(s) (y - q) is zero there).
  double derivative(double s) const {
    const double a = s + h * h;
    if (variant == CostVariant::FixedRatePower) {
      if (r == 2.0) return 1.0;
      if (r == 3.0) return 1.5 * std::sqrt(a);
    }
    const double base = power(a);
    const double dbase = a > 0.0 ? 0.5 * r * base / a : (r == 2.0 ? 1.0 : 0.0);
    switch (variant) {
      case CostVariant::FixedRatePower: return dbase;
      case CostVariant::ProbabilisticLoS: {
        const double p = los_probability(s);
        const double mult = p + (1.0 - p) / delta;
        double dmult = 0.0;
        if (s > 0.0 && h > 0.0) {
          const double dtheta = -h / (2.0 * std::sqrt(s) * a);
          dmult = (1.0 - 1.0 / delta) * b * p * (1.0 - p) * dtheta;
        }
        return dbase * mult + base * dmult;
      }
      case CostVariant::VariableRateFixedPower:
      case CostVariant::InterferenceAwareRate:
        // d/ds [-log2(1 + P/base)] = (P/base^2) dbase / ((1 + P/base) ln 2)
        return P * dbase / (base * (base + P) * std::numbers::ln2);
    }
    return dbase;
  }
};

/// Nearest-point lookup with lowest-index tie breaking.
class NearestLocator {
 public:
  explicit NearestLocator(const std::vector<Point>& points) : points_(points) {
    require(!points.empty(), "NearestLocator: empty deployment");
    dim_ = points.front().dim;
    if (dim_ == 1) {
      std::vector<int> order(points.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return points[a][0] < points[b][0]; });
      for (int i : order) {
        if (!coords_.empty() && coords_.back() == points[i][0]) continue;  // keep lowest index
        coords_.push_back(points[i][0]);
        index_.push_back(i);
      }
    }
  }

  int nearest(const Point& q) const {
    if (dim_ == 1) {
      const double x = q[0];
      auto it = std::lower_bound(coords_.begin(), coords_.end(), x);
      if (it == coords_.begin()) return index_.front();
      if (it == coords_.end()) return index_.back();
      const std::size_t hi = static_cast<std::size_t>(it - coords_.begin());
      const double dl = x - coords_[hi - 1];
      const double dh = coords_[hi] - x;
      if (dl < dh) return index_[hi - 1];
      if (dh < dl) return index_[hi];
      return std::min(index_[hi - 1], index_[hi]);
    }
    int best = 0;
    double bd = squared_distance(points_[0], q);
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const double d = squared_distance(points_[i], q);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

 private:
  std::vector<Point> points_;
  int dim_ = 1;
  std::vector<double> coords_;
  std::vector<int> index_;
};

/// Assignment of quadrature nodes to their nearest deployment point.
struct VoronoiPartition {
  std::vector<int> assignment;
  std::vector<double> cell_mass;
  std::vector<Point> cell_first_moment;
  // nodes of cell i are members[offsets[i] .. offsets[i+1])
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> members;

  std::size_t cells() const { return cell_mass.size(); }
  Point centroid(std::size_t i) const { return cell_first_moment[i] * (1.0 / cell_mass[i]); }
};

inline VoronoiPartition build_partition(const std::vector<Point>& points, const Quadrature& quad) {
  require(!points.empty(), "build_partition: empty deployment");
  for (const auto& p : points) require(p.dim == quad.dim, "build_partition: dimension mismatch");
  const std::size_t n = points.size();
  NearestLocator loc(points);
  VoronoiPartition part;
  part.assignment.resize(quad.size());
  std::vector<CompensatedSum> mass(n), mx(n), my(n);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t j = 0; j < quad.size(); ++j) {
    const int i = loc.nearest(quad.nodes[j]);
    part.assignment[j] = i;
    mass[i] += quad.mass[j];
    mx[i] += quad.mass[j] * quad.nodes[j][0];
    my[i] += quad.mass[j] * quad.nodes[j][1];
    ++count[i];
  }
  part.cell_mass.resize(n);
  part.cell_first_moment.assign(n, Point::zero(quad.dim));
  part.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    part.cell_mass[i] = mass[i].value();
    part.cell_first_moment[i][0] = mx[i].value();
    part.cell_first_moment[i][1] = my[i].value();
    part.offsets[i + 1] = part.offsets[i] + count[i];
  }
  part.members.resize(quad.size());
  std::vector<std::size_t> fill(part.offsets.begin(), part.offsets.end() - 1);
  for (std::size_t j = 0; j < quad.size(); ++j) part.members[fill[part.assignment[j]]++] = j;
  return part;
}

/// sum_j mass_j g(min_i |x_i - q_j|^2).
inline double deployment_cost(const CostModel& model, const std::vector<Point>& points, const Quadrature& quad) {
  if (points.empty()) throw invalid_input("deployment_cost: empty deployment");
  for (const auto& p : points) require(p.dim == quad.dim, "deployment_cost: dimension mismatch");
  NearestLocator loc(points);
  CompensatedSum s;
  for (std::size_t j = 0; j < quad.size(); ++j) {
    const int i = loc.nearest(quad.nodes[j]);
    s += quad.mass[j] * model.pointwise_cost(squared_distance(points[i], quad.nodes[j]));
  }
  return s.value();
}

/// Cost of one cell with its point moved to `y`.
inline double cell_cost(const CostModel& model, const Point& y, const VoronoiPartition& part, std::size_t i,
                        const Quadrature& quad) {
  CompensatedSum s;
  for (std::size_t m = part.offsets[i]; m < part.offsets[i + 1]; ++m) {
    const std::size_t j = part.members[m];
    s += quad.mass[j] * model.pointwise_cost(squared_distance(y, quad.nodes[j]));
  }
  return s.value();
}

/// Gradient of cell_cost with respect to y.
inline Point cell_cost_gradient(const CostModel& model, const Point& y, const VoronoiPartition& part,
                                std::size_t i, const Quadrature& quad) {
  CompensatedSum gx, gy;
  for (std::size_t m = part.offsets[i]; m < part.offsets[i + 1]; ++m) {
    const std::size_t j = part.members[m];
    const Point d = y - quad.nodes[j];
    const double k = 2.0 * quad.mass[j] * model.derivative(dot(d, d));
    gx += k * d[0];
    gy += k * d[1];
  }
  Point g = Point::zero(y.dim);
  g[0] = gx.value();
  g[1] = gy.value();
  return g;
}

/// Cost evaluated cell by cell over a partition; equals deployment_cost for the
/// partition's own points.
inline double partitioned_cost(const CostModel& model, const std::vector<Point>& points,
                               const VoronoiPartition& part, const Quadrature& quad) {
  CompensatedSum s;
  for (std::size_t i = 0; i < points.size(); ++i) s += cell_cost(model, points[i], part, i, quad);
  return s.value();
}

}  // namespace uavdeploy
