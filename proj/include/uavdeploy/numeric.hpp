#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "uavdeploy/error.hpp"

namespace uavdeploy {

/// Neumaier-compensated accumulator. Used for every spatial sum so that
/// monotonicity checks are not drowned in summation noise.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

inline const GaussLegendreRule& gauss_legendre_16() {
  static const GaussLegendreRule rule = gauss_legendre(16);
  return rule;
}

/// Composite 16-point Gauss-Legendre integral of `f` over [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int panels) {
  const auto& gl = gauss_legendre_16();
  const double h = (b - a) / panels;
  CompensatedSum s;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j)
      s += 0.5 * h * gl.weights[j] * f(mid + 0.5 * h * gl.nodes[j]);
  }
  return s.value();
}

/// Smallest x in [lo, hi] with g(x) >= target for nondecreasing g, to absolute
/// tolerance `tol` in x.
template <class G>
double bisect_nondecreasing(G&& g, double lo, double hi, double target, double tol = 1e-10) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// splitmix64 stream mapped to [0,1) by its top 53 bits. Self-contained so that
/// seeded runs are identical across standard libraries.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace uavdeploy
