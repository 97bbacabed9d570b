#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace uavdeploy {

/// Ground-projected location in R^d with d in {1, 2}. Unused coordinates stay
/// zero, so arithmetic and distances are dimension-agnostic.
struct Point {
  std::array<double, 2> c{0.0, 0.0};
  int dim = 1;

  constexpr Point() = default;
  constexpr explicit Point(double x) : c{x, 0.0}, dim(1) {}
  constexpr Point(double x, double y) : c{x, y}, dim(2) {}

  static constexpr Point zero(int d) {
    Point p;
    p.dim = d;
    return p;
  }

  constexpr double operator[](int j) const { return c[j]; }
  constexpr double& operator[](int j) { return c[j]; }

  constexpr double x() const { return c[0]; }
  constexpr double y() const { return c[1]; }

  bool finite() const { return std::isfinite(c[0]) && std::isfinite(c[1]); }

  constexpr Point& operator+=(const Point& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    return *this;
  }
  constexpr Point& operator-=(const Point& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    return *this;
  }
  constexpr Point& operator*=(double s) {
    c[0] *= s;
    c[1] *= s;
    return *this;
  }

  friend constexpr Point operator+(Point a, const Point& b) { return a += b; }
  friend constexpr Point operator-(Point a, const Point& b) { return a -= b; }
  friend constexpr Point operator*(Point a, double s) { return a *= s; }
  friend constexpr Point operator*(double s, Point a) { return a *= s; }
  friend constexpr bool operator==(const Point& a, const Point& b) {
    return a.dim == b.dim && a.c == b.c;
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(' << p.c[0];
    if (p.dim == 2) os << ", " << p.c[1];
    return os << ')';
  }
};

constexpr double dot(const Point& a, const Point& b) { return a.c[0] * b.c[0] + a.c[1] * b.c[1]; }

constexpr double squared_distance(const Point& a, const Point& b) {
  const double dx = a.c[0] - b.c[0];
  const double dy = a.c[1] - b.c[1];
  return dx * dx + dy * dy;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// Axis-aligned box; for d = 1 only the first coordinate is meaningful.
struct Box {
  Point lo;
  Point hi;

  int dim() const { return lo.dim; }
  double extent(int j) const { return hi[j] - lo[j]; }
  double measure() const { return dim() == 1 ? extent(0) : extent(0) * extent(1); }
  bool contains(const Point& q) const {
    for (int j = 0; j < dim(); ++j)
      if (q[j] < lo[j] || q[j] > hi[j]) return false;
    return true;
  }
  void expand(const Box& o) {
    for (int j = 0; j < dim(); ++j) {
      lo[j] = std::min(lo[j], o.lo[j]);
      hi[j] = std::max(hi[j], o.hi[j]);
    }
  }
};

}  // namespace uavdeploy
