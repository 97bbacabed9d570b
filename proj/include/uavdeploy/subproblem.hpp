#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavdeploy/error.hpp"
#include "uavdeploy/point.hpp"

namespace uavdeploy {

/// phi(x) = |x - u| + |x - v| + c |x - w|^2. c = +inf means "x = w".
struct SubproblemInstance {
  Point u, v, w;
  double c = 0.0;

  double phi(const Point& x) const {
    const double pull = std::isinf(c) ? (x == w ? 0.0 : std::numeric_limits<double>::infinity())
                                      : c * squared_distance(x, w);
    return distance(x, u) + distance(x, v) + pull;
  }
};

/// Closest point of segment [a, b] to x.
inline Point project_onto_segment(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (!(len2 > 0.0)) return a;
  const double s = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
  return a + ab * s;
}

namespace detail {

inline double cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Closest point of triangle (u, v, w) to planar x, degenerate triangles included.
inline Point project_onto_triangle(const Point& x, const Point& u, const Point& v, const Point& w) {
  const double area = cross(v - u, w - u);
  if (area != 0.0) {
    const double s0 = cross(v - u, x - u) / area;
    const double s1 = cross(w - v, x - v) / area;
    const double s2 = cross(u - w, x - w) / area;
    if (s0 >= 0.0 && s1 >= 0.0 && s2 >= 0.0) return x;
  }
  Point best = project_onto_segment(x, u, v);
  for (const Point& p : {project_onto_segment(x, v, w), project_onto_segment(x, w, u)})
    if (squared_distance(p, x) < squared_distance(best, x)) best = p;
  return best;
}

inline Point to_plane(const Point& p) { return p.dim == 2 ? p : Point(p[0], 0.0); }

}  // namespace detail

/// A point of triangle (u, v, w) that is no farther than x from each vertex,
/// built edge by edge: pick an edge with x on its far side, drop x onto that
/// edge's line, then slide onto the adjacent edge if needed. Collinear vertices
/// fall back to the metric projection.
inline Point triangle_dominating_point(const Point& x_in, const Point& u_in, const Point& v_in, const Point& w_in) {
  const Point x = detail::to_plane(x_in), u0 = detail::to_plane(u_in), v0 = detail::to_plane(v_in),
              w0 = detail::to_plane(w_in);
  auto back = [&](const Point& p) { return x_in.dim == 1 ? Point(p[0]) : p; };
  const double area = detail::cross(v0 - u0, w0 - u0);
  if (area == 0.0) return back(detail::project_onto_triangle(x, u0, v0, w0));

  const Point verts[3] = {u0, v0, w0};
  for (int e = 0; e < 3; ++e) {
    Point a = verts[e], b = verts[(e + 1) % 3];
    const Point opp = verts[(e + 2) % 3];
    const double side_x = detail::cross(b - a, x - a);
    const double side_w = detail::cross(b - a, opp - a);
    if (side_x * side_w >= 0.0) continue;  // x not strictly beyond this edge
    // orient the edge so that x projects forward from its start
    if (dot(x - a, b - a) < 0.0) std::swap(a, b);
    const Point axis = b - a;
    const double len = norm(axis);
    const Point e1 = axis * (1.0 / len);
    const double v1 = len;
    const double x01 = dot(x - a, e1);
    const double w1 = dot(opp - a, e1);
    const Point x1 = a + e1 * x01;
    if (x01 <= v1) return back(x1);
    if (w1 <= v1) return back(b);
    if (w1 <= x01) return back(project_onto_segment(a + e1 * w1, b, opp));
    return back(project_onto_segment(x1, b, opp));
  }
  return back(x);  // inside (or on the boundary)
}

/// Minimizer of phi. d = 1 closed form; d = 2 majorize-minimize iteration, which
/// stays inside the triangle, plus optimality tests at the kinks u and v.
inline Point solve_subproblem(const SubproblemInstance& inst, int dim) {
  const Point& u = inst.u;
  const Point& v = inst.v;
  const Point& w = inst.w;
  const double c = inst.c;
  if (std::isnan(c) || c < 0.0) throw invalid_input("solve_subproblem: c must be nonnegative");
  if (std::isinf(c)) return w;
  if (dim == 1) {
    const double lo = std::min(u[0], v[0]);
    const double hi = std::max(u[0], v[0]);
    const double wx = w[0];
    if (wx >= lo && wx <= hi) return Point(wx);
    const double a = c > 0.0 ? std::min(std::fabs(wx - 0.5 * (u[0] + v[0])), 1.0 / c)
                             : std::fabs(wx - 0.5 * (u[0] + v[0]));
    return Point(wx > hi ? std::max(hi, wx - a) : std::min(lo, wx + a));
  }
  if (dim != 2) throw unsupported_dimension("solve_subproblem: d must be 1 or 2");
  if (c == 0.0) return project_onto_segment(w, u, v);

  if (u == v) {
    const double dw = distance(w, u);
    if (2.0 * c * dw <= 2.0) return u;
    return w + (u - w) * (1.0 / (c * dw));
  }
  // subgradient test at a kink: 0 in the subdifferential iff the smooth part's gradient has norm <= 1
  auto kink_optimal = [&](const Point& at, const Point& other) {
    const Point g = (at - other) * (1.0 / distance(at, other)) + (at - w) * (2.0 * c);
    return norm(g) <= 1.0;
  };
  if (kink_optimal(u, v)) return u;
  if (kink_optimal(v, u)) return v;

  Point x = (u + v + w) * (1.0 / 3.0);
  double fx = inst.phi(x);
  for (int it = 0; it < 100000; ++it) {
    const double du = distance(x, u), dv = distance(x, v);
    if (du == 0.0 || dv == 0.0) break;
    const double a = 1.0 / du, b = 1.0 / dv;
    const Point next = (u * a + v * b + w * (2.0 * c)) * (1.0 / (a + b + 2.0 * c));
    const double fn = inst.phi(next);
    const double step = distance(next, x);
    if (!(fn <= fx)) break;
    x = next;
    fx = fn;
    if (step <= 1e-15 * (1.0 + norm(x))) break;
  }
  return x;
}

}  // namespace uavdeploy
