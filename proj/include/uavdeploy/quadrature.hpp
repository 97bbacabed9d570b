#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "uavdeploy/density.hpp"
#include "uavdeploy/error.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/point.hpp"

namespace uavdeploy {

enum class QuadratureScheme { GaussLegendrePanels, TensorMidpoint, GridCells, Mixture };

/// Node set for spatial integrals against one density snapshot.
///  - `weights` are region weights (sum to the measure of the covered region).
///  - `mass` is weight * density, rescaled so that it sums to one.
struct Quadrature {
  int dim = 1;
  QuadratureScheme scheme = QuadratureScheme::GaussLegendrePanels;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<double> mass;
  double raw_mass = 1.0;         // captured mass before rescaling
  double renormalization = 1.0;  // factor applied to get `mass`

  std::size_t size() const { return nodes.size(); }

  double total_weight() const {
    CompensatedSum s;
    for (double w : weights) s += w;
    return s.value();
  }
  double total_mass() const {
    CompensatedSum s;
    for (double m : mass) s += m;
    return s.value();
  }
  Box bounding_box() const {
    Box b{nodes.front(), nodes.front()};
    for (const auto& p : nodes) b.expand(Box{p, p});
    return b;
  }
  /// Density value recovered at node j.
  double density_at(std::size_t j) const { return weights[j] > 0.0 ? mass[j] / weights[j] : 0.0; }

  template <class F>
  double integrate(F&& g) const {
    CompensatedSum s;
    for (std::size_t j = 0; j < nodes.size(); ++j) s += mass[j] * g(nodes[j]);
    return s.value();
  }
};

namespace detail {

inline void finish_quadrature(Quadrature& q, double peak_fraction) {
  double peak = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) peak = std::max(peak, q.density_at(j));
  if (!(peak > 0.0)) throw invalid_input("build_quadrature: density vanishes on its support");
  if (peak_fraction > 0.0) {
    std::size_t keep = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q.density_at(j) < peak_fraction * peak) continue;
      q.nodes[keep] = q.nodes[j];
      q.weights[keep] = q.weights[j];
      q.mass[keep] = q.mass[j];
      ++keep;
    }
    q.nodes.resize(keep);
    q.weights.resize(keep);
    q.mass.resize(keep);
  }
  q.raw_mass = q.total_mass();
  q.renormalization = 1.0 / q.raw_mass;
  for (double& m : q.mass) m *= q.renormalization;
}

inline void gl_interval(Quadrature& q, double a, double b, int panels, int order,
                        const std::function<double(double)>& f) {
  const auto& gl = order == 16 ? gauss_legendre_16() : gauss_legendre(order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double x = mid + 0.5 * h * gl.nodes[j];
      const double w = 0.5 * h * gl.weights[j];
      q.nodes.emplace_back(x);
      q.weights.push_back(w);
      q.mass.push_back(w * f(x));
    }
  }
}

}  // namespace detail

/// Quadrature for f_t. d=1: `resolution` Gauss-Legendre panels of 16 nodes over the
/// support. d=2: resolution x resolution midpoint cells over the support box, cells
/// with density below 1e-12 of the peak dropped. Grids use their own cells.
inline Quadrature build_quadrature(const SpatioTemporalDensity& density, double t, int resolution) {
  require(resolution >= 8, "build_quadrature: resolution must be at least 8");
  Quadrature q;
  q.dim = density.dim();
  const Box box = density.support(t);
  for (int j = 0; j < q.dim; ++j)
    if (!(box.extent(j) > 0.0)) throw invalid_input("build_quadrature: empty support");

  if (auto* g = std::get_if<TabulatedGridParams>(&density.params())) {
    q.scheme = QuadratureScheme::GridCells;
    auto f = [&](const Point& p) { return density.evaluate_unchecked(t, p); };
    if (g->dim == 1) {
      const int cells = g->nx - 1;
      const int order = std::clamp((16 * resolution + cells - 1) / cells, 2, 16);
      const double h = box.extent(0) / cells;
      for (int c = 0; c < cells; ++c)
        detail::gl_interval(q, box.lo[0] + c * h, box.lo[0] + (c + 1) * h, 1, order,
                            [&](double x) { return f(Point(x)); });
    } else {
      const auto& gl = gauss_legendre(2);
      const double hx = box.extent(0) / (g->nx - 1);
      const double hy = box.extent(1) / (g->ny - 1);
      for (int cy = 0; cy + 1 < g->ny; ++cy)
        for (int cx = 0; cx + 1 < g->nx; ++cx)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              const Point p(box.lo[0] + (cx + 0.5 + 0.5 * gl.nodes[a]) * hx,
                            box.lo[1] + (cy + 0.5 + 0.5 * gl.nodes[b]) * hy);
              const double w = 0.25 * hx * hy * gl.weights[a] * gl.weights[b];
              q.nodes.push_back(p);
              q.weights.push_back(w);
              q.mass.push_back(w * f(p));
            }
    }
    detail::finish_quadrature(q, q.dim == 2 ? 1e-12 : 0.0);
    return q;
  }

  if (q.dim == 1) {
    q.scheme = QuadratureScheme::GaussLegendrePanels;
    detail::gl_interval(q, box.lo[0], box.hi[0], resolution, 16,
                        [&](double x) { return density.evaluate_unchecked(t, Point(x)); });
    detail::finish_quadrature(q, 0.0);
    return q;
  }

  q.scheme = QuadratureScheme::TensorMidpoint;
  const double hx = box.extent(0) / resolution;
  const double hy = box.extent(1) / resolution;
  q.nodes.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix) {
      const Point p(box.lo[0] + (ix + 0.5) * hx, box.lo[1] + (iy + 0.5) * hy);
      q.nodes.push_back(p);
      q.weights.push_back(hx * hy);
      q.mass.push_back(hx * hy * density.evaluate_unchecked(t, p));
    }
  detail::finish_quadrature(q, 1e-12);
  return q;
}

/// Equal-weight mixture (1/m) sum_k parts[k]. Used for time averages over slots.
inline Quadrature mixture_quadrature(const std::vector<Quadrature>& parts) {
  require(!parts.empty(), "mixture_quadrature: no parts");
  Quadrature q;
  q.dim = parts.front().dim;
  q.scheme = QuadratureScheme::Mixture;
  const double share = 1.0 / static_cast<double>(parts.size());
  for (const auto& p : parts) {
    require(p.dim == q.dim, "mixture_quadrature: dimension mismatch");
    for (std::size_t j = 0; j < p.size(); ++j) {
      q.nodes.push_back(p.nodes[j]);
      q.weights.push_back(p.weights[j] * share);
      q.mass.push_back(p.mass[j] * share);
    }
  }
  q.raw_mass = q.total_mass();
  return q;
}

/// (int f^alpha)^{1/alpha} for the density captured by `q`.
inline double alpha_norm(const Quadrature& q, double alpha) {
  if (!(alpha > 0.0)) throw invalid_input("alpha_norm: alpha must be positive");
  CompensatedSum s;
  for (std::size_t j = 0; j < q.size(); ++j)
    if (q.mass[j] > 0.0) s += q.weights[j] * std::pow(q.density_at(j), alpha);
  return std::pow(s.value(), 1.0 / alpha);
}

inline double alpha_norm(const SpatioTemporalDensity& density, double alpha, int resolution = 256,
                         double t = 0.0) {
  if (!(alpha > 0.0)) throw invalid_input("alpha_norm: alpha must be positive");
  return alpha_norm(build_quadrature(density, t, resolution), alpha);
}

/// Time average of `density` over one period by the trapezoid rule on `time_steps`
/// equally spaced instants (both ends included), tabulated on a regular grid over the
/// union support. `spatial_nodes` is nodes per axis (0 picks 3001 in 1-D, 401 in 2-D).
inline SpatioTemporalDensity time_averaged_density(const SpatioTemporalDensity& density, int time_steps,
                                                   int spatial_nodes = 0) {
  require(time_steps >= 2, "time_averaged_density: need at least two time steps");
  const int d = density.dim();
  if (spatial_nodes == 0) spatial_nodes = d == 1 ? 3001 : 401;
  require(spatial_nodes >= 2, "time_averaged_density: need at least two nodes per axis");

  TabulatedGridParams g;
  g.dim = d;
  g.nx = spatial_nodes;
  g.ny = d == 1 ? 1 : spatial_nodes;
  g.bounds = density.union_support();
  g.frames = 1;
  g.period = density.period();
  g.values.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);

  const double T = density.period();
  const double t0 = density.time_origin();
  const double dt = T / (time_steps - 1);
  std::vector<CompensatedSum> acc(g.values.size());
  for (int s = 0; s < time_steps; ++s) {
    const double t = t0 + s * dt;
    const double w = (s == 0 || s == time_steps - 1 ? 0.5 : 1.0) * dt / T;
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.bounds.lo[0] + g.bounds.extent(0) * ix / (g.nx - 1);
        Point p(x);
        if (d == 2) p = Point(x, g.bounds.lo[1] + g.bounds.extent(1) * iy / (g.ny - 1));
        acc[static_cast<std::size_t>(iy) * g.nx + ix] += w * density.evaluate_unchecked(t, p);
      }
  }
  for (std::size_t j = 0; j < acc.size(); ++j) g.values[j] = acc[j].value();
  return SpatioTemporalDensity::tabulated(std::move(g));
}

/// Normalized CDF of a nonnegative function on [a, b] with exact inversion by bisection.
class Cdf1D {
 public:
  Cdf1D(std::function<double(double)> f, double a, double b, int panels = 256)
      : f_(std::move(f)), a_(a), b_(b) {
    require(b > a, "Cdf1D: empty interval");
    require(panels >= 1, "Cdf1D: need at least one panel");
    const double h = (b - a) / panels;
    edges_.resize(panels + 1);
    cum_.assign(panels + 1, 0.0);
    for (int p = 0; p <= panels; ++p) edges_[p] = a + p * h;
    edges_[panels] = b;
    CompensatedSum s;
    for (int p = 0; p < panels; ++p) {
      s += integrate_panels(f_, edges_[p], edges_[p + 1], 1);
      cum_[p + 1] = s.value();
    }
    total_ = cum_.back();
    if (!(total_ > 0.0)) throw invalid_input("Cdf1D: function has zero mass");
  }

  double lower() const { return a_; }
  double upper() const { return b_; }
  double normalization() const { return total_; }

  double cdf(double theta) const {
    if (theta <= a_) return 0.0;
    if (theta >= b_) return 1.0;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), theta);
    const std::size_t p = static_cast<std::size_t>(it - edges_.begin()) - 1;
    const double partial = theta > edges_[p] ? integrate_panels(f_, edges_[p], theta, 1) : 0.0;
    return std::clamp((cum_[p] + partial) / total_, 0.0, 1.0);
  }

  double inverse(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw invalid_input("inverse_cdf: x must lie in [0, 1]");
    if (x == 0.0) return a_;
    // locate the panel from the table, then bisect inside it
    const double target = x * total_;
    auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
    std::size_t p = it == cum_.begin() ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
    p = std::min(p, edges_.size() - 2);
    return bisect_nondecreasing([&](double th) { return cdf(th); }, edges_[p], edges_[p + 1], x, 1e-12);
  }

 private:
  std::function<double(double)> f_;
  double a_, b_, total_ = 0.0;
  std::vector<double> edges_, cum_;
};

/// Inverse CDF of a one-dimensional density snapshot at time t.
inline double inverse_cdf_1d(const SpatioTemporalDensity& density, double x, double t = 0.0, int panels = 256) {
  if (density.dim() != 1) throw unsupported_dimension("inverse_cdf_1d: density must be one-dimensional");
  if (!(x >= 0.0 && x <= 1.0)) throw invalid_input("inverse_cdf_1d: x must lie in [0, 1]");
  const Box box = density.support(t);
  Cdf1D cdf([&density, t](double q) { return density.evaluate_unchecked(t, Point(q)); }, box.lo[0], box.hi[0],
            panels);
  return cdf.inverse(x);
}

}  // namespace uavdeploy
