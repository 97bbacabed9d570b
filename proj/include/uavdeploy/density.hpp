#pragma once

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include "uavdeploy/error.hpp"
#include "uavdeploy/point.hpp"

namespace uavdeploy {

enum class DensityFamily { UniformInterval, ShiftedPowerLaw1D, MovingGaussian2D, TabulatedGrid };

inline const char* to_string(DensityFamily f) {
  switch (f) {
    case DensityFamily::UniformInterval: return "UniformInterval";
    case DensityFamily::ShiftedPowerLaw1D: return "ShiftedPowerLaw1D";
    case DensityFamily::MovingGaussian2D: return "MovingGaussian2D";
    case DensityFamily::TabulatedGrid: return "TabulatedGrid";
  }
  return "?";
}

/// Uniform density on [a_j, b_j) where segment j is active during the j-th
/// equal share of the period. One segment gives a time-invariant density.
struct UniformIntervalParams {
  std::vector<std::pair<double, double>> segments{{0.0, 1.0}};
  double period = 1.0;
};

/// f_t(q) = (1 + e|t|) (q - a_t)^{e|t|} on [a_t, a_t + 1] with a_t = offset - drift|t|,
/// t in [-1, 1), period 2. Defaults reproduce the one-dimensional benchmark.
struct ShiftedPowerLawParams {
  double offset = 2.0;
  double drift = 2.0;
  double exponent = 3.0;
};

/// Isotropic Gaussian whose centre orbits the origin clockwise,
/// centre (R sin wt, R cos wt), sigma = sigma_mean + sigma_swing sin wt, w = 2 pi / period.
struct MovingGaussianParams {
  double orbit_radius = 10.0;
  double sigma_mean = 3.0;
  double sigma_swing = 2.0;
  double period = 1.0;
  double truncation_sigmas = 6.0;
};

/// Values on a regular grid (piecewise-linear / bilinear between nodes, zero
/// outside the bounds). Several frames split the period into equal,
/// piecewise-constant time slices. Layout: values[(frame * ny + iy) * nx + ix].
struct TabulatedGridParams {
  int dim = 1;
  int nx = 2;
  int ny = 1;
  Box bounds{Point(0.0), Point(1.0)};
  int frames = 1;
  double period = 1.0;
  std::vector<double> values;
};

/// Ground-terminal density f_t(q), periodic in t.
class SpatioTemporalDensity {
 public:
  using Params = std::variant<UniformIntervalParams, ShiftedPowerLawParams, MovingGaussianParams,
                              TabulatedGridParams>;

  explicit SpatioTemporalDensity(Params p) : params_(std::move(p)) { validate(); }

  static SpatioTemporalDensity uniform_interval(double a, double b) {
    return SpatioTemporalDensity(UniformIntervalParams{{{a, b}}, 1.0});
  }
  static SpatioTemporalDensity shifted_power_law(ShiftedPowerLawParams p = {}) {
    return SpatioTemporalDensity(p);
  }
  static SpatioTemporalDensity moving_gaussian(MovingGaussianParams p = {}) {
    return SpatioTemporalDensity(p);
  }
  static SpatioTemporalDensity tabulated(TabulatedGridParams p) {
    return SpatioTemporalDensity(std::move(p));
  }

  const Params& params() const { return params_; }

  DensityFamily family() const { return static_cast<DensityFamily>(params_.index()); }

  int dim() const {
    if (std::holds_alternative<MovingGaussianParams>(params_)) return 2;
    if (auto* g = std::get_if<TabulatedGridParams>(&params_)) return g->dim;
    return 1;
  }

  double period() const {
    return std::visit(
        [](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ShiftedPowerLawParams>)
            return 2.0;
          else
            return p.period;
        },
        params_);
  }

  /// Start of the canonical time window [t0, t0 + T).
  double time_origin() const { return family() == DensityFamily::ShiftedPowerLaw1D ? -1.0 : 0.0; }

  bool time_invariant() const {
    if (auto* u = std::get_if<UniformIntervalParams>(&params_)) return u->segments.size() == 1;
    if (auto* g = std::get_if<TabulatedGridParams>(&params_)) return g->frames == 1;
    return false;
  }

  double wrap_time(double t) const {
    const double T = period();
    const double t0 = time_origin();
    double r = std::fmod(t - t0, T);
    if (r < 0.0) r += T;
    if (r >= T) r -= T;
    return t0 + r;
  }

  /// f_{t mod T}(q). Throws invalid_input on a dimension mismatch.
  double evaluate(double t, const Point& q) const {
    if (q.dim != dim()) throw invalid_input("evaluate: point dimension does not match density");
    if (!std::isfinite(t)) throw invalid_input("evaluate: time must be finite");
    return evaluate_unchecked(t, q);
  }

  double evaluate_unchecked(double t, const Point& q) const {
    const double tw = wrap_time(t);
    return std::visit([&](const auto& p) { return eval(p, tw, q); }, params_);
  }

  /// Bounding box of the support at time t (Gaussian: centre +- truncation sigmas).
  Box support(double t) const {
    const double tw = wrap_time(t);
    return std::visit([&](const auto& p) { return support_of(p, tw); }, params_);
  }

  /// Bounding box of the union of supports over one period (sampled).
  Box union_support(int samples = 2000) const {
    const double T = period();
    Box box = support(time_origin());
    if (time_invariant()) return box;
    for (int j = 1; j <= samples; ++j) box.expand(support(time_origin() + T * j / samples));
    return box;
  }

 private:
  Params params_;

  void validate() const {
    std::visit(
        [](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, UniformIntervalParams>) {
            require(!p.segments.empty(), "UniformInterval: at least one segment required");
            for (auto [a, b] : p.segments) require(b > a, "UniformInterval: segment must have b > a");
            require(p.period > 0.0, "UniformInterval: period must be positive");
          } else if constexpr (std::is_same_v<T, ShiftedPowerLawParams>) {
            require(p.exponent >= 0.0, "ShiftedPowerLaw1D: exponent must be nonnegative");
          } else if constexpr (std::is_same_v<T, MovingGaussianParams>) {
            require(p.sigma_mean > std::fabs(p.sigma_swing), "MovingGaussian2D: sigma must stay positive");
            require(p.period > 0.0, "MovingGaussian2D: period must be positive");
            require(p.truncation_sigmas > 0.0, "MovingGaussian2D: truncation must be positive");
          } else {
            require(p.dim == 1 || p.dim == 2, "TabulatedGrid: dimension must be 1 or 2");
            require(p.nx >= 2 && (p.dim == 1 ? p.ny == 1 : p.ny >= 2), "TabulatedGrid: grid too small");
            require(p.frames >= 1 && p.period > 0.0, "TabulatedGrid: bad frames/period");
            require(p.bounds.lo.dim == p.dim && p.bounds.hi.dim == p.dim, "TabulatedGrid: bounds dimension");
            for (int j = 0; j < p.dim; ++j)
              require(p.bounds.hi[j] > p.bounds.lo[j], "TabulatedGrid: empty bounds");
            require(p.values.size() == static_cast<std::size_t>(p.frames) * p.nx * p.ny,
                    "TabulatedGrid: value count does not match header");
            for (double v : p.values) require(v >= 0.0 && std::isfinite(v), "TabulatedGrid: values must be >= 0");
          }
        },
        params_);
  }

  static int segment_index(std::size_t count, double period, double t) {
    int j = static_cast<int>(std::floor(t / period * static_cast<double>(count)));
    return std::clamp(j, 0, static_cast<int>(count) - 1);
  }

  static double eval(const UniformIntervalParams& p, double t, const Point& q) {
    auto [a, b] = p.segments[segment_index(p.segments.size(), p.period, t)];
    return (q[0] >= a && q[0] < b) ? 1.0 / (b - a) : 0.0;
  }
  static Box support_of(const UniformIntervalParams& p, double t) {
    auto [a, b] = p.segments[segment_index(p.segments.size(), p.period, t)];
    return {Point(a), Point(b)};
  }

  static double eval(const ShiftedPowerLawParams& p, double t, const Point& q) {
    const double s = std::fabs(t);
    const double a = p.offset - p.drift * s;
    const double u = q[0] - a;
    if (u < 0.0 || u > 1.0) return 0.0;
    const double e = p.exponent * s;
    return (1.0 + e) * std::pow(u, e);
  }
  static Box support_of(const ShiftedPowerLawParams& p, double t) {
    const double a = p.offset - p.drift * std::fabs(t);
    return {Point(a), Point(a + 1.0)};
  }

  struct GaussianState {
    Point centre;
    double sigma;
  };
  static GaussianState gaussian_state(const MovingGaussianParams& p, double t) {
    const double w = 2.0 * std::numbers::pi * t / p.period;
    return {Point(p.orbit_radius * std::sin(w), p.orbit_radius * std::cos(w)),
            p.sigma_mean + p.sigma_swing * std::sin(w)};
  }
  static double eval(const MovingGaussianParams& p, double t, const Point& q) {
    const auto g = gaussian_state(p, t);
    const double s2 = g.sigma * g.sigma;
    return std::exp(-squared_distance(q, g.centre) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
  }
  static Box support_of(const MovingGaussianParams& p, double t) {
    const auto g = gaussian_state(p, t);
    const double r = p.truncation_sigmas * g.sigma;
    return {Point(g.centre[0] - r, g.centre[1] - r), Point(g.centre[0] + r, g.centre[1] + r)};
  }

  static double eval(const TabulatedGridParams& p, double t, const Point& q) {
    if (!p.bounds.contains(q)) return 0.0;
    const int frame = segment_index(static_cast<std::size_t>(p.frames), p.period, t);
    const double* v = p.values.data() + static_cast<std::size_t>(frame) * p.nx * p.ny;
    auto locate = [](double x, double lo, double hi, int count, int& i, double& frac) {
      const double u = (x - lo) / (hi - lo) * (count - 1);
      i = std::clamp(static_cast<int>(std::floor(u)), 0, count - 2);
      frac = std::clamp(u - i, 0.0, 1.0);
    };
    int ix = 0;
    double fx = 0.0;
    locate(q[0], p.bounds.lo[0], p.bounds.hi[0], p.nx, ix, fx);
    if (p.dim == 1) return (1.0 - fx) * v[ix] + fx * v[ix + 1];
    int iy = 0;
    double fy = 0.0;
    locate(q[1], p.bounds.lo[1], p.bounds.hi[1], p.ny, iy, fy);
    const double* r0 = v + static_cast<std::size_t>(iy) * p.nx;
    const double* r1 = r0 + p.nx;
    return (1.0 - fy) * ((1.0 - fx) * r0[ix] + fx * r0[ix + 1]) + fy * ((1.0 - fx) * r1[ix] + fx * r1[ix + 1]);
  }
  static Box support_of(const TabulatedGridParams& p, double) { return p.bounds; }
};

/// Reads the plain-text grid format:
///   header:  1 nx xlo xhi [frames [period]]
///        or  2 nx ny xlo xhi ylo yhi [frames [period]]
///   then frames*ny*nx values, row-major (x fastest). Lines starting with '#' are skipped.
inline TabulatedGridParams read_tabulated_grid(std::istream& in) {
  std::string line, header;
  std::ostringstream body;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (header.empty())
      header = line;
    else
      body << line << '\n';
  }
  if (header.empty()) throw invalid_input("tabulated grid: missing header line");
  std::istringstream hs(header);
  TabulatedGridParams p;
  if (!(hs >> p.dim) || (p.dim != 1 && p.dim != 2)) throw invalid_input("tabulated grid: dims must be 1 or 2");
  if (p.dim == 1) {
    double lo = 0, hi = 0;
    if (!(hs >> p.nx >> lo >> hi)) throw invalid_input("tabulated grid: bad 1-D header");
    p.ny = 1;
    p.bounds = {Point(lo), Point(hi)};
  } else {
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    if (!(hs >> p.nx >> p.ny >> xlo >> xhi >> ylo >> yhi)) throw invalid_input("tabulated grid: bad 2-D header");
    p.bounds = {Point(xlo, ylo), Point(xhi, yhi)};
  }
  if (!(hs >> p.frames)) p.frames = 1;
  if (!(hs >> p.period)) p.period = 1.0;
  std::istringstream bs(body.str());
  double v = 0;
  while (bs >> v) p.values.push_back(v);
  if (!bs.eof()) throw invalid_input("tabulated grid: non-numeric value");
  SpatioTemporalDensity check(p);  // validates counts and bounds
  return p;
}

inline void write_tabulated_grid(std::ostream& out, const TabulatedGridParams& p) {
  out.precision(17);
  if (p.dim == 1)
    out << "1 " << p.nx << ' ' << p.bounds.lo[0] << ' ' << p.bounds.hi[0];
  else
    out << "2 " << p.nx << ' ' << p.ny << ' ' << p.bounds.lo[0] << ' ' << p.bounds.hi[0] << ' '
        << p.bounds.lo[1] << ' ' << p.bounds.hi[1];
  out << ' ' << p.frames << ' ' << p.period << '\n';
  for (int f = 0; f < p.frames; ++f)
    for (int iy = 0; iy < p.ny; ++iy) {
      for (int ix = 0; ix < p.nx; ++ix) {
        if (ix) out << ' ';
        out << p.values[(static_cast<std::size_t>(f) * p.ny + iy) * p.nx + ix];
      }
      out << '\n';
    }
}

}  // namespace uavdeploy
