#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/density.hpp"
#include "uavdeploy/error.hpp"

namespace uavdeploy::harness {

using json = nlohmann::json;

enum class ExperimentKind { Static, ZeroMovement, UnlimitedMovement, Sweep, BaselineRandom, AnalyticCompare };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Static: return "static";
    case ExperimentKind::ZeroMovement: return "zero_movement";
    case ExperimentKind::UnlimitedMovement: return "unlimited_movement";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::BaselineRandom: return "baseline_random";
    case ExperimentKind::AnalyticCompare: return "analytic_compare";
  }
  return "?";
}

/// Log-spaced multipliers; the range is given for reference_n and scaled by
/// (reference_n / n)^scale_exponent for other n.
struct EllGrid {
  double min = 1e-6;
  double max = 1e-1;
  int count = 12;
  int reference_n = 8;
  double scale_exponent = 0.0;

  std::vector<double> values(int n) const {
    const double s = std::pow(static_cast<double>(reference_n) / n, scale_exponent);
    std::vector<double> v;
    for (int j = 0; j < count; ++j) {
      const double u = count == 1 ? 0.0 : static_cast<double>(j) / (count - 1);
      v.push_back(s * min * std::pow(max / min, u));
    }
    return v;
  }
};

struct SolverSettings {
  int resolution = 128;
  int lloyd_starts = 1;
  int cold_restarts = 0;
  int lloyd_max_iterations = 500;
  double lloyd_tolerance = 1e-10;
  int max_epochs = 20;
  int max_iterations = 30;
  double inner_tol = 1e-10;
  std::vector<double> ell_values;  // explicit list wins over the grid
  EllGrid ell_grid;
  int baseline_samples = 1000;
  int time_steps = 0;  // time-average steps for predictions (0: 2001 in 1-D, 201 in 2-D)
  double time = 0.0;   // snapshot time for kind = static
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  std::string id;
  ExperimentKind kind = ExperimentKind::Static;
  SpatioTemporalDensity density = SpatioTemporalDensity::uniform_interval(0.0, 1.0);
  CostModel model;
  std::vector<int> n_list;
  int K = 20;
  SolverSettings solver;
  std::string source_text;  // raw config, hashed into the manifest

  std::vector<double> ells(int n) const { return solver.ell_values.empty() ? solver.ell_grid.values(n) : solver.ell_values; }
};

namespace detail {

inline std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

template <class T>
T get_or(const json& j, const char* key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error(join(path, key), std::string("wrong type: ") + e.what());
  }
}

template <class T>
T get_req(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw config_error(join(path, key), "required field missing");
  return get_or<T>(j, key, path, T{});
}

inline SpatioTemporalDensity parse_density(const json& j, const std::filesystem::path& base) {
  const std::string path = "density";
  if (!j.is_object()) throw config_error(path, "must be an object");
  const auto family = get_req<std::string>(j, "family", path);
  try {
    if (family == "UniformInterval") {
      UniformIntervalParams p;
      if (j.contains("segments")) {
        p.segments.clear();
        for (const auto& s : j.at("segments")) p.segments.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
      } else {
        p.segments = {{get_or(j, "a", path, 0.0), get_or(j, "b", path, 1.0)}};
      }
      p.period = get_or(j, "period", path, 1.0);
      return SpatioTemporalDensity(p);
    }
    if (family == "ShiftedPowerLaw1D") {
      ShiftedPowerLawParams p;
      p.offset = get_or(j, "offset", path, p.offset);
      p.drift = get_or(j, "drift", path, p.drift);
      p.exponent = get_or(j, "exponent", path, p.exponent);
      return SpatioTemporalDensity(p);
    }
    if (family == "MovingGaussian2D") {
      MovingGaussianParams p;
      p.orbit_radius = get_or(j, "orbit_radius", path, p.orbit_radius);
      p.sigma_mean = get_or(j, "sigma_mean", path, p.sigma_mean);
      p.sigma_swing = get_or(j, "sigma_swing", path, p.sigma_swing);
      p.period = get_or(j, "period", path, p.period);
      p.truncation_sigmas = get_or(j, "truncation_sigmas", path, p.truncation_sigmas);
      return SpatioTemporalDensity(p);
    }
    if (family == "TabulatedGrid") {
      const auto file = get_req<std::string>(j, "file", path);
      std::filesystem::path fp(file);
      if (fp.is_relative()) fp = base / fp;
      std::ifstream in(fp);
      if (!in) throw config_error(path + ".file", "cannot open " + fp.string());
      TabulatedGridParams g = read_tabulated_grid(in);
      if (j.contains("period")) g.period = j.at("period").get<double>();
      return SpatioTemporalDensity(std::move(g));
    }
  } catch (const invalid_input& e) {
    throw config_error(path, e.what());
  } catch (const json::exception& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + ".family", "unknown density family '" + family + "'");
}

inline CostModel parse_model(const json& j) {
  const std::string path = "model";
  if (!j.is_object()) throw config_error(path, "must be an object");
  const auto variant = get_req<std::string>(j, "variant", path);
  CostModel m;
  if (variant == "FixedRatePower")
    m.variant = CostVariant::FixedRatePower;
  else if (variant == "ProbabilisticLoS")
    m.variant = CostVariant::ProbabilisticLoS;
  else if (variant == "VariableRateFixedPower")
    m.variant = CostVariant::VariableRateFixedPower;
  else if (variant == "InterferenceAwareRate")
    m.variant = CostVariant::InterferenceAwareRate;
  else
    throw config_error(path + ".variant", "unknown cost variant '" + variant + "'");
  m.h = get_or(j, "h", path, m.h);
  m.r = get_or(j, "r", path, m.r);
  m.b = get_or(j, "b", path, m.b);
  m.c = get_or(j, "c", path, m.c);
  m.delta = get_or(j, "delta", path, m.delta);
  m.P = get_or(j, "P", path, m.P);
  try {
    m.validate();
  } catch (const invalid_input& e) {
    throw config_error(path, e.what());
  }
  return m;
}

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::Static, ExperimentKind::ZeroMovement, ExperimentKind::UnlimitedMovement,
                 ExperimentKind::Sweep, ExperimentKind::BaselineRandom, ExperimentKind::AnalyticCompare})
    if (s == to_string(k)) return k;
  throw config_error("kind", "unknown experiment kind '" + s + "'");
}

}  // namespace detail

/// Parses a scenario from JSON text. `base` resolves relative file references.
inline ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base = ".") {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw config_error("<root>", e.what());
  }
  if (!j.is_object()) throw config_error("<root>", "must be an object");
  ScenarioConfig c;
  c.source_text = text;
  c.id = detail::get_or<std::string>(j, "id", "", "scenario");
  c.kind = detail::parse_kind(detail::get_req<std::string>(j, "kind", ""));
  if (!j.contains("density")) throw config_error("density", "required field missing");
  c.density = detail::parse_density(j.at("density"), base);
  if (!j.contains("model")) throw config_error("model", "required field missing");
  c.model = detail::parse_model(j.at("model"));
  c.n_list = detail::get_req<std::vector<int>>(j, "n_list", "");
  if (c.n_list.empty()) throw config_error("n_list", "must not be empty");
  for (int n : c.n_list)
    if (n < 1) throw config_error("n_list", "counts must be positive");
  c.K = detail::get_or(j, "K", "", c.K);
  if (c.K < 2) throw config_error("K", "must be at least 2");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    const std::string p = "solver";
    auto& o = c.solver;
    o.resolution = detail::get_or(s, "resolution", p, o.resolution);
    o.lloyd_starts = detail::get_or(s, "lloyd_starts", p, o.lloyd_starts);
    o.cold_restarts = detail::get_or(s, "cold_restarts", p, o.cold_restarts);
    o.lloyd_max_iterations = detail::get_or(s, "lloyd_max_iterations", p, o.lloyd_max_iterations);
    o.lloyd_tolerance = detail::get_or(s, "lloyd_tolerance", p, o.lloyd_tolerance);
    o.max_epochs = detail::get_or(s, "max_epochs", p, o.max_epochs);
    o.max_iterations = detail::get_or(s, "max_iterations", p, o.max_iterations);
    o.inner_tol = detail::get_or(s, "inner_tol", p, o.inner_tol);
    o.ell_values = detail::get_or(s, "ell_values", p, o.ell_values);
    o.baseline_samples = detail::get_or(s, "baseline_samples", p, o.baseline_samples);
    o.time_steps = detail::get_or(s, "time_steps", p, o.time_steps);
    o.time = detail::get_or(s, "time", p, o.time);
    o.seed = detail::get_or(s, "seed", p, o.seed);
    if (s.contains("ell_grid")) {
      const json& g = s.at("ell_grid");
      const std::string gp = p + ".ell_grid";
      o.ell_grid.min = detail::get_or(g, "min", gp, o.ell_grid.min);
      o.ell_grid.max = detail::get_or(g, "max", gp, o.ell_grid.max);
      o.ell_grid.count = detail::get_or(g, "count", gp, o.ell_grid.count);
      o.ell_grid.reference_n = detail::get_or(g, "reference_n", gp, o.ell_grid.reference_n);
      o.ell_grid.scale_exponent = detail::get_or(g, "scale_exponent", gp, o.ell_grid.scale_exponent);
      if (!(o.ell_grid.min > 0.0 && o.ell_grid.max >= o.ell_grid.min && o.ell_grid.count >= 1))
        throw config_error(gp, "need 0 < min <= max and count >= 1");
    }
    if (o.resolution < 8) throw config_error(p + ".resolution", "must be at least 8");
    if (o.lloyd_starts < 1) throw config_error(p + ".lloyd_starts", "must be at least 1");
    if (o.max_epochs < 1) throw config_error(p + ".max_epochs", "must be at least 1");
    if (o.max_iterations < 1) throw config_error(p + ".max_iterations", "must be at least 1");
    if (o.baseline_samples < 1) throw config_error(p + ".baseline_samples", "must be at least 1");
    for (double e : o.ell_values)
      if (!(e > 0.0)) throw config_error(p + ".ell_values", "multipliers must be positive");
  }
  if (c.kind == ExperimentKind::AnalyticCompare && c.density.dim() != 1)
    throw config_error("kind", "analytic_compare needs a one-dimensional density");
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw config_error("<file>", "cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

/// 64-bit FNV-1a of the raw config text.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace uavdeploy::harness
