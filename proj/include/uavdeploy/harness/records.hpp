#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uavdeploy/static_placement.hpp"
#include "uavdeploy/trajectory.hpp"
#include "uavdeploy/trajectory_optimizer.hpp"

namespace uavdeploy::harness {

using json = nlohmann::json;

struct ResultRecord {
  std::string scenario_id;
  std::string kind;
  std::string label;  // which solve produced it: static, zero, unlimited, sweep, random_static, ...
  int n = 0;
  std::optional<double> ell;
  double Q = std::numeric_limits<double>::quiet_NaN();
  double Q_minus_hr = std::numeric_limits<double>::quiet_NaN();
  double M_total = 0.0;
  double M_per_uav = 0.0;
  std::vector<double> per_uav_movement;
  std::optional<double> L;
  int epochs_run = 0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::optional<double> predicted;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<EpochRecord> convergence;
  Deployment points;
  std::optional<Trajectory> trajectory;
  std::optional<Trajectory> reference;  // analytic counterpart, same shape as trajectory
  std::vector<double> drift;            // per-slot support start, for drift-normalized traces

  std::optional<double> metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
      if (k == key) return v;
    return std::nullopt;
  }
};

/// Fixed-format number for text tables; identical across runs for identical input.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

namespace detail {

inline json points_to_json(const Deployment& x) {
  json a = json::array();
  for (const auto& p : x) a.push_back(p.dim == 1 ? json::array({p[0]}) : json::array({p[0], p[1]}));
  return a;
}

inline Deployment points_from_json(const json& a) {
  Deployment x;
  for (const auto& p : a) x.push_back(p.size() == 1 ? Point(p[0].get<double>()) : Point(p[0].get<double>(), p[1].get<double>()));
  return x;
}

inline json trajectory_to_json(const Trajectory& t) {
  json s = json::array();
  for (const auto& slot : t.slots) s.push_back(points_to_json(slot));
  return {{"period", t.period}, {"slots", s}};
}

inline Trajectory trajectory_from_json(const json& j) {
  std::vector<Deployment> slots;
  for (const auto& s : j.at("slots")) slots.push_back(points_from_json(s));
  return Trajectory(std::move(slots), j.at("period").get<double>());
}

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

inline json to_json(const ResultRecord& r) {
  json j;
  j["scenario_id"] = r.scenario_id;
  j["kind"] = r.kind;
  j["label"] = r.label;
  j["n"] = r.n;
  j["ell"] = r.ell ? json(*r.ell) : json(nullptr);
  j["Q"] = detail::num(r.Q);
  j["Q_minus_hr"] = detail::num(r.Q_minus_hr);
  j["M_total"] = r.M_total;
  j["M_per_uav"] = r.M_per_uav;
  j["per_uav_movement"] = r.per_uav_movement;
  j["L"] = r.L ? json(*r.L) : json(nullptr);
  j["epochs_run"] = r.epochs_run;
  j["wall_time"] = r.wall_time;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["predicted"] = r.predicted ? json(*r.predicted) : json(nullptr);
  json m = json::object();
  for (const auto& [k, v] : r.metrics) m[k] = detail::num(v);
  j["metrics"] = m;
  json conv = json::array();
  for (const auto& e : r.convergence) conv.push_back({e.epoch, e.L, e.Q, e.M});
  j["convergence"] = conv;
  j["points"] = detail::points_to_json(r.points);
  j["trajectory"] = r.trajectory ? detail::trajectory_to_json(*r.trajectory) : json(nullptr);
  j["reference"] = r.reference ? detail::trajectory_to_json(*r.reference) : json(nullptr);
  j["drift"] = r.drift;
  return j;
}

inline ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.label = j.at("label").get<std::string>();
  r.n = j.at("n").get<int>();
  if (!j.at("ell").is_null()) r.ell = j.at("ell").get<double>();
  r.Q = detail::num_from(j.at("Q"));
  r.Q_minus_hr = detail::num_from(j.at("Q_minus_hr"));
  r.M_total = j.at("M_total").get<double>();
  r.M_per_uav = j.at("M_per_uav").get<double>();
  r.per_uav_movement = j.at("per_uav_movement").get<std::vector<double>>();
  if (!j.at("L").is_null()) r.L = j.at("L").get<double>();
  r.epochs_run = j.at("epochs_run").get<int>();
  r.wall_time = j.at("wall_time").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  if (!j.at("predicted").is_null()) r.predicted = j.at("predicted").get<double>();
  for (const auto& [k, v] : j.at("metrics").items()) r.metrics.emplace_back(k, detail::num_from(v));
  for (const auto& e : j.at("convergence"))
    r.convergence.push_back({e[0].get<int>(), e[1].get<double>(), e[2].get<double>(), e[3].get<double>()});
  r.points = detail::points_from_json(j.at("points"));
  if (!j.at("trajectory").is_null()) r.trajectory = detail::trajectory_from_json(j.at("trajectory"));
  if (!j.at("reference").is_null()) r.reference = detail::trajectory_from_json(j.at("reference"));
  r.drift = j.at("drift").get<std::vector<double>>();
  return r;
}

inline void write_records_json(std::ostream& out, const std::vector<ResultRecord>& records) {
  json a = json::array();
  for (const auto& r : records) a.push_back(to_json(r));
  out << a.dump(1) << '\n';
}

inline std::vector<ResultRecord> read_records_json(std::istream& in) {
  const json a = json::parse(in);
  std::vector<ResultRecord> out;
  for (const auto& j : a) out.push_back(record_from_json(j));
  return out;
}

/// Tab-separated summary; wall time is left out so reruns give identical bytes.
inline void write_results_tsv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << "scenario\tkind\tlabel\tn\tell\tQ\tQ_minus_hr\tM_total\tM_per_uav\tL\tepochs\tseed\tpredicted\tstatus\tmetrics\n";
  for (const auto& r : records) {
    std::string m;
    for (const auto& [k, v] : r.metrics) m += (m.empty() ? "" : ";") + k + "=" + fmt(v);
    out << r.scenario_id << '\t' << r.kind << '\t' << r.label << '\t' << r.n << '\t' << fmt(r.ell) << '\t'
        << fmt(r.Q) << '\t' << fmt(r.Q_minus_hr) << '\t' << fmt(r.M_total) << '\t' << fmt(r.M_per_uav) << '\t'
        << fmt(r.L) << '\t' << r.epochs_run << '\t' << r.seed << '\t' << fmt(r.predicted) << '\t' << r.status
        << '\t' << m << '\n';
  }
}

}  // namespace uavdeploy::harness
