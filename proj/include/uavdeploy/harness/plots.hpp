#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uavdeploy/error.hpp"
#include "uavdeploy/harness/records.hpp"

namespace uavdeploy::harness {

namespace detail {

inline void write_coords(std::ostream& out, const Point& p) {
  out << fmt(p[0]);
  if (p.dim == 2) out << '\t' << fmt(p[1]);
}

inline bool any_of_label(const std::vector<ResultRecord>& rs, const std::string& label) {
  for (const auto& r : rs)
    if (r.status == "ok" && r.label == label) return true;
  return false;
}

}  // namespace detail

/// Writes one table per figure type found in the records and returns the file names.
///   tradeoff.tsv        n ell M_total M_per_uav Q
///   power_vs_n.tsv      label n Q Q_minus_hr predicted
///   convergence.tsv     n ell epoch L Q M_total
///   trajectories.tsv    label n ell k t uav_index coords...
///   analytic_compare.tsv  n k t uav_index numeric analytic, both minus the support start
inline std::vector<std::string> emit_plot_data(const std::vector<ResultRecord>& records,
                                               const std::filesystem::path& dir) {
  require(!records.empty(), "emit_plot_data: no records");
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;

  if (detail::any_of_label(records, "sweep")) {
    std::ofstream f(dir / "tradeoff.tsv");
    f << "n\tell\tM_total\tM_per_uav\tQ\n";
    for (const auto& r : records)
      if (r.status == "ok" && r.label == "sweep")
        f << r.n << '\t' << fmt(r.ell) << '\t' << fmt(r.M_total) << '\t' << fmt(r.M_per_uav) << '\t' << fmt(r.Q)
          << '\n';
    files.push_back("tradeoff.tsv");

    std::ofstream c(dir / "convergence.tsv");
    c << "n\tell\tepoch\tL\tQ\tM_total\n";
    for (const auto& r : records)
      if (r.status == "ok" && r.label == "sweep")
        for (const auto& e : r.convergence)
          c << r.n << '\t' << fmt(r.ell) << '\t' << e.epoch << '\t' << fmt(e.L) << '\t' << fmt(e.Q) << '\t'
            << fmt(e.M) << '\n';
    files.push_back("convergence.tsv");
  }

  {
    std::ofstream f(dir / "power_vs_n.tsv");
    f << "label\tn\tQ\tQ_minus_hr\tpredicted\n";
    for (const auto& r : records)
      if (r.status == "ok" && r.label != "sweep")
        f << r.label << '\t' << r.n << '\t' << fmt(r.Q) << '\t' << fmt(r.Q_minus_hr) << '\t' << fmt(r.predicted)
          << '\n';
    files.push_back("power_vs_n.tsv");
  }

  bool any_traj = false;
  for (const auto& r : records) any_traj = any_traj || (r.status == "ok" && r.trajectory);
  if (any_traj) {
    std::ofstream f(dir / "trajectories.tsv");
    f << "label\tn\tell\tk\tt\tuav_index\tcoords\n";
    for (const auto& r : records) {
      if (r.status != "ok" || !r.trajectory) continue;
      const Trajectory& tr = *r.trajectory;
      for (int k = 0; k < tr.K(); ++k)
        for (int i = 0; i < tr.n(); ++i) {
          f << r.label << '\t' << r.n << '\t' << fmt(r.ell) << '\t' << k << '\t' << fmt(tr.slot_time(k)) << '\t' << i
            << '\t';
          detail::write_coords(f, tr.slot(k)[i]);
          f << '\n';
        }
    }
    files.push_back("trajectories.tsv");
  }

  bool any_ref = false;
  for (const auto& r : records) any_ref = any_ref || (r.status == "ok" && r.reference && r.trajectory);
  if (any_ref) {
    std::ofstream f(dir / "analytic_compare.tsv");
    f << "n\tk\tt\tuav_index\tnumeric\tanalytic\n";
    for (const auto& r : records) {
      if (r.status != "ok" || !r.reference || !r.trajectory) continue;
      const Trajectory& a = *r.trajectory;
      const Trajectory& b = *r.reference;
      for (int k = 0; k < a.K(); ++k) {
        const double shift = k < static_cast<int>(r.drift.size()) ? r.drift[k] : 0.0;
        for (int i = 0; i < a.n(); ++i)
          f << r.n << '\t' << k << '\t' << fmt(a.slot_time(k)) << '\t' << i << '\t' << fmt(a.slot(k)[i][0] - shift)
            << '\t' << fmt(b.slot(k)[i][0] - shift) << '\n';
      }
    }
    files.push_back("analytic_compare.tsv");
  }
  return files;
}

}  // namespace uavdeploy::harness
