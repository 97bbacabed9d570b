// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code is
// nonzero iff any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "uavdeploy/uavdeploy.hpp"

using namespace uavdeploy;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <class... A>
  Detail& add(const char* fmt, A... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CostModel kModel1 = CostModel::fixed_rate(0.0, 2.0);
const CostModel kModel2 = CostModel::fixed_rate(10.0, 3.0);

ExtremalOptions multistart(int starts) {
  ExtremalOptions o;
  o.starts = starts;
  o.lloyd.max_iterations = 5000;
  o.lloyd.tolerance = 1e-13;
  return o;
}

// shared by criteria 2 and 4
double example1_zero_q() {
  static std::optional<double> q;
  if (!q) {
    // 128 panels of 16 Gauss nodes: 2048 nodes per slot
    const DynamicProblem prob(kModel1, SpatioTemporalDensity::shifted_power_law(), 41, 128);
    q = solve_zero_movement(prob, 32, multistart(20)).Q;
  }
  return *q;
}

// shared by criteria 3 and 4
const UnlimitedMovementResult& example1_unlimited() {
  static std::optional<UnlimitedMovementResult> u;
  if (!u) {
    const DynamicProblem prob(kModel1, SpatioTemporalDensity::shifted_power_law(), 20, 2000);
    u = solve_unlimited_movement(prob, 32, multistart(20));
  }
  return *u;
}

Outcome criterion1() {
  Detail d;
  bool ok = true;
  const Quadrature q = build_quadrature(SpatioTemporalDensity::uniform_interval(0.0, 1.0), 0.0, 512);
  for (int n : {1, 2, 4, 8}) {
    const auto t0 = std::chrono::steady_clock::now();
    const LloydResult res = lloyd_static(kModel1, q, default_init(kModel1, q, n), {});
    const double secs = seconds_since(t0);
    Deployment x = res.points;
    detail::sort_1d(x);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::fabs(x[i][0] - (2.0 * i + 1.0) / (2.0 * n)));
    const double expect = 1.0 / (3.0 * std::pow(2.0 * n, 2.0));
    const double rel = std::fabs(res.cost - expect) / expect;
    ok = ok && dev <= 1e-6 && rel <= 1e-8 && secs < 1.0;
    d.add("n=%d dev=%.2e rel=%.2e %.3fs", n, dev, rel, secs);
  }
  return {ok, d.str()};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double q = example1_zero_q();
  const double secs = seconds_since(t0);
  const double v = q * 32 * 32;
  Detail d;
  d.add("Q*n^2=%.4f in [0.48,0.54], %.1fs", v, secs);
  return {v >= 0.48 && v <= 0.54 && secs < 60.0, d.str()};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& u = example1_unlimited();
  const double secs = seconds_since(t0);
  const double v = u.Q * 32 * 32, m = u.movement.total / 32;
  Detail d;
  d.add("Q*n^2=%.4f in [0.059,0.066], M_total/n=%.4f in [1.79,1.88], %.1fs", v, m, secs);
  return {v >= 0.059 && v <= 0.066 && m >= 1.79 && m <= 1.88 && secs < 120.0, d.str()};
}

Outcome criterion4() {
  const double ratio = example1_zero_q() / example1_unlimited().Q;
  Detail d;
  d.add("ratio=%.3f in [7.0,9.2]", ratio);
  return {ratio >= 7.0 && ratio <= 9.2, d.str()};
}

Outcome criterion5() {
  const auto f = SpatioTemporalDensity::shifted_power_law();
  const int n = 8, K = 20;
  const DynamicProblem prob(kModel1, f, K, 2000);
  const UnlimitedMovementResult u = solve_unlimited_movement(prob, n, multistart(20));
  const Trajectory ref = analytic_trajectory_1d(f, kModel1, n, K);
  double worst = 0.0;
  int wk = 0, wi = 0;
  for (int k = 0; k < K; ++k) {
    const double drift = f.support(prob.slot_time(k)).lo[0];
    for (int i = 0; i < n; ++i) {
      const double dev = std::fabs((u.trajectory.slot(k)[i][0] - drift) - (ref.slot(k)[i][0] - drift));
      if (dev > worst) worst = dev, wk = k, wi = i;
    }
  }
  Detail d;
  d.add("max deviation %.4f (slot %d, uav %d) limit 0.03", worst, wk, wi + 1);
  return {worst <= 0.03, d.str()};
}

Outcome criterion6() {
  const int n = 32;
  const MovementReport m =
      trajectory_movement(analytic_trajectory_1d(SpatioTemporalDensity::shifted_power_law(), kModel1, n, 81));
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double u = (2.0 * i - 1.0) / (2.0 * n);
    const double expect = 2.0 + u - std::sqrt(u);
    worst = std::max(worst, std::fabs(m.per_uav[i - 1] - expect) / expect);
  }
  Detail d;
  d.add("worst relative error %.4f limit 0.02", worst);
  return {worst <= 0.02, d.str()};
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = SpatioTemporalDensity::moving_gaussian();
  const int res = 200;
  const double fbar = alpha_norm(build_quadrature(time_averaged_density(f, 201), 0.0, res), 0.5);
  const int steps = 200;
  double snap = 0.0;
  for (int s = 0; s < steps; ++s) snap += alpha_norm(f, 0.5, res, f.period() * s / steps);
  snap *= f.period() / steps;
  const double e1 = std::fabs(fbar - 908.16) / 908.16;
  const double e2 = std::fabs(snap - 88.0 * std::numbers::pi) / (88.0 * std::numbers::pi);

  const int n = 32;
  const DynamicProblem prob(kModel2, f, 20, res);
  const ZeroMovementResult z = solve_zero_movement(prob, n, multistart(4));
  const double predicted = 25.0 / (6.0 * std::sqrt(3.0)) * 908.16 / n;
  const double e3 = std::fabs((z.Q - 1000.0) - predicted) / predicted;
  const double secs = seconds_since(t0);
  Detail d;
  d.add("||fbar||=%.2f err %.4f", fbar, e1);
  d.add("int ||f_t|| dt=%.2f err %.4f", snap, e2);
  d.add("Q-1000=%.2f predicted %.2f err %.3f", z.Q - 1000.0, predicted, e3);
  d.add("%.0fs", secs);
  return {e1 <= 0.01 && e2 <= 0.01 && e3 <= 0.15 && secs < 600.0, d.str()};
}

Trajectory random_trajectory(const DynamicProblem& prob, int n, std::mt19937_64& rng) {
  std::vector<Deployment> slots;
  for (int k = 0; k < prob.K; ++k)
    slots.push_back(random_deployment(prob.density.support(prob.slot_time(k)), n, rng()));
  return Trajectory(slots, prob.period());
}

Outcome criterion8() {
  const DynamicProblem p1(kModel1, SpatioTemporalDensity::shifted_power_law(), 12, 48);
  const DynamicProblem p2(kModel2, SpatioTemporalDensity::moving_gaussian(), 10, 30);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logell(std::log(0.1), std::log(10.0));
  std::uniform_int_distribution<int> count(2, 8);
  double worst = -std::numeric_limits<double>::infinity();
  int epochs = 0;
  for (int run = 0; run < 50; ++run) {
    const DynamicProblem& prob = run % 2 == 0 ? p1 : p2;
    const int n = count(rng);
    LagrangianConfig cfg;
    cfg.K = prob.K;
    cfg.ell = std::exp(logell(rng));
    cfg.max_epochs = 6;
    cfg.max_iterations = 4;
    const LagrangianReport rep = optimize_trajectory(prob, n, cfg, random_trajectory(prob, n, rng));
    double prev = rep.initial.L;
    for (const auto& e : rep.per_epoch) {
      worst = std::max(worst, e.L - prev);
      prev = e.L;
      ++epochs;
    }
  }
  Detail d;
  d.add("50 runs, %d epochs, largest epoch increase %.3e", epochs, worst);
  return {worst <= 1e-12, d.str()};
}

Outcome criterion9() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0), C(0.05, 5.0);
  double worst1 = -std::numeric_limits<double>::infinity();
  bool ok1 = true;
  for (int k = 0; k < 1000; ++k) {
    const SubproblemInstance inst{Point(U(rng)), Point(U(rng)), Point(U(rng)), C(rng)};
    const double fx = inst.phi(solve_subproblem(inst, 1));
    const double lo = std::min({inst.u[0], inst.v[0], inst.w[0]}), hi = std::max({inst.u[0], inst.v[0], inst.w[0]});
    const double step = 1e-5;
    double best = std::numeric_limits<double>::infinity();
    for (double x = lo; x <= hi + step / 2; x += step) best = std::min(best, inst.phi(Point(x)));
    // the grid misses the minimizer by at most step/2, where phi has slope at most 2 + 2c (hi - lo)
    const double slack = 0.5 * step * (2.0 + 2.0 * inst.c * (hi - lo));
    worst1 = std::max(worst1, fx - best);
    ok1 = ok1 && fx <= best + slack;
  }
  double worst2 = 0.0;
  for (int k = 0; k < 200; ++k) {
    const SubproblemInstance inst{Point(U(rng), U(rng)), Point(U(rng), U(rng)), Point(U(rng), U(rng)), C(rng)};
    const double fx = inst.phi(solve_subproblem(inst, 2));
    const int g = 400;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= g; ++a)
      for (int b = 0; a + b <= g; ++b) {
        const Point x = inst.w + (inst.u - inst.w) * (double(a) / g) + (inst.v - inst.w) * (double(b) / g);
        best = std::min(best, inst.phi(x));
      }
    worst2 = std::max(worst2, std::fabs(fx - best));
  }
  Detail d;
  d.add("d=1 worst phi-grid %.2e", worst1);
  d.add("d=2 worst |phi-grid| %.2e limit 1e-4", worst2);
  return {ok1 && worst2 <= 1e-4, d.str()};
}

Outcome criterion10() {
  const DynamicProblem prob(kModel2, SpatioTemporalDensity::moving_gaussian(), 5, 40);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(-12.0, 12.0), E(0.0, 5.0);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const int k = done % prob.K;
    const Quadrature& q = prob.slot(k);
    Deployment x;
    for (int i = 0; i < 4; ++i) x.emplace_back(U(rng), U(rng));
    const VoronoiPartition part = build_partition(x, q);
    if (part.cell_mass[0] <= 0.0) continue;
    const UavObjective obj{prob.model, q, part, 0, Point(U(rng), U(rng)), Point(U(rng), U(rng)), 1.0 / prob.K,
                           E(rng)};
    const Point y = x[0];
    if (distance(y, obj.u) < 0.5 || distance(y, obj.v) < 0.5) continue;
    const Point g = subproblem_gradient(obj, y);
    Point fd = Point::zero(2);
    for (int a = 0; a < 2; ++a) {
      Point e = Point::zero(2);
      e[a] = 1e-6;
      fd[a] = (obj.value(y + e) - obj.value(y - e)) / 2e-6;
    }
    worst = std::max(worst, norm(g - fd) / norm(fd));
    ++done;
  }
  Detail d;
  d.add("100 instances, worst relative error %.2e limit 1e-5", worst);
  return {worst <= 1e-5, d.str()};
}

Outcome criterion11() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    const Point u(U(rng), U(rng)), v(U(rng), U(rng)), w(U(rng), U(rng)), x(2 * U(rng), 2 * U(rng));
    const Point y = triangle_dominating_point(x, u, v, w);
    for (const Point& a : {u, v, w}) worst = std::max(worst, distance(y, a) - distance(x, a));
  }
  Detail d;
  d.add("1000 draws, largest distance increase %.2e", worst);
  return {worst <= 1e-12, d.str()};
}

Outcome criterion12() {
  // F(nu) = 2 int_0^{nu/2} (u^2 + h^2)^{r/2} du on nu = 0, 0.1, ..., 9.9
  double worst = -std::numeric_limits<double>::infinity();
  Detail d;
  for (double h : {0.0, 1.0, 10.0})
    for (double r : {2.0, 3.0}) {
      auto F = [&](double nu) {
        return 2.0 * integrate_panels([&](double u) { return std::pow(u * u + h * h, r / 2); }, 0.0, nu / 2, 16);
      };
      std::vector<double> vals;
      for (int j = 0; j < 100; ++j) vals.push_back(F(0.1 * j));
      double m = -std::numeric_limits<double>::infinity();
      for (int j = 1; j + 1 < 100; ++j) m = std::max(m, vals[j + 1] - 2 * vals[j] + vals[j - 1]);
      worst = std::max(worst, m);
      d.add("h=%g r=%g max 2nd diff %.3e", h, r, m);
    }
  return {worst <= 1e-10, d.str()};
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int j = 0; j < count; ++j) v.push_back(lo * std::pow(hi / lo, double(j) / (count - 1)));
  return v;
}

struct SweepOutcome {
  double q_zero = 0.0, q_unlimited = 0.0;
  SweepResult sweep;
};

SweepOutcome run_sweep(const DynamicProblem& prob, int n, const std::vector<double>& ells, int epochs, int iters,
                       int starts) {
  SweepOutcome out;
  const ZeroMovementResult z = solve_zero_movement(prob, n, multistart(starts));
  const UnlimitedMovementResult u = solve_unlimited_movement(prob, n, multistart(starts));
  out.q_zero = z.Q;
  out.q_unlimited = u.Q;
  LagrangianConfig cfg;
  cfg.K = prob.K;
  cfg.max_epochs = epochs;
  cfg.max_iterations = iters;
  out.sweep =
      sweep_tradeoff(prob, n, ells, cfg, Trajectory::stationary(z.points, prob.K, prob.period()), u.trajectory);
  return out;
}

Outcome criterion13() {
  Detail d;
  bool ok = true;
  struct Case {
    const char* name;
    DynamicProblem prob;
    std::vector<double> ells;
  };
  const Case cases[] = {
      {"1-D", DynamicProblem(kModel1, SpatioTemporalDensity::shifted_power_law(), 20, 64), logspace(1e-7, 10.0, 12)},
      {"2-D", DynamicProblem(kModel2, SpatioTemporalDensity::moving_gaussian(), 20, 40), logspace(1e-4, 1e2, 8)},
  };
  for (const auto& c : cases) {
    const SweepOutcome s = run_sweep(c.prob, 8, c.ells, 10, 5, 4);
    const double lo = s.sweep.points.front().Q, hi = s.sweep.points.back().Q;
    const double e0 = std::fabs(lo - s.q_unlimited) / s.q_unlimited;
    const double einf = std::fabs(hi - s.q_zero) / s.q_zero;
    ok = ok && e0 <= 0.05 && einf <= 0.05;
    d.add("%s Q(ell min)=%.5g vs %.5g err %.3f, Q(ell max)=%.5g vs %.5g err %.3f", c.name, lo, s.q_unlimited, e0, hi,
          s.q_zero, einf);
  }
  return {ok, d.str()};
}

// Q at the midpoint of the per-UAV movement range covered by both envelopes
std::optional<std::pair<double, double>> matched_q(const SweepOutcome& a, const SweepOutcome& b, double& m_mid) {
  const auto ea = lower_envelope(a.sweep.points), eb = lower_envelope(b.sweep.points);
  const double lo = std::max(ea.front().M_per_uav, eb.front().M_per_uav);
  const double hi = std::min(ea.back().M_per_uav, eb.back().M_per_uav);
  if (!(hi > lo)) return std::nullopt;
  m_mid = 0.5 * (lo + hi);
  const auto qa = interpolate_q_at_movement(ea, m_mid), qb = interpolate_q_at_movement(eb, m_mid);
  if (!qa || !qb) return std::nullopt;
  return std::pair{*qa, *qb};
}

Outcome criterion14() {
  Detail d;
  bool ok = true;
  {
    const DynamicProblem prob(kModel1, SpatioTemporalDensity::shifted_power_law(), 20, 64);
    // multipliers that span the curve scale like n^-3
    const SweepOutcome s16 = run_sweep(prob, 16, logspace(1e-6 / 8, 1e-1 / 8, 12), 20, 10, 4);
    const SweepOutcome s32 = run_sweep(prob, 32, logspace(1e-6 / 64, 1e-1 / 64, 12), 20, 10, 4);
    double m = 0.0;
    const auto q = matched_q(s16, s32, m);
    const double ratio = q ? q->first / q->second : std::numeric_limits<double>::quiet_NaN();
    ok = ok && q && ratio >= 3.0 && ratio <= 5.0;
    d.add("1-D at M/n=%.3f ratio %.3f in [3,5]", m, ratio);
  }
  {
    const DynamicProblem prob(kModel2, SpatioTemporalDensity::moving_gaussian(), 20, 60);
    const SweepOutcome s16 = run_sweep(prob, 16, logspace(2e-3, 2.0, 8), 10, 5, 2);
    const SweepOutcome s32 = run_sweep(prob, 32, logspace(2e-3 / 2, 2.0 / 2, 8), 10, 5, 2);
    double m = 0.0;
    const auto q = matched_q(s16, s32, m);
    const double hr = std::pow(10.0, 3.0);
    const double ratio = q ? (q->first - hr) / (q->second - hr) : std::numeric_limits<double>::quiet_NaN();
    ok = ok && q && ratio >= 1.6 && ratio <= 2.6;
    d.add("2-D at M/n=%.3f ratio of Q-h^r %.3f in [1.6,2.6]", m, ratio);
  }
  return {ok, d.str()};
}

Outcome plateau() {
  const DynamicProblem prob(kModel1, SpatioTemporalDensity::shifted_power_law(), 20, 256);
  const int n = 8;
  const ZeroMovementResult z = solve_zero_movement(prob, n, multistart(4));
  const UnlimitedMovementResult u = solve_unlimited_movement(prob, n, multistart(4));
  LagrangianConfig cfg;
  cfg.K = prob.K;
  cfg.ell = 2.0;
  const LagrangianReport rep =
      optimize_trajectory_best(prob, n, cfg, {u.trajectory, Trajectory::stationary(z.points, prob.K, prob.period())});
  const double q = rep.last().Q, m = rep.last().M;
  const double eq = std::fabs(q - 5.5e-3) / 5.5e-3, em = std::fabs(m - 5.4) / 5.4;
  Detail d;
  d.add("Q=%.4g (target 5.5e-3, err %.2f), M_total=%.4g (target 5.4, err %.2f), %d epochs", q, eq, m, em,
        rep.epochs_run);
  return {eq <= 0.2 && em <= 0.2, d.str()};
}

const std::map<int, std::function<Outcome()>> kCriteria = {
    {1, criterion1},   {2, criterion2},   {3, criterion3},   {4, criterion4},   {5, criterion5},
    {6, criterion6},   {7, criterion7},   {8, criterion8},   {9, criterion9},   {10, criterion10},
    {11, criterion11}, {12, criterion12}, {13, criterion13}, {14, criterion14},
};

bool report(const std::string& name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::cout << name << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << seconds_since(t0)
            << " s]" << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  bool run_plateau = false;
  app.add_option("--criterion", selected, "criterion number, repeatable (default: all)")->check(CLI::Range(1, 14));
  app.add_flag("--plateau", run_plateau, "run the fixed-multiplier plateau example");
  CLI11_PARSE(app, argc, argv);

  if (selected.empty() && !run_plateau)
    for (const auto& [k, fn] : kCriteria) selected.push_back(k);
  bool ok = true;
  for (int k : selected) ok = report("criterion " + std::to_string(k), kCriteria.at(k)) && ok;
  if (run_plateau) ok = report("plateau example", plateau) && ok;
  return ok ? 0 : 1;
}
