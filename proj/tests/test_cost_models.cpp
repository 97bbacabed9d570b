#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/quadrature.hpp"

using namespace uavdeploy;

namespace {

std::vector<CostModel> all_models() {
  return {CostModel::fixed_rate(0.0, 2.0), CostModel::fixed_rate(10.0, 3.0), CostModel::fixed_rate(1.0, 2.5),
          CostModel::probabilistic_los(10.0, 3.0, 4.0, 0.6, 0.5), CostModel::variable_rate(10.0, 3.0, 1.0),
          CostModel::interference_aware(2.0, 2.0, 5.0)};
}

// brute force nearest point, lowest index on ties
int nearest_brute(const std::vector<Point>& x, const Point& q) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(x.size()); ++i)
    if (squared_distance(x[i], q) < squared_distance(x[best], q)) best = i;
  return best;
}

}  // namespace

TEST(PointwiseCost, FixedRateValues) {
  EXPECT_DOUBLE_EQ(CostModel::fixed_rate(0.0, 2.0).pointwise_cost(0.25), 0.25);
  EXPECT_DOUBLE_EQ(CostModel::fixed_rate(10.0, 3.0).pointwise_cost(0.0), 1000.0);
  EXPECT_NEAR(CostModel::fixed_rate(10.0, 3.0).pointwise_cost(44.0), std::pow(144.0, 1.5), 1e-9);
  EXPECT_NEAR(CostModel::fixed_rate(1.0, 2.5).pointwise_cost(3.0), std::pow(4.0, 1.25), 1e-12);
}

TEST(PointwiseCost, LineOfSightOverhead) {
  const double h = 10.0, r = 3.0, b = 4.0, c = 0.6, delta = 0.5;
  const auto m = CostModel::probabilistic_los(h, r, b, c, delta);
  const double p = 1.0 / (1.0 + c * std::exp(-b * (std::numbers::pi / 2 - c)));
  EXPECT_NEAR(m.pointwise_cost(0.0), std::pow(h, r) * (p + (1.0 - p) / delta), 1e-9);
  const double s = 50.0;
  const double theta = std::atan(h / std::sqrt(s));
  const double ps = 1.0 / (1.0 + c * std::exp(-b * (theta - c)));
  EXPECT_NEAR(m.pointwise_cost(s), std::pow(s + h * h, r / 2) * (ps + (1.0 - ps) / delta), 1e-9);
}

TEST(PointwiseCost, RateVariantsAreNegatedRates) {
  const auto v = CostModel::variable_rate(10.0, 3.0, 2.0);
  const double s = 30.0;
  const double rate = std::log2(1.0 + 2.0 / std::pow(s + 100.0, 1.5));
  EXPECT_NEAR(v.pointwise_cost(s), -rate, 1e-15);
  EXPECT_NEAR(v.physical_kernel(s), rate, 1e-15);
  EXPECT_EQ(v.sense(), Sense::maximize);
  const auto ia = CostModel::interference_aware(10.0, 3.0, 2.0);
  EXPECT_DOUBLE_EQ(ia.pointwise_cost(s), v.pointwise_cost(s));
}

TEST(PointwiseCost, MonotoneInDistance) {
  for (const auto& m : all_models()) {
    double prev_cost = -std::numeric_limits<double>::infinity();
    double prev_phys = m.physical_kernel(0.0);
    for (int k = 0; k <= 400; ++k) {
      const double s = 0.25 * k * k;
      const double g = m.pointwise_cost(s);
      EXPECT_GE(g, prev_cost) << to_string(m.variant) << " s=" << s;
      const double phys = m.physical_kernel(s);
      if (m.sense() == Sense::minimize)
        EXPECT_GE(phys, prev_phys);
      else
        EXPECT_LE(phys, prev_phys);
      prev_cost = g;
      prev_phys = phys;
    }
  }
}

TEST(PointwiseCost, DerivativeMatchesFiniteDifference) {
  for (const auto& m : all_models())
    for (double s : {0.3, 2.0, 17.0, 150.0}) {
      const double e = 1e-6 * s;
      const double fd = (m.pointwise_cost(s + e) - m.pointwise_cost(s - e)) / (2 * e);
      EXPECT_NEAR(m.derivative(s), fd, 1e-6 * (std::fabs(fd) + 1e-12)) << to_string(m.variant) << " s=" << s;
    }
}

TEST(CostModel, ValidationRejectsBadParameters) {
  EXPECT_THROW(CostModel::fixed_rate(-1.0, 2.0), invalid_input);
  EXPECT_THROW(CostModel::fixed_rate(1.0, 0.0), invalid_input);
  EXPECT_THROW(CostModel::probabilistic_los(10.0, 3.0, 4.0, 0.6, 1.0), invalid_input);
  EXPECT_THROW(CostModel::probabilistic_los(10.0, 3.0, 0.0, 0.6, 0.5), invalid_input);
  EXPECT_THROW(CostModel::variable_rate(10.0, 3.0, 0.0), invalid_input);
}

TEST(NearestLocator, MatchesBruteForceWithLowestIndexTies) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> x1, x2;
    for (int i = 0; i < 9; ++i) {
      x1.emplace_back(std::round(U(rng) * 8) / 8);  // repeated values force ties
      x2.emplace_back(std::round(U(rng) * 4) / 4, std::round(U(rng) * 4) / 4);
    }
    const NearestLocator l1(x1), l2(x2);
    for (int k = 0; k < 200; ++k) {
      const Point q1(std::round(U(rng) * 16) / 16);
      const Point q2(std::round(U(rng) * 8) / 8, std::round(U(rng) * 8) / 8);
      EXPECT_EQ(l1.nearest(q1), nearest_brute(x1, q1));
      EXPECT_EQ(l2.nearest(q2), nearest_brute(x2, q2));
    }
  }
}

TEST(Partition, MassesAndAssignment) {
  const Quadrature q = build_quadrature(SpatioTemporalDensity::moving_gaussian(), 0.3, 40);
  const std::vector<Point> x = {Point(0.0, 0.0), Point(5.0, 5.0), Point(-4.0, 8.0), Point(9.0, -2.0)};
  const VoronoiPartition part = build_partition(x, q);
  double total = 0.0;
  for (double m : part.cell_mass) total += m;
  EXPECT_NEAR(total, q.total_mass(), 1e-12);
  std::size_t counted = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mass = 0.0, mx = 0.0;
    for (std::size_t m = part.offsets[i]; m < part.offsets[i + 1]; ++m) {
      const std::size_t j = part.members[m];
      EXPECT_EQ(part.assignment[j], static_cast<int>(i));
      mass += q.mass[j];
      mx += q.mass[j] * q.nodes[j][0];
      ++counted;
    }
    EXPECT_NEAR(part.cell_mass[i], mass, 1e-12);
    EXPECT_NEAR(part.cell_first_moment[i][0], mx, 1e-10);
  }
  EXPECT_EQ(counted, q.size());
  for (std::size_t j = 0; j < q.size(); j += 7) EXPECT_EQ(part.assignment[j], nearest_brute(x, q.nodes[j]));
}

TEST(DeploymentCost, EqualsPartitionedSumAndBruteForce) {
  const Quadrature q = build_quadrature(SpatioTemporalDensity::shifted_power_law(), 0.4, 64);
  const std::vector<Point> x = {Point(1.4), Point(1.9), Point(1.55), Point(2.1)};
  for (const auto& m : all_models()) {
    const double c = deployment_cost(m, x, q);
    const VoronoiPartition part = build_partition(x, q);
    EXPECT_NEAR(partitioned_cost(m, x, part, q), c, 1e-12 * std::fabs(c) + 1e-15);
    double brute = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : x) best = std::min(best, m.pointwise_cost(squared_distance(p, q.nodes[j])));
      brute += q.mass[j] * best;
    }
    EXPECT_NEAR(c, brute, 1e-10 * std::fabs(brute) + 1e-14) << to_string(m.variant);
  }
}

TEST(DeploymentCost, UniformSinglePointClosedForm) {
  // U[0,1], one point at 1/2, h = 0, r = 2: int (q - 1/2)^2 = 1/12
  const Quadrature q = build_quadrature(SpatioTemporalDensity::uniform_interval(0.0, 1.0), 0.0, 32);
  EXPECT_NEAR(deployment_cost(CostModel::fixed_rate(0.0, 2.0), {Point(0.5)}, q), 1.0 / 12.0, 1e-13);
  // r = 4: int (q - 1/2)^4 = 1/80
  EXPECT_NEAR(deployment_cost(CostModel::fixed_rate(0.0, 4.0), {Point(0.5)}, q), 1.0 / 80.0, 1e-13);
}

TEST(DeploymentCost, EmptyDeploymentThrows) {
  const Quadrature q = build_quadrature(SpatioTemporalDensity::uniform_interval(0.0, 1.0), 0.0, 16);
  EXPECT_THROW(deployment_cost(CostModel::fixed_rate(0.0, 2.0), {}, q), invalid_input);
}

TEST(CellGradient, MatchesFiniteDifference) {
  const Quadrature q = build_quadrature(SpatioTemporalDensity::moving_gaussian(), 0.1, 40);
  const std::vector<Point> x = {Point(0.0, 5.0), Point(4.0, 12.0), Point(-3.0, 9.0)};
  const VoronoiPartition part = build_partition(x, q);
  for (const auto& m : all_models())
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Point y = x[i] + Point(0.3, -0.2);
      const Point g = cell_cost_gradient(m, y, part, i, q);
      for (int a = 0; a < 2; ++a) {
        Point e = Point::zero(2);
        e[a] = 1e-5;
        const double fd = (cell_cost(m, y + e, part, i, q) - cell_cost(m, y - e, part, i, q)) / 2e-5;
        EXPECT_NEAR(g[a], fd, 1e-5 * (std::fabs(fd) + 1e-9)) << to_string(m.variant);
      }
    }
}
