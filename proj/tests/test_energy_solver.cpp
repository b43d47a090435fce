#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "riesz/energy_solver.hpp"
#include "riesz/kernels.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

EnergyOptions seeded(std::uint64_t seed, std::size_t restarts = 4) {
  EnergyOptions o;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

TEST(Minimize, CircleTriangle) {
  const auto r = minimize(SetDescriptor::circle(), 3, 2.0, seeded(1));
  EXPECT_NEAR(r.value.value(), 2.0, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(Minimize, TwoPointsAreDiametral) {
  for (const auto& set : {SetDescriptor::circle(), SetDescriptor::segment(), SetDescriptor::sphere(2),
                          SetDescriptor::ball(3), SetDescriptor::circle(2.5)}) {
    const auto r = minimize(set, 2, 1.0, seeded(2));
    EXPECT_NEAR(r.value.value(), 2.0 / set.diameter_bound(), 1e-8) << describe(set);
  }
}

TEST(Minimize, Tetrahedron) {
  const double expected = 12.0 / std::sqrt(8.0 / 3.0);
  EXPECT_NEAR(expected, 7.3484692, 1e-7);
  const auto r = minimize(SetDescriptor::sphere(2), 4, 1.0, seeded(3, 8));
  EXPECT_NEAR(r.value.value(), expected, 1e-8);
  for (double v : r.restart_values) EXPECT_GE(v, expected - 1e-9);
}

TEST(Minimize, TraceStrictlyDecreases) {
  const auto r = minimize(SetDescriptor::sphere(2), 12, 1.0, seeded(4, 2));
  ASSERT_GT(r.trace.size(), 2u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LT(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.back(), r.value.value());
}

TEST(Minimize, CircleGapsAreEqual) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto r = minimize(SetDescriptor::circle(), n, 1.0, seeded(5, 2));
    std::vector<double> a;
    for (std::size_t i = 0; i < n; ++i) {
      double t = std::atan2(r.config.points()[i][1], r.config.points()[i][0]);
      a.push_back(t < 0 ? t + 2 * kPi : t);
    }
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? a[i + 1] - a[i] : 2 * kPi - a[i] + a[0];
      EXPECT_NEAR(gap, 2 * kPi / n, 1e-3) << n;
    }
  }
}

TEST(Minimize, ScalingCovariance) {
  for (double lambda : {0.5, 3.0}) {
    const auto base = minimize(SetDescriptor::sphere(2), 6, 1.5, seeded(6, 2));
    const auto big = minimize(SetDescriptor::sphere(2).scaled(lambda), 6, 1.5, seeded(6, 2));
    EXPECT_NEAR(big.value.value(), std::pow(lambda, -1.5) * base.value.value(), 1e-8 * big.value.value());
  }
}

TEST(Minimize, RejectsBadArguments) {
  EXPECT_THROW(minimize(SetDescriptor::circle(), 1, 1.0), std::invalid_argument);
  EXPECT_THROW(minimize(SetDescriptor::circle(), 3, 0.0), std::invalid_argument);
}

TEST(EnergyGradient, MatchesFiniteDifferences) {
  Rng rng(31);
  const auto s2 = SetDescriptor::sphere(2);
  for (int t = 0; t < 100; ++t) {
    PointList x(3);
    for (int i = 0; i < 7; ++i) x.push_back(random_point(s2, rng));
    const double s = 0.5 + 2.5 * rng.uniform();
    std::vector<double> g(x.flat().size());
    kernels::energy(x, s, g);
    const std::size_t c = rng.index(g.size());
    const double h = 1e-6;
    PointList xp = x, xm = x;
    xp.flat()[c] += h;
    xm.flat()[c] -= h;
    const double fd = (kernels::energy(xp, s, {}) - kernels::energy(xm, s, {})) / (2 * h);
    double gnorm = 0.0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    EXPECT_NEAR(g[c], fd, 1e-5 * std::max(std::abs(fd), 1e-3 * gnorm)) << t;
  }
}

TEST(Inequality, Examples) {
  const auto a = polarization_energy_inequality(3, 2.25, 2.0);
  EXPECT_DOUBLE_EQ(a.rhs, 1.0);
  EXPECT_TRUE(a.holds);
  const auto b = polarization_energy_inequality(2, 2 / std::sqrt(2.0), 1.0);
  EXPECT_NEAR(b.lhs, 1.4142, 1e-4);
  EXPECT_DOUBLE_EQ(b.rhs, 1.0);
  EXPECT_TRUE(b.holds);
  const auto c = polarization_energy_inequality(4, 4.0, 7.3484692);
  EXPECT_NEAR(c.rhs, 2.4495, 1e-4);
  EXPECT_TRUE(c.holds);
  EXPECT_FALSE(polarization_energy_inequality(3, 0.5, 2.0).holds);
  EXPECT_TRUE(polarization_energy_inequality(3, 0.5, 2.0, false).advisory);
}

TEST(EnergyRatioTable, Targets) {
  const auto t = energy_ratio_table(SetDescriptor::circle(), {4, 8, 16}, seeded(7, 1));
  EXPECT_NEAR(t.target, 1 / kPi, 1e-12);
  EXPECT_EQ(t.normalization, Normalization::N2LogN);
  for (const auto& row : t.rows) EXPECT_NEAR(row.value, row.ratio * row.n * row.n * std::log(double(row.n)), 1e-12 * row.value);
  EXPECT_NEAR(limit_target(SetDescriptor::sphere(2), 2), 0.25, 1e-12);
  const auto two = SetDescriptor::union_of({SetDescriptor::circle(), SetDescriptor::circle().placed({3.0, 0.0})});
  EXPECT_NEAR(limit_target(two, 1), 0.1591549, 1e-7);
}

}  // namespace
}  // namespace riesz
