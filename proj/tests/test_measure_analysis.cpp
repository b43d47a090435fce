#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "riesz/measure_analysis.hpp"
#include "riesz/polarization.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

double arc_ratio(double eps) { return 2.0 * std::asin(eps / 2.0) / eps; }

Point on_circle(double t) { return {std::cos(t), std::sin(t)}; }

TEST(Alpha, CircleFormula) {
  EXPECT_NEAR(alpha(SetDescriptor::circle(), 1.0).value, kPi / 3, 1e-12);
  EXPECT_NEAR(alpha(SetDescriptor::circle(), 0.1).value, 1.0004172, 1e-7);
  for (double eps : {1.0, 0.5, 0.1, 0.01}) EXPECT_NEAR(alpha(SetDescriptor::circle(), eps).value, arc_ratio(eps), 1e-12);
}

TEST(Alpha, SphereIsOne) {
  for (double eps : {2.0, 1.0, 0.3, 0.01}) EXPECT_NEAR(alpha(SetDescriptor::sphere(2), eps).value, 1.0, 1e-12);
}

TEST(Alpha, SolidSetsStayBelowOne) {
  for (const auto& set : {SetDescriptor::segment(), SetDescriptor::ball(2), SetDescriptor::ball(3), SetDescriptor::cube(2)})
    EXPECT_LE(alpha(set, 0.3).value, 1.0 + 1e-12) << describe(set);
}

TEST(Alpha, MonotoneOnNestedGrids) {
  for (const auto& set : {SetDescriptor::circle(), SetDescriptor::arc(1.0, 2.0), SetDescriptor::sphere(2)}) {
    double prev = 0.0;
    for (int j = 0; j < 12; ++j) {
      const double v = alpha(set, 0.05 * std::exp2(j / 8.0)).value;
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
}

TEST(Alpha, BoundsEverySampledRatio) {
  const auto arc = SetDescriptor::arc(1.0, 2.5);
  const auto est = alpha(arc, 0.7, 16, 16);
  const PointList xs = sample(arc, 16);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (int k = 0; k < 16; ++k) {
      const double r = 0.7 * std::exp2(-k / 8.0);
      EXPECT_GE(est.value, ball_intersection_measure(arc, xs[i], r) / (2.0 * r));
    }
}

TEST(AlphaLimit, Schedules) {
  const auto c = alpha_limit_check(SetDescriptor::circle(), {0.5, 0.1, 0.01});
  ASSERT_EQ(c.values.size(), 3u);
  EXPECT_NEAR(c.values[0], 1.0107, 1e-4);
  EXPECT_NEAR(c.values[1], 1.00042, 1e-5);
  EXPECT_NEAR(c.values[2], 1.0000042, 1e-7);
  EXPECT_TRUE(c.passes);
  const auto s = alpha_limit_check(SetDescriptor::sphere(2), {0.5, 0.1, 0.01});
  for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_THROW(alpha_limit_check(SetDescriptor::circle(), {0.1, 0.5}), std::invalid_argument);
  EXPECT_THROW(alpha_limit_check(SetDescriptor::circle(), {0.1, 0.5, 0.01}), std::invalid_argument);
}

TEST(AlphaLimit, TangentCircles) {
  const auto tangent = SetDescriptor::union_of(
      {SetDescriptor::circle().placed({-1.0, 0.0}), SetDescriptor::circle().placed({1.0, 0.0})});
  const auto with = alpha_limit_check(tangent, {0.5, 0.1, 0.01}, 0.1);
  EXPECT_TRUE(with.passes);
  const auto without = alpha_limit_check(tangent, {0.5, 0.1, 0.01});
  EXPECT_GT(without.values.front(), 1.0);
  EXPECT_GT(without.values.back(), 1.0);
}

TEST(CapCap, MatchesQuadrature) {
  const auto s2 = SetDescriptor::sphere(2);
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const Point c = random_point(s2, rng);
    const auto cell = angular_cap_cell(s2, 0, c, rng.uniform(0.1, 3.0));
    const Region region = Region::of(cell);
    const Point x = random_point(s2, rng);
    const double r = rng.uniform(0.05, 2.0);
    // Oracle: count a fine spiral lattice.
    const PointList grid = sample(s2, 400000);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) hits += (contains(cell, grid[i]) && vec::dist(grid[i], x) <= r) ? 1 : 0;
    const double oracle = 4 * kPi * static_cast<double>(hits) / static_cast<double>(grid.size());
    EXPECT_NEAR(region.ball_measure(x, r), oracle, 2e-3) << t;
  }
}

TEST(RieszIntegral, CircleExamples) {
  const Region circle = Region::whole(SetDescriptor::circle());
  const Point y = on_circle(0.3);
  EXPECT_EQ(riesz_integral(circle, y, 2.0).value, 0.0);
  const auto one = riesz_integral(circle, y, 1.0);
  EXPECT_TRUE(one.converged);
  EXPECT_NEAR(one.value, -2.0 * std::log(std::tan(kPi / 12)), 1e-6);
  EXPECT_NEAR(one.value, 2.6339158, 1e-6);
  const double tr = 2 * std::asin(0.1);
  EXPECT_NEAR(riesz_integral(circle, y, 0.2).value, -2.0 * std::log(std::tan(tr / 4)), 1e-6);
  EXPECT_NEAR(riesz_integral(circle, y, 0.2).value, 5.9864, 1e-4);
}

TEST(RieszIntegral, SphereClosedForm) {
  const Region s2 = Region::whole(SetDescriptor::sphere(2));
  for (double big_r : {0.05, 0.5, 1.5}) {
    const auto v = riesz_integral(s2, Point{0, 0, 1}, big_r);
    EXPECT_TRUE(v.converged);
    EXPECT_NEAR(v.value, -2.0 * kPi * std::log(big_r / 2.0), 1e-6 * v.value);
  }
}

TEST(RieszIntegral, ArcClosedForm) {
  // Half-width w around y: 2 (ln tan(w/4) - ln tan(theta_R/4)).
  const auto arc = Region::whole(SetDescriptor::arc(1.0, kPi));
  const Point y = on_circle(kPi / 2);
  const double tr = 2 * std::asin(0.15);
  EXPECT_NEAR(riesz_integral(arc, y, 0.3).value, 2 * (std::log(std::tan(kPi / 8)) - std::log(std::tan(tr / 4))), 1e-6);
}

TEST(RieszIntegral, CapCellAgainstLattice) {
  const auto s2 = SetDescriptor::sphere(2);
  const auto cell = angular_cap_cell(s2, 0, Point{0, 0, 1}, 1.0);
  const Point y = {std::sin(0.6), 0.0, std::cos(0.6)};
  const double big_r = 0.3;
  const auto v = riesz_integral(Region::of(cell), y, big_r);
  EXPECT_TRUE(v.converged);
  const PointList grid = sample(s2, 400000);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dd = vec::dist(grid[i], y);
    if (contains(cell, grid[i]) && dd > big_r) acc += 1.0 / (dd * dd);
  }
  EXPECT_NEAR(v.value, 4 * kPi * acc / grid.size(), 5e-3 * v.value);
}

TEST(NearField, CircleExample) {
  const Region circle = Region::whole(SetDescriptor::circle());
  const auto c = near_field_bound_check(circle, on_circle(0.0), 0.2, 1.0);
  EXPECT_NEAR(c.lhs, 5.9864, 1e-4);
  EXPECT_NEAR(c.rhs, 2 * kPi + 2 * (kPi / 3) * std::log(5.0), 1e-9);
  EXPECT_NEAR(c.rhs, 9.65398, 1e-5);
  EXPECT_TRUE(c.holds);
  const auto eq = near_field_bound_check(circle, on_circle(0.0), 0.7, 0.7);
  EXPECT_DOUBLE_EQ(eq.rhs, 2 * kPi / 0.7);
  EXPECT_THROW(near_field_bound_check(circle, on_circle(0.0), 1.0, 0.5), std::invalid_argument);
}

TEST(NearField, RandomSuite) {
  const auto suite = near_field_suite(200, 7);
  EXPECT_EQ(suite.instances, 200u);
  EXPECT_EQ(suite.holding, 200u);
  EXPECT_EQ(suite.converged, 200u);
  EXPECT_GE(suite.worst_slack, -1e-9);
}

TEST(Counts, Examples) {
  const auto circle = SetDescriptor::circle();
  const PointList four = equally_spaced_circle(4);
  const auto cell = param_box_cell(circle, 0, {kPi / 4}, {3 * kPi / 4});
  const auto rep = empirical_counts(circle, four, {cell});
  EXPECT_DOUBLE_EQ(rep.rows[0].fraction, 0.25);
  EXPECT_DOUBLE_EQ(rep.rows[0].target, 0.25);
  EXPECT_NEAR(rep.max_deviation, 0.0, 1e-15);

  PointList dup(2);
  dup.push_back(on_circle(1.0));
  dup.push_back(on_circle(1.0));
  const auto around = angular_cap_cell(circle, 0, on_circle(1.0), 0.1);
  EXPECT_DOUBLE_EQ(empirical_counts(circle, dup, {around}).rows[0].fraction, 1.0);
}

TEST(Counts, PartitionSumsToOne) {
  Rng rng(3);
  for (const auto& set : {SetDescriptor::circle(), SetDescriptor::sphere(2), SetDescriptor::ball(2)}) {
    CellFamily fam;
    fam.kind = CellFamily::Kind::Partition;
    fam.count = 7;
    const auto cells = make_test_cells(set, fam, 1);
    PointList pts(set.m());
    for (int i = 0; i < 50; ++i) pts.push_back(random_point(set, rng));
    double total = 0.0;
    for (const auto& r : empirical_counts(set, pts, cells).rows) total += r.fraction;
    EXPECT_DOUBLE_EQ(total, 1.0) << describe(set);
  }
}

TEST(Counts, IsometryInvariant) {
  const auto s2 = SetDescriptor::sphere(2);
  // Rotation by 0.7 about the z axis followed by 1.1 about x.
  const double c1 = std::cos(0.7), s1 = std::sin(0.7), c2 = std::cos(1.1), s2n = std::sin(1.1);
  const std::vector<double> rot = {c1, -s1, 0, c2 * s1, c2 * c1, -s2n, s2n * s1, s2n * c1, c2};
  auto apply = [&](std::span<const double> p) {
    Point q(3, 0.0);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) q[i] += rot[3 * i + k] * p[k];
    return q;
  };
  const auto moved = s2.placed({0, 0, 0}, rot);
  Rng rng(10);
  PointList pts(3), mpts(3);
  for (int i = 0; i < 200; ++i) {
    const Point p = random_point(s2, rng);
    pts.push_back(p);
    mpts.push_back(apply(p));
  }
  std::vector<TestCell> cells, mcells;
  for (int k = 0; k < 30; ++k) {
    const Point c = random_point(s2, rng);
    const double a = rng.uniform(0.2, 2.0);
    cells.push_back(angular_cap_cell(s2, 0, c, a));
    mcells.push_back(angular_cap_cell(moved, 0, apply(c), a));
  }
  const auto a = empirical_counts(s2, pts, cells);
  const auto b = empirical_counts(moved, mpts, mcells);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    EXPECT_EQ(a.rows[k].count, b.rows[k].count);
    EXPECT_EQ(a.rows[k].fraction, b.rows[k].fraction);
    EXPECT_EQ(a.rows[k].target, b.rows[k].target);
  }
}

TEST(Equidistribution, EquallySpacedCircle) {
  const auto circle = SetDescriptor::circle();
  CellFamily fam;
  fam.count = 50;
  const auto cells = make_test_cells(circle, fam, 5);
  std::vector<PointList> seq;
  for (std::size_t n : {1u, 2u, 3u, 10u, 100u, 1000u}) seq.push_back(equally_spaced_circle(n));
  const auto rep = equidistribution_report(circle, seq, cells);
  EXPECT_LE(rep.rows[0].max_deviation, 1.0);
  for (const auto& row : rep.rows) EXPECT_LE(row.max_deviation, 2.0 / row.n + 1e-12) << row.n;
  EXPECT_TRUE(rep.decreasing);
}

TEST(Equidistribution, PartCells) {
  const auto two = SetDescriptor::union_of({SetDescriptor::circle(), SetDescriptor::circle().placed({3.0, 0.0})});
  const auto cells = part_cells(two);
  ASSERT_EQ(cells.size(), 2u);
  const auto rep = empirical_counts(two, sample(two, 8), cells);
  EXPECT_DOUBLE_EQ(rep.rows[0].fraction, 0.5);
  EXPECT_DOUBLE_EQ(rep.rows[1].fraction, 0.5);
  EXPECT_DOUBLE_EQ(rep.rows[0].target, 0.5);
}

}  // namespace
}  // namespace riesz
