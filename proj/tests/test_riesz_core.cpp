#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "riesz/kernels.hpp"
#include "riesz/riesz_core.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SetDescriptor> share(SetDescriptor s) { return std::make_shared<const SetDescriptor>(std::move(s)); }

PointList circle_points(std::initializer_list<double> angles) {
  PointList p(2);
  for (double a : angles) p.push_back(Point{std::cos(a), std::sin(a)});
  return p;
}

TEST(ExtendedReal, OrderingAndArithmetic) {
  const auto inf = ExtendedReal::infinity();
  EXPECT_FALSE(inf.is_finite());
  EXPECT_TRUE(ExtendedReal(3.0) < inf);
  EXPECT_TRUE(inf == inf);
  EXPECT_FALSE(ExtendedReal(1e308) == inf);
  EXPECT_EQ(ExtendedReal(1.0) + ExtendedReal(2.0), ExtendedReal(3.0));
  EXPECT_EQ(ExtendedReal(1.0) + inf, inf);
  EXPECT_THROW(inf.value(), std::domain_error);
  EXPECT_EQ(to_string(inf), "inf");
  EXPECT_EQ(to_string(ExtendedReal(0.1)), "0.10000000000000001");
}

TEST(Potential, Examples) {
  const auto pair = circle_points({0.0, kPi});
  // Exact points avoid rounding in cos(pi).
  PointList antipodal(2);
  antipodal.push_back(Point{1, 0});
  antipodal.push_back(Point{-1, 0});
  EXPECT_DOUBLE_EQ(potential(Point{0, 1}, antipodal, 2.0).value(), 1.0);
  EXPECT_NEAR(potential(Point{0, 1}, pair, 2.0).value(), 1.0, 1e-15);
  EXPECT_FALSE(potential(Point{1, 0}, antipodal, 2.0).is_finite());
  PointList one(2);
  one.push_back(Point{-1, 0});
  EXPECT_DOUBLE_EQ(potential(Point{1, 0}, one, 1.0).value(), 0.5);
}

TEST(Energy, Examples) {
  PointList two(1);
  two.push_back(Point{0.0});
  two.push_back(Point{1.0});
  EXPECT_DOUBLE_EQ(energy(two, 3.0).value(), 2.0);
  const auto tri = circle_points({0.0, 2 * kPi / 3, 4 * kPi / 3});
  EXPECT_NEAR(energy(tri, 2.0).value(), 2.0, 1e-14);
  PointList sq(2);
  for (const auto& p : {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}}) sq.push_back(p);
  EXPECT_NEAR(energy(sq, 1.0).value(), 8 / std::sqrt(2.0) + 2.0, 1e-14);
  EXPECT_NEAR(energy(sq, 1.0).value(), 7.6568542, 1e-7);
  PointList dup(2);
  dup.push_back(Point{1, 0});
  dup.push_back(Point{1, 0});
  EXPECT_FALSE(energy(dup, 1.0).is_finite());
  PointList single(2);
  single.push_back(Point{1, 0});
  EXPECT_THROW(energy(single, 1.0), std::invalid_argument);
}

TEST(Configuration, ValidatesPoints) {
  const auto circle = share(SetDescriptor::circle());
  EXPECT_NO_THROW(Configuration(circle, circle_points({0.3, 1.0})));
  PointList off(2);
  off.push_back(Point{0.5, 0});
  EXPECT_THROW(Configuration(circle, off), std::domain_error);
  EXPECT_THROW(Configuration(circle, PointList(2)), std::invalid_argument);
  const Configuration c(circle, circle_points({0.0}));
  EXPECT_EQ(c.with_point(Point{1, 0}).size(), 2u);
}

TEST(MinPotential, Examples) {
  const auto circle = share(SetDescriptor::circle());
  const Configuration four(circle, sample(*circle, 4));
  const auto mp = min_potential(*circle, four, 2.0);
  EXPECT_NEAR(mp.value.value(), 4.0, 1e-12);
  const double angle = std::atan2(mp.witness[1], mp.witness[0]);
  EXPECT_NEAR(std::fmod(angle + 2 * kPi, kPi / 2), kPi / 4, 1e-5);
  EXPECT_NEAR(angle, kPi / 4, 1e-5);  // smallest chart parameter wins the tie

  const Configuration one(circle, circle_points({0.0}));
  const auto m1 = min_potential(*circle, one, 2.0);
  EXPECT_NEAR(m1.value.value(), 0.25, 1e-14);
  EXPECT_NEAR(m1.witness[0], -1.0, 1e-9);

  const auto ball = share(SetDescriptor::ball(3));
  PointList centre(3);
  for (int i = 0; i < 5; ++i) centre.push_back(Point{0, 0, 0});
  const auto mb = min_potential(*ball, Configuration(ball, centre), 1.0);
  EXPECT_NEAR(mb.value.value(), 5.0, 1e-9);
  EXPECT_NEAR(vec::norm(mb.witness), 1.0, 1e-9);
}

TEST(MinPotential, GridSoundness) {
  Rng rng(3);
  for (const auto& set : {SetDescriptor::circle(), SetDescriptor::sphere(2), SetDescriptor::ball(2),
                          SetDescriptor::segment(2.0), SetDescriptor::arc(1.0, 2.5)}) {
    const auto home = share(set);
    PointList pts(set.m());
    for (int i = 0; i < 6; ++i) pts.push_back(random_point(set, rng));
    const Configuration omega(home, pts);
    const PointList grid = sample(set, default_grid_size(pts.size()));
    std::vector<double> f(grid.size());
    kernels::potential_field(pts, grid, 1.0, f);
    const double grid_min = *std::min_element(f.begin(), f.end());
    const auto mp = min_potential(set, pts, 1.0, grid);
    EXPECT_LE(mp.value.value(), grid_min);
    EXPECT_GE(mp.refine_gain, 0.0);
    EXPECT_NEAR(potential(mp.witness, pts, 1.0).value(), mp.value.value(), 1e-12 * mp.value.value());
    EXPECT_LE(distance_to(set, mp.witness), 1e-12);
  }
}

TEST(Invariants, PermutationAndAdditivity) {
  Rng rng(5);
  const auto s2 = SetDescriptor::sphere(2);
  for (int trial = 0; trial < 1000; ++trial) {
    PointList pts(3);
    const int n = 1 + static_cast<int>(rng.index(6));
    for (int i = 0; i < n; ++i) pts.push_back(random_point(s2, rng));
    const Point y = random_point(s2, rng);
    const Point x = random_point(s2, rng);
    const double s = rng.uniform(0.2, 3.0);
    PointList plus = pts;
    plus.push_back(x);
    const double lhs = potential(y, plus, s).value();
    const double rhs = potential(y, pts, s).value() + std::pow(vec::dist(y, x), -s);
    ASSERT_NEAR(lhs, rhs, 4e-16 * lhs * (n + 1)) << trial;

    PointList rev(3);
    for (int i = n - 1; i >= 0; --i) rev.push_back(pts[static_cast<std::size_t>(i)]);
    ASSERT_NEAR(potential(y, rev, s).value(), potential(y, pts, s).value(), 4e-16 * n * potential(y, pts, s).value());
    if (n >= 2) ASSERT_NEAR(energy(rev, s).value(), energy(pts, s).value(), 1e-14 * energy(pts, s).value());
  }
}

TEST(Invariants, ScalingCovariance) {
  Rng rng(8);
  for (const auto& set : {SetDescriptor::circle(), SetDescriptor::sphere(2), SetDescriptor::ball(3)}) {
    for (double lambda : {0.5, 2.0, 3.7}) {
      const auto scaled = set.scaled(lambda);
      PointList pts(set.m()), spts(set.m());
      for (int i = 0; i < 5; ++i) {
        Point p = random_point(set, rng);
        pts.push_back(p);
        for (auto& c : p) c *= lambda;
        spts.push_back(p);
      }
      const double s = 1.3;
      Point y = random_point(set, rng);
      Point sy = y;
      for (auto& c : sy) c *= lambda;
      EXPECT_NEAR(potential(sy, spts, s).value(), std::pow(lambda, -s) * potential(y, pts, s).value(),
                  1e-12 * potential(sy, spts, s).value());
      EXPECT_NEAR(energy(spts, s).value(), std::pow(lambda, -s) * energy(pts, s).value(),
                  1e-12 * energy(spts, s).value());
      const auto m = min_potential(set, pts, s, sample(set, 1024));
      const auto sm = min_potential(scaled, spts, s, sample(scaled, 1024));
      EXPECT_NEAR(sm.value.value(), std::pow(lambda, -s) * m.value.value(), 1e-9 * sm.value.value());
      for (std::size_t k = 0; k < y.size(); ++k) EXPECT_NEAR(sm.witness[k], lambda * m.witness[k], 1e-4 * lambda);
    }
  }
}

TEST(Invariants, AddingPointRaisesMinimum) {
  Rng rng(9);
  const auto circle = share(SetDescriptor::circle());
  for (int t = 0; t < 20; ++t) {
    PointList pts(2);
    for (int i = 0; i < 5; ++i) pts.push_back(random_point(*circle, rng));
    const Configuration omega(circle, pts);
    const auto more = omega.with_point(random_point(*circle, rng));
    const MinPotentialOptions opts{2048};
    EXPECT_GE(min_potential(*circle, more, 1.0, opts).value.value(),
              min_potential(*circle, omega, 1.0, opts).value.value() - 1e-12);
  }
}

TEST(Invariants, WitnessIsGlobalOnCircle) {
  // Brute force oracle on a very fine mesh.
  Rng rng(12);
  const auto circle = SetDescriptor::circle();
  for (int t = 0; t < 10; ++t) {
    PointList pts(2);
    for (int i = 0; i < 7; ++i) pts.push_back(random_point(circle, rng));
    const auto mp = min_potential(circle, pts, 2.0, sample(circle, default_grid_size(7)));
    double brute = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200000; ++k) {
      const double a = 2 * kPi * k / 200000;
      brute = std::min(brute, potential(Point{std::cos(a), std::sin(a)}, pts, 2.0).to_double());
    }
    EXPECT_LE(mp.value.value(), brute + 1e-12);
    EXPECT_GE(mp.value.value(), brute - 1e-6 * brute);
  }
}

}  // namespace
}  // namespace riesz
