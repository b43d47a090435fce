#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riesz/cells.hpp"
#include "riesz/geometry.hpp"

namespace riesz {

/// A whole catalog set, or one closed test cell of it. Integrals and
/// densities are taken with respect to H_d restricted to the region.
struct Region {
  SetDescriptor set;
  std::optional<TestCell> cell;

  static Region whole(SetDescriptor s) { return {std::move(s), std::nullopt}; }
  static Region of(const TestCell& c) { return {c.part, c}; }

  int d() const { return set.d(); }
  double measure() const;
  bool contains(std::span<const double> x) const;
  /// H_d(B(x, r) ∩ region).
  double ball_measure(std::span<const double> x, double r) const;
  /// About n quasi-uniform points of the region (a cell always includes its
  /// center).
  PointList samples(std::size_t n) const;
};

struct AlphaEstimate {
  double epsilon = 0.0;
  double value = 0.0;
  std::size_t x_grid = 0;
  std::size_t r_grid = 0;
  Point arg_x;
  double arg_r = 0.0;
};

/// Largest sampled H_d(B(x, r) ∩ A) / (beta_d r^d) over x in the region and
/// r = epsilon 2^{-k/8}, k < r_samples. With exclusion > 0 on a union, x only
/// ranges over points at distance >= exclusion from every other part.
AlphaEstimate alpha(const Region& region, double epsilon, std::size_t x_samples = 64, std::size_t r_samples = 64,
                    double exclusion = 0.0);
inline AlphaEstimate alpha(const SetDescriptor& set, double epsilon, std::size_t x_samples = 64,
                           std::size_t r_samples = 64, double exclusion = 0.0) {
  return alpha(Region::whole(set), epsilon, x_samples, r_samples, exclusion);
}

struct AlphaLimitCheck {
  std::vector<double> values;
  double limsup_estimate = 0.0;
  bool passes = false;
};

/// alpha along a strictly decreasing schedule (length >= 3); passes when the
/// final value is at most 1 + tol.
AlphaLimitCheck alpha_limit_check(const SetDescriptor& set, const std::vector<double>& schedule,
                                  double exclusion = 0.0, double tol = 0.02);

struct IntegralResult {
  double value = 0.0;
  bool converged = false;
  int panels = 0;
};

/// ∫ over region minus B(y, R) of |x - y|^{-d}. Supports circles, arcs and
/// 2-spheres, whole or as cap cells. Panels double until two successive
/// values agree to 1e-6 relative.
IntegralResult riesz_integral(const Region& region, std::span<const double> y, double big_r);

struct NearFieldCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double alpha = 0.0;
  bool holds = false;
  bool converged = false;
};

/// lhs = riesz_integral(D, y, R); rhs = r^{-d} H_d(D) + beta_d alpha_d(D; r) d ln(r/R).
/// Throws std::invalid_argument unless 0 < R <= r.
NearFieldCheck near_field_bound_check(const Region& region, std::span<const double> y, double big_r, double r);

struct NearFieldSuite {
  std::size_t instances = 0;
  std::size_t holding = 0;
  std::size_t converged = 0;
  double worst_slack = 0.0;  // min of rhs - lhs
};

/// Random instances over circles, arcs, the 2-sphere and spherical caps.
NearFieldSuite near_field_suite(std::size_t samples, std::uint64_t seed);

struct CountRow {
  std::size_t cell = 0;
  std::size_t count = 0;
  double fraction = 0.0;
  double target = 0.0;
  double deviation = 0.0;
};

struct CountReport {
  std::vector<CountRow> rows;
  double max_deviation = 0.0;
};

/// #(ω ∩ K) / N against H_d(K) / H_d(A) for each closed cell K; repeated
/// points count once per copy.
CountReport empirical_counts(const SetDescriptor& set, const PointList& points, const std::vector<TestCell>& cells);

/// One cell per part of the set covering that whole part.
std::vector<TestCell> part_cells(const SetDescriptor& set);

struct EquidistributionRow {
  std::size_t n = 0;
  double max_deviation = 0.0;
};

struct EquidistributionReport {
  std::vector<EquidistributionRow> rows;
  /// Last maximum deviation below the first.
  bool decreasing = false;
};

EquidistributionReport equidistribution_report(const SetDescriptor& set, const std::vector<PointList>& configs,
                                               const std::vector<TestCell>& cells);

}  // namespace riesz
