#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "riesz/geometry.hpp"

namespace riesz {

/// A real number or +infinity. Kernel sums are genuinely unbounded at the
/// configuration points, so +inf is a value in its own right.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v), infinite_(v == std::numeric_limits<double>::infinity()) {}
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  /// Finite value; throws for +inf.
  double value() const;
  /// As a double, mapping the infinite value to IEEE +inf.
  constexpr double to_double() const { return value_; }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

std::string to_string(ExtendedReal v);

/// A multiset of N points of a catalog set. Duplicates are allowed.
class Configuration {
 public:
  /// Validates that every point lies on `home` within 1e-12 (relative to the
  /// set's scale).
  Configuration() = default;
  Configuration(std::shared_ptr<const SetDescriptor> home, PointList points);
  /// Points drawn from a finite candidate grid; no home set.
  static Configuration on_grid(PointList points);

  std::size_t size() const { return points_.size(); }
  const PointList& points() const { return points_; }
  const SetDescriptor* home() const { return home_.get(); }
  const std::shared_ptr<const SetDescriptor>& home_ptr() const { return home_; }

  /// ω ⊎ {x}.
  Configuration with_point(std::span<const double> x) const;

 private:
  std::shared_ptr<const SetDescriptor> home_;
  PointList points_;
};

/// Projection tolerance used to validate configurations.
double on_set_tolerance(const SetDescriptor& set);

/// sum_i |y - x_i|^{-s}; +inf when y coincides with a configuration point.
ExtendedReal potential(std::span<const double> y, const PointList& points, double s);
inline ExtendedReal potential(std::span<const double> y, const Configuration& omega, double s) {
  return potential(y, omega.points(), s);
}

/// Riesz s-energy over ordered pairs (each unordered pair counts twice).
/// Throws for fewer than two points.
ExtendedReal energy(const PointList& points, double s);
inline ExtendedReal energy(const Configuration& x, double s) { return energy(x.points(), s); }

struct PotentialValue {
  ExtendedReal value;
  Point witness;
  std::size_t part = 0;
  /// False when a local refinement hit its evaluation budget.
  bool converged = true;
  /// Grid minimum minus refined minimum (>= 0).
  double refine_gain = 0.0;
  std::size_t grid_size = 0;
};

struct MinPotentialOptions {
  /// Grid size; 0 selects max(1024, 64 N).
  std::size_t grid_n = 0;
  /// Number of grid basins refined.
  std::size_t k_best = 8;
  /// Step tolerance of the refinement, in chart units (angles) or relative to
  /// the set scale.
  double tolerance = 1e-10;
  int max_evaluations = 4000;
};

std::size_t default_grid_size(std::size_t n_points);

/// M^s(ω; A) = min over y in A of the potential of ω, with its witness.
PotentialValue min_potential(const SetDescriptor& set, const Configuration& omega, double s,
                             const MinPotentialOptions& opts = {});
/// Same with a caller-supplied evaluation grid on `set`.
PotentialValue min_potential(const SetDescriptor& set, const PointList& points, double s, const PointList& grid,
                             const MinPotentialOptions& opts = {});

/// Refined local minima of the potential started from up to `count` grid
/// basins, sorted by value (ties by part, then chart parameters).
std::vector<PotentialValue> local_minima(const SetDescriptor& set, const PointList& points, double s,
                                         const PointList& grid, std::size_t count, double tolerance = 1e-10,
                                         int max_evaluations = 4000);

/// Orders witnesses by value, then part index, then chart parameters.
bool witness_less(const SetDescriptor& set, const PotentialValue& a, const PotentialValue& b);

}  // namespace riesz
