#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace riesz {

using Point = std::vector<double>;

/// Flat, row-major list of points sharing one ambient dimension.
class PointList {
 public:
  PointList() = default;
  explicit PointList(std::size_t dim) : dim_(dim) {}
  PointList(std::size_t dim, std::size_t count) : dim_(dim), data_(dim * count, 0.0) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  Point point(std::size_t i) const {
    auto p = (*this)[i];
    return {p.begin(), p.end()};
  }

  void push_back(std::span<const double> p);
  void append(const PointList& other);

  const std::vector<double>& flat() const { return data_; }
  std::vector<double>& flat() { return data_; }

  friend bool operator==(const PointList&, const PointList&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

namespace vec {
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double dist2(std::span<const double> a, std::span<const double> b);
double dist(std::span<const double> a, std::span<const double> b);
}  // namespace vec

/// Deterministic RNG helpers. Floating-point conversions are done here rather
/// than through <random> distributions so streams are identical across
/// standard libraries.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t index(std::size_t n);  // uniform in [0, n)

 private:
  std::mt19937_64 engine_;
};

enum class SetKind { Circle, Arc, Segment, Ball, Cube, Sphere, Union };

std::string to_string(SetKind kind);
SetKind set_kind_from_string(const std::string& name);

/// Rigid motion x -> translation + rotation * x in R^m. An empty rotation is
/// the identity.
struct Placement {
  Point translation;
  std::vector<double> rotation;  // row-major m x m, orthogonal

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// A compact set from the parametric catalog.
///
/// Primitives live in a local frame R^k (k = 2 for circles and arcs, 1 for
/// segments, d for balls and cubes, d + 1 for spheres) that is embedded in the
/// first k coordinates of R^m and then moved by the placement. Unions carry
/// their parts with placements already resolved to the ambient frame.
class SetDescriptor {
 public:
  static SetDescriptor circle(double radius = 1.0);
  static SetDescriptor arc(double radius, double extent);
  static SetDescriptor segment(double length = 2.0);
  static SetDescriptor ball(int d, double radius = 1.0);
  static SetDescriptor cube(int d, double side = 1.0);
  static SetDescriptor sphere(int d, double radius = 1.0);
  static SetDescriptor union_of(std::vector<SetDescriptor> parts);

  /// Returns a copy embedded in R^m (m >= local dimension).
  SetDescriptor embedded(std::size_t m) const;
  /// Returns a copy moved by x -> center + rotation * x (rotation may be empty).
  SetDescriptor placed(const Point& center, const std::vector<double>& rotation = {}) const;
  /// Returns lambda * A.
  SetDescriptor scaled(double lambda) const;

  SetKind kind() const { return kind_; }
  int d() const { return d_; }
  std::size_t m() const { return m_; }
  double radius() const { return radius_; }
  double extent() const { return extent_; }
  double length() const { return length_; }
  double side() const { return side_; }
  const Placement& placement() const { return placement_; }
  const std::vector<SetDescriptor>& parts() const { return parts_; }
  bool is_union() const { return kind_ == SetKind::Union; }

  /// Number of primitive parts (1 for a primitive).
  std::size_t part_count() const { return is_union() ? parts_.size() : 1; }
  const SetDescriptor& part(std::size_t i) const { return is_union() ? parts_.at(i) : *this; }

  /// Dimension of the local frame of a primitive.
  std::size_t local_dim() const;
  /// Length scale used for relative tolerances.
  double scale() const;
  /// Exact diameter for primitives; an upper bound for unions.
  double diameter_bound() const;

  /// Local <-> ambient maps for primitives. to_local returns all m local
  /// coordinates; the first local_dim() belong to the primitive frame.
  Point to_local(std::span<const double> p) const;
  Point to_ambient(std::span<const double> local) const;
  std::vector<double> rotate_to_ambient(std::span<const double> local_vec) const;
  Point center() const;

  friend bool operator==(const SetDescriptor&, const SetDescriptor&) = default;

 private:
  SetKind kind_ = SetKind::Circle;
  int d_ = 1;
  std::size_t m_ = 2;
  double radius_ = 1.0;
  double extent_ = 0.0;
  double length_ = 0.0;
  double side_ = 0.0;
  Placement placement_;
  std::vector<SetDescriptor> parts_;
};

/// Short human-readable label such as "sphere(d=2, radius=1)".
std::string describe(const SetDescriptor& set);

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);
/// d-dimensional measure of the unit sphere S^d in R^{d+1}.
double unit_sphere_area(int d);

/// Exact H_d(A). Unions sum their parts.
double measure(const SetDescriptor& set);
/// H_k(A) for an arbitrary k: equals measure(set) when k == d, 0 when k > d.
double measure_in_dimension(const SetDescriptor& set, int k);

/// Nearest point of A to p. Ties go to the lowest part index, then to the
/// smallest chart parameter (for circles, spheres and arcs, a point at the
/// center projects to the first local axis).
Point project(const SetDescriptor& set, std::span<const double> p);
/// Same as project() and also reports which part won.
Point project(const SetDescriptor& set, std::span<const double> p, std::size_t& part);

/// Index of the part of a union that p lies on (nearest part).
std::size_t owning_part(const SetDescriptor& set, std::span<const double> p);

/// Distance from p to A.
double distance_to(const SetDescriptor& set, std::span<const double> p);

/// Chart parameters of a point on a primitive: angle for circles and arcs,
/// signed abscissa for segments, (polar angle from the last local axis,
/// azimuth ...) for spheres, local coordinates for balls and cubes.
std::vector<double> chart_params(const SetDescriptor& primitive, std::span<const double> x);

/// Removes the normal component of v at a point x of a primitive, leaving a
/// tangent vector (ambient coordinates). Solid sets keep every in-frame
/// direction.
void tangent_project(const SetDescriptor& primitive, std::span<const double> x, std::span<double> v);

/// Quasi-uniform points of A. Circles start at parameter 0 with equal spacing;
/// S^2 uses the generalized spiral; unions allocate by measure with
/// largest-remainder rounding. Covering radius stays below
/// kCoveringConstant * (measure / n)^{1/d}.
inline constexpr double kCoveringConstant = 3.0;
PointList sample(const SetDescriptor& set, std::size_t n);
/// Number of sample points given to each part of a union.
std::vector<std::size_t> allocate_by_measure(const SetDescriptor& set, std::size_t n);

/// One point distributed according to H_d restricted to A.
Point random_point(const SetDescriptor& set, Rng& rng);

/// H_d(B(x, r) ∩ A). x must lie on A.
double ball_intersection_measure(const SetDescriptor& set, std::span<const double> x, double r);
/// H_d(B(x, r) ∩ P) for a primitive P and any x in R^m.
double primitive_ball_measure(const SetDescriptor& primitive, std::span<const double> x, double r);

/// Volume of the cap {|x| <= R, x_1 >= R cos(angle)} of a d-ball.
double ball_cap_volume(int d, double radius, double angle);
/// H_d of the polar cap of angular radius `angle` on a radius-R sphere S^d.
double sphere_cap_area(int d, double radius, double angle);
/// ∫_0^angle sin^n(t) dt.
double sin_power_integral(int n, double angle);

}  // namespace riesz
