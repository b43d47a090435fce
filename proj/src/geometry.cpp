#include "riesz/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "quadrature.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> identity(std::size_t m) {
  std::vector<double> q(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) q[i * m + i] = 1.0;
  return q;
}

// Radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::array<std::uint64_t, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double halton(std::uint64_t i, std::size_t dim) {
  if (dim >= kPrimes.size()) throw std::invalid_argument("sample: dimension too large for the Halton sampler");
  return radical_inverse(i, kPrimes[dim]);
}

// Inverse standard normal CDF (Acklam's rational approximation refined by one
// Newton step on erfc).
double normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double dd[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                  3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
  } else if (p > 1 - 0.02425) {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * kPi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

// Angle of (x, y) in [0, 2pi).
double angle_of(double x, double y) { return detail::wrap_angle(std::atan2(y, x)); }

// Volume of B(0, rho) ∩ [-h, h]^dim shifted by `center` (the ball is centred at
// `center`, the cube at the origin).
double cube_ball_volume(std::span<const double> center, double rho, double h) {
  const std::size_t dim = center.size();
  if (rho <= 0.0) return 0.0;
  if (dim == 1) return detail::overlap({center[0] - rho, center[0] + rho}, {-h, h});
  bool inside = true;
  for (double c : center) inside = inside && std::abs(c) + rho <= h;
  if (inside) return unit_ball_volume(static_cast<int>(dim)) * std::pow(rho, static_cast<double>(dim));
  const double lo = std::max(-h, center[0] - rho);
  const double hi = std::min(h, center[0] + rho);
  if (!(hi > lo)) return 0.0;
  // t = c0 + rho sin(u) removes the square-root behaviour at the ball's poles.
  const double ulo = std::asin(std::clamp((lo - center[0]) / rho, -1.0, 1.0));
  const double uhi = std::asin(std::clamp((hi - center[0]) / rho, -1.0, 1.0));
  auto rest = center.subspan(1);
  auto slice = [&](double u) {
    const double cu = std::cos(u);
    return rho * cu * cube_ball_volume(rest, rho * cu, h);
  };
  const int panels = dim == 2 ? 64 : 24;
  return detail::gauss_composite(slice, ulo, uhi, panels);
}

double lens_volume(int d, double big_r, double small_r, double a) {
  if (a + small_r <= big_r) return unit_ball_volume(d) * std::pow(small_r, d);
  if (a + big_r <= small_r) return unit_ball_volume(d) * std::pow(big_r, d);
  if (a >= big_r + small_r) return 0.0;
  const double t1 = (a * a + big_r * big_r - small_r * small_r) / (2.0 * a);
  const double t2 = a - t1;
  const double alpha1 = std::acos(std::clamp(t1 / big_r, -1.0, 1.0));
  const double alpha2 = std::acos(std::clamp(t2 / small_r, -1.0, 1.0));
  return ball_cap_volume(d, big_r, alpha1) + ball_cap_volume(d, small_r, alpha2);
}

// Polar half-angle of B(q, rho) ∩ {|z| = radius} seen from the sphere centre,
// with a = |q|. Negative means empty.
double cap_half_angle(double a, double radius, double rho) {
  if (a == 0.0) return rho >= radius ? kPi : -1.0;
  if (std::abs(a - radius) <= 1e-12 * radius) {
    if (rho >= 2.0 * radius) return kPi;
    return 2.0 * std::asin(rho / (2.0 * radius));
  }
  const double c = (a * a + radius * radius - rho * rho) / (2.0 * a * radius);
  if (c > 1.0) return -1.0;
  if (c <= -1.0) return kPi;
  return std::acos(c);
}

}  // namespace

// ---------------------------------------------------------------------------
// PointList, vector helpers, RNG

void PointList::push_back(std::span<const double> p) {
  if (dim_ == 0) dim_ = p.size();
  if (p.size() != dim_) throw std::invalid_argument("PointList: dimension mismatch");
  data_.insert(data_.end(), p.begin(), p.end());
}

void PointList::append(const PointList& other) {
  if (other.empty()) return;
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_) throw std::invalid_argument("PointList: dimension mismatch");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

namespace vec {
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }
double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}
double dist(std::span<const double> a, std::span<const double> b) { return std::sqrt(dist2(a, b)); }
}  // namespace vec

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed + index); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller; one draw per call keeps the stream layout simple.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::size_t Rng::index(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// SetDescriptor

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Circle: return "circle";
    case SetKind::Arc: return "arc";
    case SetKind::Segment: return "segment";
    case SetKind::Ball: return "ball";
    case SetKind::Cube: return "cube";
    case SetKind::Sphere: return "sphere";
    case SetKind::Union: return "union";
  }
  return "?";
}

SetKind set_kind_from_string(const std::string& name) {
  for (auto k : {SetKind::Circle, SetKind::Arc, SetKind::Segment, SetKind::Ball, SetKind::Cube, SetKind::Sphere,
                 SetKind::Union})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown set kind '" + name + "'");
}

SetDescriptor SetDescriptor::circle(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("circle: radius must be positive");
  SetDescriptor s;
  s.kind_ = SetKind::Circle;
  s.d_ = 1;
  s.m_ = 2;
  s.radius_ = radius;
  s.placement_.translation.assign(2, 0.0);
  return s;
}

SetDescriptor SetDescriptor::arc(double radius, double extent) {
  if (!(radius > 0)) throw std::invalid_argument("arc: radius must be positive");
  if (!(extent > 0 && extent <= kTwoPi)) throw std::invalid_argument("arc: extent must lie in (0, 2pi]");
  SetDescriptor s = circle(radius);
  s.kind_ = SetKind::Arc;
  s.extent_ = extent;
  return s;
}

SetDescriptor SetDescriptor::segment(double length) {
  if (!(length > 0)) throw std::invalid_argument("segment: length must be positive");
  SetDescriptor s;
  s.kind_ = SetKind::Segment;
  s.d_ = 1;
  s.m_ = 1;
  s.length_ = length;
  s.radius_ = length / 2;
  s.placement_.translation.assign(1, 0.0);
  return s;
}

SetDescriptor SetDescriptor::ball(int d, double radius) {
  if (d < 1) throw std::invalid_argument("ball: d must be >= 1");
  if (!(radius > 0)) throw std::invalid_argument("ball: radius must be positive");
  SetDescriptor s;
  s.kind_ = SetKind::Ball;
  s.d_ = d;
  s.m_ = static_cast<std::size_t>(d);
  s.radius_ = radius;
  s.placement_.translation.assign(s.m_, 0.0);
  return s;
}

SetDescriptor SetDescriptor::cube(int d, double side) {
  if (d < 1) throw std::invalid_argument("cube: d must be >= 1");
  if (!(side > 0)) throw std::invalid_argument("cube: side must be positive");
  SetDescriptor s;
  s.kind_ = SetKind::Cube;
  s.d_ = d;
  s.m_ = static_cast<std::size_t>(d);
  s.side_ = side;
  s.radius_ = side / 2;
  s.placement_.translation.assign(s.m_, 0.0);
  return s;
}

SetDescriptor SetDescriptor::sphere(int d, double radius) {
  if (d < 1) throw std::invalid_argument("sphere: d must be >= 1");
  if (!(radius > 0)) throw std::invalid_argument("sphere: radius must be positive");
  SetDescriptor s;
  s.kind_ = SetKind::Sphere;
  s.d_ = d;
  s.m_ = static_cast<std::size_t>(d) + 1;
  s.radius_ = radius;
  s.placement_.translation.assign(s.m_, 0.0);
  return s;
}

SetDescriptor SetDescriptor::union_of(std::vector<SetDescriptor> parts) {
  if (parts.empty()) throw std::invalid_argument("union: needs at least one part");
  std::vector<SetDescriptor> flat;
  for (auto& p : parts) {
    if (p.is_union())
      flat.insert(flat.end(), p.parts_.begin(), p.parts_.end());
    else
      flat.push_back(std::move(p));
  }
  const int d = flat.front().d_;
  std::size_t m = 0;
  for (const auto& p : flat) {
    if (p.d_ != d) throw std::invalid_argument("union: parts must share the intrinsic dimension");
    m = std::max(m, p.m_);
  }
  SetDescriptor s;
  s.kind_ = SetKind::Union;
  s.d_ = d;
  s.m_ = m;
  s.placement_.translation.assign(m, 0.0);
  for (auto& p : flat) s.parts_.push_back(p.embedded(m));
  return s;
}

SetDescriptor SetDescriptor::embedded(std::size_t m) const {
  if (m < m_) throw std::invalid_argument("embedded: cannot lower the ambient dimension");
  SetDescriptor s = *this;
  if (is_union()) {
    for (auto& p : s.parts_) p = p.embedded(m);
    s.m_ = m;
    s.placement_.translation.assign(m, 0.0);
    return s;
  }
  const std::size_t old = m_;
  s.m_ = m;
  s.placement_.translation.resize(m, 0.0);
  if (!placement_.rotation.empty()) {
    auto q = identity(m);
    for (std::size_t i = 0; i < std::min(old, m); ++i)
      for (std::size_t j = 0; j < std::min(old, m); ++j) q[i * m + j] = placement_.rotation[i * old + j];
    s.placement_.rotation = std::move(q);
  }
  return s;
}

SetDescriptor SetDescriptor::placed(const Point& center, const std::vector<double>& rotation) const {
  if (center.size() != m_) throw std::invalid_argument("placed: center dimension must equal m");
  if (!rotation.empty() && rotation.size() != m_ * m_) throw std::invalid_argument("placed: rotation must be m x m");
  SetDescriptor s = *this;
  if (is_union()) {
    for (auto& p : s.parts_) p = p.placed(center, rotation);
    return s;
  }
  const auto rot = rotation.empty() ? identity(m_) : rotation;
  const auto old = placement_.rotation.empty() ? identity(m_) : placement_.rotation;
  Point t(m_, 0.0);
  std::vector<double> q(m_ * m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double acc = center[i];
    for (std::size_t k = 0; k < m_; ++k) acc += rot[i * m_ + k] * placement_.translation[k];
    t[i] = acc;
    for (std::size_t j = 0; j < m_; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += rot[i * m_ + k] * old[k * m_ + j];
      q[i * m_ + j] = v;
    }
  }
  s.placement_.translation = std::move(t);
  s.placement_.rotation = rotation.empty() && placement_.rotation.empty() ? std::vector<double>{} : std::move(q);
  return s;
}

SetDescriptor SetDescriptor::scaled(double lambda) const {
  if (!(lambda > 0)) throw std::invalid_argument("scaled: factor must be positive");
  SetDescriptor s = *this;
  s.radius_ *= lambda;
  s.length_ *= lambda;
  s.side_ *= lambda;
  for (auto& t : s.placement_.translation) t *= lambda;
  for (auto& p : s.parts_) p = p.scaled(lambda);
  return s;
}

std::size_t SetDescriptor::local_dim() const {
  switch (kind_) {
    case SetKind::Circle:
    case SetKind::Arc: return 2;
    case SetKind::Segment: return 1;
    case SetKind::Ball:
    case SetKind::Cube: return static_cast<std::size_t>(d_);
    case SetKind::Sphere: return static_cast<std::size_t>(d_) + 1;
    case SetKind::Union: return m_;
  }
  return m_;
}

double SetDescriptor::scale() const {
  if (is_union()) return diameter_bound() / 2;
  return kind_ == SetKind::Cube ? side_ * std::sqrt(static_cast<double>(d_)) / 2 : radius_;
}

Point SetDescriptor::center() const {
  if (!is_union()) return placement_.translation;
  Point c(m_, 0.0);
  for (const auto& p : parts_)
    for (std::size_t i = 0; i < m_; ++i) c[i] += p.placement_.translation[i] / static_cast<double>(parts_.size());
  return c;
}

double SetDescriptor::diameter_bound() const {
  switch (kind_) {
    case SetKind::Circle:
    case SetKind::Ball:
    case SetKind::Sphere: return 2 * radius_;
    case SetKind::Arc: return extent_ >= kPi ? 2 * radius_ : 2 * radius_ * std::sin(extent_ / 2);
    case SetKind::Segment: return length_;
    case SetKind::Cube: return side_ * std::sqrt(static_cast<double>(d_));
    case SetKind::Union: {
      double best = 0.0;
      for (const auto& a : parts_)
        for (const auto& b : parts_)
          best = std::max(best, vec::dist(a.placement_.translation, b.placement_.translation) + a.scale() + b.scale());
      return best;
    }
  }
  return 0.0;
}

Point SetDescriptor::to_local(std::span<const double> p) const {
  Point q(m_, 0.0);
  const auto& t = placement_.translation;
  if (placement_.rotation.empty()) {
    for (std::size_t i = 0; i < m_; ++i) q[i] = p[i] - t[i];
    return q;
  }
  const auto& r = placement_.rotation;
  for (std::size_t j = 0; j < m_; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m_; ++i) acc += r[i * m_ + j] * (p[i] - t[i]);
    q[j] = acc;
  }
  return q;
}

std::vector<double> SetDescriptor::rotate_to_ambient(std::span<const double> local_vec) const {
  std::vector<double> v(m_, 0.0);
  if (placement_.rotation.empty()) {
    for (std::size_t i = 0; i < std::min(m_, local_vec.size()); ++i) v[i] = local_vec[i];
    return v;
  }
  const auto& r = placement_.rotation;
  for (std::size_t i = 0; i < m_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < local_vec.size(); ++j) acc += r[i * m_ + j] * local_vec[j];
    v[i] = acc;
  }
  return v;
}

Point SetDescriptor::to_ambient(std::span<const double> local) const {
  auto v = rotate_to_ambient(local);
  for (std::size_t i = 0; i < m_; ++i) v[i] += placement_.translation[i];
  return v;
}

// ---------------------------------------------------------------------------
// Measures

std::string describe(const SetDescriptor& set) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  switch (set.kind()) {
    case SetKind::Circle: return "circle(radius=" + num(set.radius()) + ")";
    case SetKind::Arc: return "arc(radius=" + num(set.radius()) + ", extent=" + num(set.extent()) + ")";
    case SetKind::Segment: return "segment(length=" + num(set.length()) + ")";
    case SetKind::Ball: return "ball(d=" + std::to_string(set.d()) + ", radius=" + num(set.radius()) + ")";
    case SetKind::Cube: return "cube(d=" + std::to_string(set.d()) + ", side=" + num(set.side()) + ")";
    case SetKind::Sphere: return "sphere(d=" + std::to_string(set.d()) + ", radius=" + num(set.radius()) + ")";
    case SetKind::Union: {
      std::string out = "union(";
      for (std::size_t i = 0; i < set.parts().size(); ++i) out += (i ? ", " : "") + describe(set.parts()[i]);
      return out + ")";
    }
  }
  return "?";
}

double unit_ball_volume(int d) {
  if (d < 0) throw std::invalid_argument("unit_ball_volume: d must be >= 0");
  return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double unit_sphere_area(int d) {
  if (d < 0) throw std::invalid_argument("unit_sphere_area: d must be >= 0");
  return 2.0 * std::pow(kPi, (d + 1) / 2.0) / std::tgamma((d + 1) / 2.0);
}

double sin_power_integral(int n, double angle) {
  if (n == 0) return angle;
  if (n == 1) return 1.0 - std::cos(angle);
  const double s = std::sin(angle);
  return -std::cos(angle) * std::pow(s, n - 1) / n + (n - 1.0) / n * sin_power_integral(n - 2, angle);
}

double ball_cap_volume(int d, double radius, double angle) {
  angle = std::clamp(angle, 0.0, kPi);
  return unit_ball_volume(d - 1) * std::pow(radius, d) * sin_power_integral(d, angle);
}

double sphere_cap_area(int d, double radius, double angle) {
  angle = std::clamp(angle, 0.0, kPi);
  if (angle >= kPi) return unit_sphere_area(d) * std::pow(radius, d);
  if (d == 2) return kTwoPi * radius * radius * (1.0 - std::cos(angle));
  return unit_sphere_area(d - 1) * std::pow(radius, d) * sin_power_integral(d - 1, angle);
}

double measure(const SetDescriptor& set) {
  switch (set.kind()) {
    case SetKind::Circle: return kTwoPi * set.radius();
    case SetKind::Arc: return set.radius() * set.extent();
    case SetKind::Segment: return set.length();
    case SetKind::Ball: return unit_ball_volume(set.d()) * std::pow(set.radius(), set.d());
    case SetKind::Cube: return std::pow(set.side(), set.d());
    case SetKind::Sphere: return unit_sphere_area(set.d()) * std::pow(set.radius(), set.d());
    case SetKind::Union: {
      double total = 0.0;
      for (const auto& p : set.parts()) total += measure(p);
      return total;
    }
  }
  return 0.0;
}

double measure_in_dimension(const SetDescriptor& set, int k) {
  if (k == set.d()) return measure(set);
  if (k > set.d()) return 0.0;
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Projection and charts

namespace {

Point project_primitive(const SetDescriptor& s, std::span<const double> p) {
  Point q = s.to_local(p);
  const std::size_t k = s.local_dim();
  for (std::size_t i = k; i < q.size(); ++i) q[i] = 0.0;
  switch (s.kind()) {
    case SetKind::Circle: {
      const double r = std::hypot(q[0], q[1]);
      if (r == 0.0) {
        q[0] = s.radius();
        q[1] = 0.0;
      } else {
        q[0] *= s.radius() / r;
        q[1] *= s.radius() / r;
      }
      break;
    }
    case SetKind::Arc: {
      const double r = std::hypot(q[0], q[1]);
      const double theta = r == 0.0 ? 0.0 : angle_of(q[0], q[1]);
      double t = theta;
      if (theta > s.extent()) {
        // Outside the arc: nearest endpoint, ties to parameter 0.
        const double to_start = kTwoPi - theta;
        const double to_end = theta - s.extent();
        t = to_end < to_start ? s.extent() : 0.0;
      }
      q[0] = s.radius() * std::cos(t);
      q[1] = s.radius() * std::sin(t);
      if (t == 0.0) q[1] = 0.0;
      break;
    }
    case SetKind::Segment: q[0] = std::clamp(q[0], -s.length() / 2, s.length() / 2); break;
    case SetKind::Sphere: {
      double r2 = 0.0;
      for (std::size_t i = 0; i < k; ++i) r2 += q[i] * q[i];
      const double r = std::sqrt(r2);
      if (r == 0.0) {
        // Smallest chart parameter: angle 0 for S^1, the pole e_last otherwise.
        std::fill(q.begin(), q.end(), 0.0);
        q[s.d() == 1 ? 0 : k - 1] = s.radius();
      } else {
        for (std::size_t i = 0; i < k; ++i) q[i] *= s.radius() / r;
      }
      break;
    }
    case SetKind::Ball: {
      double r2 = 0.0;
      for (std::size_t i = 0; i < k; ++i) r2 += q[i] * q[i];
      const double r = std::sqrt(r2);
      if (r > s.radius())
        for (std::size_t i = 0; i < k; ++i) q[i] *= s.radius() / r;
      break;
    }
    case SetKind::Cube:
      for (std::size_t i = 0; i < k; ++i) q[i] = std::clamp(q[i], -s.side() / 2, s.side() / 2);
      break;
    case SetKind::Union: break;
  }
  return s.to_ambient(q);
}

}  // namespace

Point project(const SetDescriptor& set, std::span<const double> p, std::size_t& part) {
  if (p.size() != set.m()) throw std::invalid_argument("project: point dimension must equal m");
  if (!set.is_union()) {
    part = 0;
    return project_primitive(set, p);
  }
  Point best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.parts().size(); ++i) {
    Point c = project_primitive(set.parts()[i], p);
    const double dd = vec::dist2(c, p);
    if (dd < best_d) {
      best_d = dd;
      best = std::move(c);
      part = i;
    }
  }
  return best;
}

Point project(const SetDescriptor& set, std::span<const double> p) {
  std::size_t part = 0;
  return project(set, p, part);
}

std::size_t owning_part(const SetDescriptor& set, std::span<const double> p) {
  std::size_t part = 0;
  project(set, p, part);
  return part;
}

double distance_to(const SetDescriptor& set, std::span<const double> p) { return vec::dist(project(set, p), p); }

std::vector<double> chart_params(const SetDescriptor& s, std::span<const double> x) {
  if (s.is_union()) throw std::invalid_argument("chart_params: needs a primitive");
  const Point q = s.to_local(x);
  switch (s.kind()) {
    case SetKind::Circle: return {angle_of(q[0], q[1])};
    case SetKind::Arc: {
      double t = angle_of(q[0], q[1]);
      if (t > s.extent()) t = (t - s.extent() < kTwoPi - t) ? s.extent() : 0.0;
      return {t};
    }
    case SetKind::Segment: return {q[0]};
    case SetKind::Sphere: {
      const std::size_t k = s.local_dim();
      if (s.d() == 1) return {angle_of(q[0], q[1])};
      std::vector<double> params;
      // Peel angles from the last local axis down to the azimuth in (e0, e1).
      for (std::size_t top = k - 1; top >= 2; --top) {
        double r2 = 0.0;
        for (std::size_t i = 0; i <= top; ++i) r2 += q[i] * q[i];
        const double r = std::sqrt(r2);
        params.push_back(r == 0.0 ? 0.0 : std::acos(std::clamp(q[top] / r, -1.0, 1.0)));
      }
      params.push_back(angle_of(q[0], q[1]));
      return params;
    }
    case SetKind::Ball:
    case SetKind::Cube: return {q.begin(), q.begin() + static_cast<std::ptrdiff_t>(s.local_dim())};
    case SetKind::Union: break;
  }
  return {};
}

void tangent_project(const SetDescriptor& s, std::span<const double> x, std::span<double> v) {
  if (s.is_union()) {
    tangent_project(s.part(owning_part(s, x)), x, v);
    return;
  }
  const std::size_t m = s.m();
  const std::size_t k = s.local_dim();
  std::vector<double> w(m, 0.0);
  const auto& r = s.placement().rotation;
  if (r.empty()) {
    std::copy(v.begin(), v.end(), w.begin());
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += r[i * m + j] * v[i];
      w[j] = acc;
    }
  }
  for (std::size_t i = k; i < m; ++i) w[i] = 0.0;
  if (s.kind() == SetKind::Circle || s.kind() == SetKind::Arc || s.kind() == SetKind::Sphere) {
    const Point q = s.to_local(x);
    double qq = 0.0, wq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      qq += q[i] * q[i];
      wq += w[i] * q[i];
    }
    if (qq > 0.0)
      for (std::size_t i = 0; i < k; ++i) w[i] -= wq / qq * q[i];
  }
  const auto out = s.rotate_to_ambient(std::span<const double>(w.data(), k));
  std::copy(out.begin(), out.end(), v.begin());
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::size_t> allocate_by_measure(const SetDescriptor& set, std::size_t n) {
  const std::size_t parts = set.part_count();
  std::vector<std::size_t> alloc(parts, 0);
  if (parts == 1) {
    alloc[0] = n;
    return alloc;
  }
  const double total = measure(set);
  std::vector<double> frac(parts);
  std::size_t used = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const double quota = static_cast<double>(n) * measure(set.part(i)) / total;
    alloc[i] = static_cast<std::size_t>(std::floor(quota));
    frac[i] = quota - static_cast<double>(alloc[i]);
    used += alloc[i];
  }
  std::vector<std::size_t> order(parts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++alloc[order[i % parts]];
  return alloc;
}

namespace {

PointList sample_primitive(const SetDescriptor& s, std::size_t n) {
  PointList out(s.m());
  const std::size_t k = s.local_dim();
  std::vector<double> q(k, 0.0);
  auto emit = [&] { out.push_back(s.to_ambient(q)); };
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  switch (s.kind()) {
    case SetKind::Circle:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        q = {s.radius() * std::cos(t), s.radius() * std::sin(t)};
        emit();
      }
      break;
    case SetKind::Arc:
      for (std::size_t i = 0; i < n; ++i) {
        double t;
        if (s.extent() >= kTwoPi)
          t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        else
          t = n == 1 ? s.extent() / 2 : s.extent() * static_cast<double>(i) / static_cast<double>(n - 1);
        q = {s.radius() * std::cos(t), s.radius() * std::sin(t)};
        emit();
      }
      break;
    case SetKind::Segment:
      for (std::size_t i = 0; i < n; ++i) {
        q[0] = n == 1 ? 0.0 : -s.length() / 2 + s.length() * static_cast<double>(i) / static_cast<double>(n - 1);
        emit();
      }
      break;
    case SetKind::Sphere:
      if (s.d() == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
          q = {s.radius() * std::cos(t), s.radius() * std::sin(t)};
          emit();
        }
      } else if (s.d() == 2) {
        // Generalized spiral: equal height steps, longitude advanced by
        // 3.6 / sqrt(n (1 - h^2)).
        double phi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double h = n == 1 ? 1.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
          if (i == 0 || i + 1 == n)
            phi = 0.0;
          else
            phi = detail::wrap_angle(phi + 3.6 / std::sqrt(static_cast<double>(n) * (1.0 - h * h)));
          const double sr = std::sqrt(std::max(0.0, 1.0 - h * h));
          q = {s.radius() * sr * std::cos(phi), s.radius() * sr * std::sin(phi), s.radius() * h};
          emit();
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          double r2 = 0.0;
          for (std::size_t j = 0; j < k; ++j) {
            q[j] = normal_quantile(halton(i + 1, j));
            r2 += q[j] * q[j];
          }
          const double r = std::sqrt(r2);
          for (auto& c : q) c *= s.radius() / r;
          emit();
        }
      }
      break;
    case SetKind::Ball:
      if (s.d() == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          q[0] = n == 1 ? 0.0 : -s.radius() + 2 * s.radius() * static_cast<double>(i) / static_cast<double>(n - 1);
          emit();
        }
      } else {
        // A share of the points goes to the bounding sphere, at roughly the
        // interior spacing: potentials of s >= d - 2 attain their minimum there.
        const double d = static_cast<double>(s.d());
        const double h = std::pow(unit_ball_volume(s.d()) / static_cast<double>(n), 1.0 / d);
        const auto nb = std::min<std::size_t>(
            n / 2, static_cast<std::size_t>(std::llround(unit_sphere_area(s.d() - 1) / std::pow(h, d - 1.0))));
        const std::size_t ni = n - nb;
        if (nb > 0) {
          const PointList rim = sample_primitive(SetDescriptor::sphere(s.d() - 1, s.radius()), nb);
          for (std::size_t i = 0; i < rim.size(); ++i) {
            q.assign(rim[i].begin(), rim[i].end());
            emit();
          }
        }
        if (s.d() == 2) {
          // Sunflower: equal-area rings, golden-angle rotation.
          for (std::size_t i = 0; i < ni; ++i) {
            const double r = s.radius() * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(ni));
            const double t = golden_angle * static_cast<double>(i);
            q = {r * std::cos(t), r * std::sin(t)};
            emit();
          }
          break;
        }
        for (std::uint64_t i = 1; out.size() < n; ++i) {
          double r2 = 0.0;
          for (std::size_t j = 0; j < k; ++j) {
            q[j] = s.radius() * (2.0 * halton(i, j) - 1.0);
            r2 += q[j] * q[j];
          }
          if (r2 <= s.radius() * s.radius()) emit();
        }
      }
      break;
    case SetKind::Cube:
      if (s.d() == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          q[0] = n == 1 ? 0.0 : -s.side() / 2 + s.side() * static_cast<double>(i) / static_cast<double>(n - 1);
          emit();
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < k; ++j) q[j] = s.side() * (halton(i + 1, j) - 0.5);
          emit();
        }
      }
      break;
    case SetKind::Union: break;
  }
  return out;
}

}  // namespace

PointList sample(const SetDescriptor& set, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  if (!set.is_union()) return sample_primitive(set, n);
  const auto alloc = allocate_by_measure(set, n);
  PointList out(set.m());
  for (std::size_t i = 0; i < alloc.size(); ++i)
    if (alloc[i] > 0) out.append(sample_primitive(set.part(i), alloc[i]));
  return out;
}

Point random_point(const SetDescriptor& set, Rng& rng) {
  if (set.is_union()) {
    const double total = measure(set);
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < set.parts().size(); ++i) {
      u -= measure(set.part(i));
      if (u < 0.0 || i + 1 == set.parts().size()) return random_point(set.part(i), rng);
    }
  }
  const std::size_t k = set.local_dim();
  std::vector<double> q(k, 0.0);
  switch (set.kind()) {
    case SetKind::Circle: {
      const double t = kTwoPi * rng.uniform();
      q = {set.radius() * std::cos(t), set.radius() * std::sin(t)};
      break;
    }
    case SetKind::Arc: {
      const double t = set.extent() * rng.uniform();
      q = {set.radius() * std::cos(t), set.radius() * std::sin(t)};
      break;
    }
    case SetKind::Segment: q[0] = set.length() * (rng.uniform() - 0.5); break;
    case SetKind::Sphere:
    case SetKind::Ball: {
      double r2 = 0.0;
      for (auto& c : q) {
        c = rng.normal();
        r2 += c * c;
      }
      double r = set.radius() / std::sqrt(r2);
      if (set.kind() == SetKind::Ball) r *= std::pow(rng.uniform(), 1.0 / set.d());
      for (auto& c : q) c *= r;
      break;
    }
    case SetKind::Cube:
      for (auto& c : q) c = set.side() * (rng.uniform() - 0.5);
      break;
    case SetKind::Union: break;
  }
  return set.to_ambient(q);
}

// ---------------------------------------------------------------------------
// Ball intersections

double primitive_ball_measure(const SetDescriptor& s, std::span<const double> x, double r) {
  if (s.is_union()) throw std::invalid_argument("primitive_ball_measure: needs a primitive");
  const Point q = s.to_local(x);
  const std::size_t k = s.local_dim();
  double h2 = 0.0;
  for (std::size_t i = k; i < q.size(); ++i) h2 += q[i] * q[i];
  const double rho2 = r * r - h2;
  if (rho2 < 0.0) return 0.0;
  const double rho = std::sqrt(rho2);
  double a2 = 0.0;
  for (std::size_t i = 0; i < k; ++i) a2 += q[i] * q[i];
  const double a = std::sqrt(a2);
  switch (s.kind()) {
    case SetKind::Circle: {
      const double half = cap_half_angle(a, s.radius(), rho);
      if (half < 0.0) return 0.0;
      return half >= kPi ? kTwoPi * s.radius() : 2.0 * s.radius() * half;
    }
    case SetKind::Arc: {
      const double half = cap_half_angle(a, s.radius(), rho);
      if (half < 0.0) return 0.0;
      const double center = a == 0.0 ? 0.0 : angle_of(q[0], q[1]);
      double len = 0.0;
      for (const auto& w : detail::circular_window(center, half)) len += detail::overlap(w, {0.0, s.extent()});
      return s.radius() * len;
    }
    case SetKind::Segment: return detail::overlap({q[0] - rho, q[0] + rho}, {-s.length() / 2, s.length() / 2});
    case SetKind::Sphere: {
      const double half = cap_half_angle(a, s.radius(), rho);
      if (half < 0.0) return 0.0;
      if (s.d() == 1) return half >= kPi ? kTwoPi * s.radius() : 2.0 * s.radius() * half;
      if (s.d() == 2 && std::abs(a - s.radius()) <= 1e-12 * s.radius() && rho <= 2.0 * s.radius())
        return kPi * rho * rho;
      return sphere_cap_area(s.d(), s.radius(), half);
    }
    case SetKind::Ball: return lens_volume(s.d(), s.radius(), rho, a);
    case SetKind::Cube: return cube_ball_volume(std::span<const double>(q.data(), k), rho, s.side() / 2);
    case SetKind::Union: break;
  }
  return 0.0;
}

double ball_intersection_measure(const SetDescriptor& set, std::span<const double> x, double r) {
  if (!(r > 0)) throw std::invalid_argument("ball_intersection_measure: r must be positive");
  if (x.size() != set.m()) throw std::invalid_argument("ball_intersection_measure: point dimension must equal m");
  const double tol = 1e-9 * std::max(1.0, set.scale() + vec::norm(set.center()));
  if (distance_to(set, x) > tol) throw std::domain_error("ball_intersection_measure: x is not on the set");
  double total = 0.0;
  for (std::size_t i = 0; i < set.part_count(); ++i) total += primitive_ball_measure(set.part(i), x, r);
  return total;
}

}  // namespace riesz
