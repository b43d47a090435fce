#include "riesz/measure_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using detail::Interval;

bool is_curve(const SetDescriptor& p) {
  return p.kind() == SetKind::Circle || p.kind() == SetKind::Arc || (p.kind() == SetKind::Sphere && p.d() == 1);
}
bool is_sphere2(const SetDescriptor& p) { return p.kind() == SetKind::Sphere && p.d() == 2; }

double chord_to_angle(double chord, double radius) {
  return chord >= 2.0 * radius ? kPi : 2.0 * std::asin(chord / (2.0 * radius));
}

double curve_angle(const SetDescriptor& p, std::span<const double> x) { return chart_params(p, x)[0]; }

// Angles of a curve region, as disjoint intervals of [0, 2pi).
std::vector<Interval> curve_domain(const Region& g) {
  const SetDescriptor& p = g.set;
  std::vector<Interval> base = {{0.0, p.kind() == SetKind::Arc ? p.extent() : kTwoPi}};
  if (!g.cell) return base;
  const TestCell& c = *g.cell;
  switch (c.shape) {
    case TestCell::Shape::Cap:
      return detail::intersect(base, detail::circular_window(curve_angle(p, c.center),
                                                             chord_to_angle(c.chord_radius, p.radius())));
    case TestCell::Shape::ParamBox:
      return detail::intersect(base, detail::circular_window(0.5 * (c.lo[0] + c.hi[0]), 0.5 * (c.hi[0] - c.lo[0])));
    default: break;
  }
  throw std::invalid_argument("region: unsupported cell on a curve");
}

struct SphereFrame {
  double radius = 1.0;
  Point center;
};

SphereFrame frame(const SetDescriptor& p) { return {p.radius(), p.center()}; }

// Angle between x and y seen from the sphere center.
double central_angle(const SphereFrame& f, std::span<const double> x, std::span<const double> y) {
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t k = 0; k < f.center.size(); ++k) {
    const double a = x[k] - f.center[k], b = y[k] - f.center[k];
    dot += a * b;
    nx += a * a;
    ny += b * b;
  }
  return std::acos(std::clamp(dot / std::sqrt(nx * ny), -1.0, 1.0));
}

// Azimuthal length of the circle at angle t around a point that lies at angle
// beta from the center of a cap of angular radius a.
double azimuth_inside(double t, double beta, double a) {
  if (a >= kPi) return kTwoPi;
  if (t <= 0.0) return beta <= a ? kTwoPi : 0.0;
  if (beta <= 0.0) return t <= a ? kTwoPi : 0.0;
  if (t + beta <= a) return kTwoPi;
  if (t >= a + beta || beta >= a + t) return 0.0;
  const double q = (std::cos(a) - std::cos(t) * std::cos(beta)) / (std::sin(t) * std::sin(beta));
  if (q <= -1.0) return kTwoPi;
  if (q >= 1.0) return 0.0;
  return 2.0 * std::acos(q);
}

// Area of the intersection of two caps of angular radii a and b whose centers
// are beta apart, on a unit sphere.
double cap_cap_area(double a, double b, double beta) {
  const double cap_a = kTwoPi * (1.0 - std::cos(a));
  const double cap_b = kTwoPi * (1.0 - std::cos(b));
  if (a >= kPi) return cap_b;
  if (b >= kPi) return cap_a;
  if (beta >= a + b) return 0.0;
  if (beta + b <= a) return cap_b;
  if (beta + a <= b) return cap_a;
  if (a + b + beta >= kTwoPi) return cap_a + cap_b - 4.0 * kPi;  // complements are disjoint
  auto acos_c = [](double v) { return std::acos(std::clamp(v, -1.0, 1.0)); };
  const double sb = std::sin(beta);
  const double g = acos_c((std::cos(beta) - std::cos(a) * std::cos(b)) / (std::sin(a) * std::sin(b)));
  const double ta = acos_c((std::cos(b) - std::cos(beta) * std::cos(a)) / (sb * std::sin(a)));
  const double tb = acos_c((std::cos(a) - std::cos(beta) * std::cos(b)) / (sb * std::sin(b)));
  return 2.0 * (kPi - g) - 2.0 * ta * std::cos(a) - 2.0 * tb * std::cos(b);
}

double cell_cap_angle(const TestCell& c) {
  if (c.shape != TestCell::Shape::Cap) throw std::invalid_argument("region: only cap cells are supported on spheres");
  return chord_to_angle(c.chord_radius, c.part.radius());
}

template <class F>
IntegralResult converge(F&& integrate) {
  IntegralResult r;
  double prev = integrate(4);
  for (int panels = 8; panels <= (1 << 15); panels *= 2) {
    const double v = integrate(panels);
    r.value = v;
    r.panels = panels;
    if (std::abs(v - prev) <= 1e-6 * std::abs(v) || (v == 0.0 && prev == 0.0)) {
      r.converged = true;
      return r;
    }
    prev = v;
  }
  return r;
}

}  // namespace

double Region::measure() const { return cell ? cell->measure : riesz::measure(set); }

bool Region::contains(std::span<const double> x) const {
  if (cell) return riesz::contains(*cell, x);
  return distance_to(set, x) <= 1e-9 * std::max(1.0, set.scale() + vec::norm(set.center()));
}

double Region::ball_measure(std::span<const double> x, double r) const {
  if (!cell) return ball_intersection_measure(set, x, r);
  const SetDescriptor& p = set;
  if (is_curve(p)) {
    const auto window = detail::circular_window(curve_angle(p, x), chord_to_angle(r, p.radius()));
    return p.radius() * detail::total_length(detail::intersect(curve_domain(*this), window));
  }
  if (is_sphere2(p)) {
    const SphereFrame f = frame(p);
    const double beta = central_angle(f, x, cell->center);
    return f.radius * f.radius * cap_cap_area(cell_cap_angle(*cell), chord_to_angle(r, f.radius), beta);
  }
  if (cell->shape == TestCell::Shape::Cap && p.kind() != SetKind::Union) {
    // Whole part inside the cell.
    if (cell->chord_radius >= p.diameter_bound()) return primitive_ball_measure(p, x, r);
  }
  throw std::invalid_argument("region: unsupported cell for ball measures");
}

PointList Region::samples(std::size_t n) const {
  if (!cell) return sample(set, n);
  PointList out(set.m());
  if (cell->shape == TestCell::Shape::Cap) out.push_back(cell->center);
  const double frac = std::max(cell->measure / riesz::measure(set), 1e-12);
  const std::size_t k = std::min<std::size_t>(64 * n, static_cast<std::size_t>(std::ceil(n / frac)));
  const PointList all = sample(set, k);
  for (std::size_t i = 0; i < all.size() && out.size() < n; ++i)
    if (contains(all[i])) out.push_back(all[i]);
  return out;
}

AlphaEstimate alpha(const Region& region, double epsilon, std::size_t x_samples, std::size_t r_samples,
                    double exclusion) {
  if (!(epsilon > 0)) throw std::invalid_argument("alpha: epsilon must be positive");
  if (x_samples < 1 || r_samples < 1) throw std::invalid_argument("alpha: empty grid");
  const SetDescriptor& set = region.set;
  PointList xs = region.samples(x_samples);
  if (exclusion > 0.0 && set.is_union()) {
    PointList kept(xs.dim());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t own = owning_part(set, xs[i]);
      bool far = true;
      for (std::size_t j = 0; j < set.part_count() && far; ++j)
        if (j != own) far = distance_to(set.part(j), xs[i]) >= exclusion;
      if (far) kept.push_back(xs[i]);
    }
    xs = std::move(kept);
  }
  AlphaEstimate est;
  est.epsilon = epsilon;
  est.x_grid = xs.size();
  est.r_grid = r_samples;
  const int d = region.d();
  const double beta = unit_ball_volume(d);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < r_samples; ++k) {
      const double r = epsilon * std::exp2(-static_cast<double>(k) / 8.0);
      const double ratio = region.ball_measure(xs[i], r) / (beta * std::pow(r, d));
      if (ratio > est.value) {
        est.value = ratio;
        est.arg_x = xs.point(i);
        est.arg_r = r;
      }
    }
  return est;
}

AlphaLimitCheck alpha_limit_check(const SetDescriptor& set, const std::vector<double>& schedule, double exclusion,
                                  double tol) {
  if (schedule.size() < 3) throw std::invalid_argument("alpha_limit_check: schedule needs at least three values");
  for (std::size_t i = 0; i < schedule.size(); ++i)
    if (!(schedule[i] > 0) || (i > 0 && !(schedule[i] < schedule[i - 1])))
      throw std::invalid_argument("alpha_limit_check: schedule must be positive and strictly decreasing");
  AlphaLimitCheck c;
  for (double eps : schedule) c.values.push_back(alpha(set, eps, 64, 64, exclusion).value);
  c.limsup_estimate = c.values.back();
  c.passes = c.limsup_estimate <= 1.0 + tol;
  return c;
}

IntegralResult riesz_integral(const Region& region, std::span<const double> y, double big_r) {
  if (!(big_r > 0)) throw std::invalid_argument("riesz_integral: R must be positive");
  if (!region.contains(y)) throw std::domain_error("riesz_integral: y is not in the region");
  const SetDescriptor& p = region.set;
  if (is_curve(p)) {
    const double ty = curve_angle(p, y);
    const double tr = chord_to_angle(big_r, p.radius());
    if (tr >= kPi) return {0.0, true, 0};
    const auto pieces = detail::subtract(curve_domain(region), detail::circular_window(ty, tr));
    auto f = [ty](double t) { return 0.5 / std::abs(std::sin(0.5 * (t - ty))); };
    return converge([&](int panels) {
      double total = 0.0;
      for (const auto& [lo, hi] : pieces) total += detail::gauss_composite(f, lo, hi, panels);
      return total;
    });
  }
  if (is_sphere2(p)) {
    const SphereFrame fr = frame(p);
    const double tr = chord_to_angle(big_r, fr.radius);
    if (tr >= kPi) return {0.0, true, 0};
    double a = kPi, beta = 0.0;
    if (region.cell) {
      a = cell_cap_angle(*region.cell);
      beta = central_angle(fr, y, region.cell->center);
    }
    const double top = std::min(kPi, a + beta);
    const double breaks[] = {std::abs(a - beta)};
    auto f = [&](double t) { return 0.5 * azimuth_inside(t, beta, a) / std::tan(0.5 * t); };
    return converge([&](int panels) { return detail::gauss_composite(f, tr, top, panels, breaks); });
  }
  throw std::invalid_argument("riesz_integral: needs a circle, arc or 2-sphere region");
}

NearFieldCheck near_field_bound_check(const Region& region, std::span<const double> y, double big_r, double r) {
  if (!(big_r > 0 && big_r <= r)) throw std::invalid_argument("near_field_bound_check: need 0 < R <= r");
  NearFieldCheck c;
  const auto lhs = riesz_integral(region, y, big_r);
  c.lhs = lhs.value;
  c.converged = lhs.converged;
  c.alpha = alpha(region, r).value;
  const int d = region.d();
  c.rhs = std::pow(r, -d) * region.measure() + unit_ball_volume(d) * c.alpha * d * std::log(r / big_r);
  c.holds = c.lhs <= c.rhs + 1e-9;
  return c;
}

NearFieldSuite near_field_suite(std::size_t samples, std::uint64_t seed) {
  NearFieldSuite suite;
  suite.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const double radius = rng.uniform(0.5, 2.0);
    Region region;
    switch (i % 4) {
      case 0: region = Region::whole(SetDescriptor::circle(radius)); break;
      case 1: region = Region::whole(SetDescriptor::arc(radius, rng.uniform(0.3, kTwoPi - 0.1))); break;
      case 2: region = Region::whole(SetDescriptor::sphere(2, radius)); break;
      default: {
        const auto s2 = SetDescriptor::sphere(2, radius);
        region = Region::of(angular_cap_cell(s2, 0, random_point(s2, rng), rng.uniform(0.2, 2.5)));
      }
    }
    Point y = random_point(region.set, rng);
    while (!region.contains(y)) y = random_point(region.set, rng);
    const double r = radius * rng.uniform(0.05, 2.0);
    const double big_r = r * std::exp(-rng.uniform(0.0, 4.0));
    const auto c = near_field_bound_check(region, y, big_r, r);
    ++suite.instances;
    suite.holding += c.holds ? 1 : 0;
    suite.converged += c.converged ? 1 : 0;
    suite.worst_slack = std::min(suite.worst_slack, c.rhs - c.lhs);
  }
  return suite;
}

CountReport empirical_counts(const SetDescriptor& set, const PointList& points, const std::vector<TestCell>& cells) {
  if (points.empty()) throw std::invalid_argument("empirical_counts: empty configuration");
  CountReport rep;
  const double total = measure(set);
  const double n = static_cast<double>(points.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CountRow row;
    row.cell = c;
    for (std::size_t i = 0; i < points.size(); ++i) row.count += contains(cells[c], points[i]) ? 1 : 0;
    row.fraction = static_cast<double>(row.count) / n;
    row.target = cells[c].measure / total;
    row.deviation = std::abs(row.fraction - row.target);
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<TestCell> part_cells(const SetDescriptor& set) {
  std::vector<TestCell> cells;
  for (std::size_t i = 0; i < set.part_count(); ++i) {
    const SetDescriptor& p = set.part(i);
    const PointList anchor = sample(p, 1);
    TestCell c = cap_cell(set, i, anchor[0], 2.0 * p.diameter_bound() + 1.0);
    c.measure = measure(p);
    cells.push_back(std::move(c));
  }
  return cells;
}

EquidistributionReport equidistribution_report(const SetDescriptor& set, const std::vector<PointList>& configs,
                                               const std::vector<TestCell>& cells) {
  EquidistributionReport rep;
  for (const auto& x : configs) rep.rows.push_back({x.size(), empirical_counts(set, x, cells).max_deviation});
  rep.decreasing = rep.rows.size() >= 2 && rep.rows.back().max_deviation < rep.rows.front().max_deviation;
  return rep;
}

}  // namespace riesz
