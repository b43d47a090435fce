#include "riesz/riesz_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "riesz/kernels.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949;

bool is_one_dimensional(const SetDescriptor& p) { return p.d() == 1; }

// 1D chart of a primitive: u -> point, with its parameter domain.
struct Chart1D {
  const SetDescriptor* part;
  bool periodic = false;
  double lo = 0.0, hi = 0.0;

  Point at(double u) const {
    const SetDescriptor& p = *part;
    switch (p.kind()) {
      case SetKind::Circle:
      case SetKind::Arc:
      case SetKind::Sphere: {
        if (!periodic) u = std::clamp(u, lo, hi);
        const double q[2] = {p.radius() * std::cos(u), p.radius() * std::sin(u)};
        return p.to_ambient(q);
      }
      default: {
        const double q[1] = {std::clamp(u, lo, hi)};
        return p.to_ambient(q);
      }
    }
  }
  // Chart length per unit parameter.
  double speed() const {
    const auto k = part->kind();
    return (k == SetKind::Circle || k == SetKind::Arc || k == SetKind::Sphere) ? part->radius() : 1.0;
  }
};

Chart1D chart_for(const SetDescriptor& p) {
  Chart1D c{&p};
  switch (p.kind()) {
    case SetKind::Circle:
    case SetKind::Sphere:
      c.periodic = true;
      c.lo = 0.0;
      c.hi = kTwoPi;
      break;
    case SetKind::Arc:
      c.lo = 0.0;
      c.hi = p.extent();
      break;
    case SetKind::Segment:
      c.lo = -p.length() / 2;
      c.hi = p.length() / 2;
      break;
    case SetKind::Ball:
      c.lo = -p.radius();
      c.hi = p.radius();
      break;
    case SetKind::Cube:
      c.lo = -p.side() / 2;
      c.hi = p.side() / 2;
      break;
    case SetKind::Union: break;
  }
  return c;
}

struct Refined {
  Point x;
  double value;
  bool converged;
};

Refined refine_1d(const SetDescriptor& p, const PointList& points, double s, std::span<const double> start,
                  double start_value, double spacing, double tol, int max_evals) {
  const Chart1D chart = chart_for(p);
  double u0 = chart_params(p, start)[0];
  auto f = [&](double u) { return potential(chart.at(u), points, s).to_double(); };
  const double h = 1.5 * spacing / chart.speed();
  const bool angular = p.kind() == SetKind::Circle || p.kind() == SetKind::Arc || p.kind() == SetKind::Sphere;
  const double tol_u = angular ? tol : tol * p.scale();
  int evals = 0;
  double best_u = u0;
  double best_v = start_value;
  bool converged = true;
  for (int shift = 0; shift < 10; ++shift) {
    double a = best_u - h, b = best_u + h;
    if (!chart.periodic) {
      a = std::max(a, chart.lo);
      b = std::min(b, chart.hi);
    }
    const double a0 = a, b0 = b;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    evals += 2;
    while (b - a > tol_u) {
      if (evals >= max_evals) {
        converged = false;
        break;
      }
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
      ++evals;
    }
    const double u = fc <= fd ? c : d;
    const double v = std::min(fc, fd);
    if (!(v < best_v)) break;
    const bool at_lower = u - a0 < 4 * tol_u && (chart.periodic || a0 > chart.lo);
    const bool at_upper = b0 - u < 4 * tol_u && (chart.periodic || b0 < chart.hi);
    const bool moved_to_edge = at_lower || at_upper;
    best_u = u;
    best_v = v;
    if (!moved_to_edge || !converged) break;
  }
  if (chart.periodic) {
    best_u = std::fmod(best_u, kTwoPi);
    if (best_u < 0) best_u += kTwoPi;
  }
  return {best_v < start_value ? chart.at(best_u) : Point(start.begin(), start.end()), std::min(best_v, start_value),
          converged};
}

// Orthonormal tangent directions (ambient coordinates) at x.
std::vector<std::vector<double>> tangent_basis(const SetDescriptor& p, std::span<const double> x) {
  const std::size_t k = p.local_dim();
  std::vector<std::vector<double>> basis;
  std::vector<double> radial;
  std::vector<std::vector<double>> out;
  std::size_t wanted = static_cast<std::size_t>(p.d());
  const Point q = p.to_local(x);
  radial.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k));
  const double r = vec::norm(radial);
  // On the boundary of a ball, search along the bounding sphere and inward.
  const bool rim = p.kind() == SetKind::Ball && r >= p.radius() * (1.0 - 1e-9);
  if ((p.kind() == SetKind::Sphere || rim) && r > 0) {
    for (auto& c : radial) c /= r;
    basis.push_back(radial);
    if (rim) out.push_back(p.rotate_to_ambient(radial));
  }
  for (std::size_t axis = 0; axis < k && out.size() < wanted; ++axis) {
    std::vector<double> e(k, 0.0);
    e[axis] = 1.0;
    for (const auto& b : basis) {
      const double c = vec::dot(e, b);
      for (std::size_t i = 0; i < k; ++i) e[i] -= c * b[i];
    }
    const double n = vec::norm(e);
    if (n < 0.3) continue;
    for (auto& c : e) c /= n;
    basis.push_back(e);
    out.push_back(p.rotate_to_ambient(e));
  }
  return out;
}

Refined refine_compass(const SetDescriptor& p, const PointList& points, double s, std::span<const double> start,
                       double start_value, double spacing, double tol, int max_evals) {
  Point x(start.begin(), start.end());
  double v = start_value;
  double h = spacing;
  const double h_min = tol * p.scale();
  int evals = 0;
  while (h >= h_min) {
    if (evals >= max_evals) return {x, v, false};
    const auto basis = tangent_basis(p, x);
    Point best_x;
    double best_v = v;
    for (const auto& b : basis)
      for (double sign : {1.0, -1.0}) {
        Point trial = x;
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += sign * h * b[i];
        trial = project(p, trial);
        const double tv = potential(trial, points, s).to_double();
        ++evals;
        if (tv < best_v) {
          best_v = tv;
          best_x = std::move(trial);
        }
      }
    if (!best_x.empty()) {
      x = std::move(best_x);
      v = best_v;
      h = std::min(2.0 * h, spacing);
    } else {
      h *= 0.5;
    }
  }
  return {x, v, true};
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) throw std::domain_error("ExtendedReal: value is +inf");
  return value_;
}

std::string to_string(ExtendedReal v) {
  if (!v.is_finite()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v.to_double());
  return buf;
}

double on_set_tolerance(const SetDescriptor& set) {
  return 1e-12 * std::max(1.0, set.scale() + vec::norm(set.center()));
}

Configuration::Configuration(std::shared_ptr<const SetDescriptor> home, PointList points)
    : home_(std::move(home)), points_(std::move(points)) {
  if (!home_) throw std::invalid_argument("Configuration: home set required");
  if (points_.size() < 1) throw std::invalid_argument("Configuration: N must be >= 1");
  if (points_.dim() != home_->m()) throw std::invalid_argument("Configuration: point dimension must equal m");
  const double tol = on_set_tolerance(*home_);
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (distance_to(*home_, points_[i]) > tol)
      throw std::domain_error("Configuration: point " + std::to_string(i) + " is not on the set");
}

Configuration Configuration::on_grid(PointList points) {
  if (points.size() < 1) throw std::invalid_argument("Configuration: N must be >= 1");
  Configuration c;
  c.points_ = std::move(points);
  return c;
}

Configuration Configuration::with_point(std::span<const double> x) const {
  PointList pts = points_;
  pts.push_back(x);
  if (home_) return Configuration(home_, std::move(pts));
  return on_grid(std::move(pts));
}

ExtendedReal potential(std::span<const double> y, const PointList& points, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r2 = vec::dist2(y, points[i]);
    if (r2 == 0.0) return ExtendedReal::infinity();
    acc += kernels::riesz_kernel(r2, s);
  }
  return ExtendedReal(acc);
}

ExtendedReal energy(const PointList& points, double s) {
  if (points.size() < 2) throw std::invalid_argument("energy: needs at least two points");
  return ExtendedReal(kernels::energy(points, s, {}));
}

std::size_t default_grid_size(std::size_t n_points) { return std::max<std::size_t>(1024, 64 * n_points); }

bool witness_less(const SetDescriptor& set, const PotentialValue& a, const PotentialValue& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.part != b.part) return a.part < b.part;
  return chart_params(set.part(a.part), a.witness) < chart_params(set.part(b.part), b.witness);
}

std::vector<PotentialValue> local_minima(const SetDescriptor& set, const PointList& points, double s,
                                         const PointList& grid, std::size_t count, double tolerance,
                                         int max_evaluations) {
  if (grid.empty()) throw std::invalid_argument("local_minima: empty grid");
  std::vector<double> field(grid.size());
  kernels::potential_field(points, grid, s, field);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return field[a] < field[b]; });

  const double total = measure(set);
  const double d = static_cast<double>(set.d());
  const double n_pts = static_cast<double>(std::max<std::size_t>(1, points.size()));
  const double separation = 0.5 * std::pow(total / n_pts, 1.0 / d);
  std::vector<std::size_t> picked;
  for (std::size_t idx : order) {
    if (picked.size() >= count) break;
    bool far = true;
    for (std::size_t q : picked)
      if (vec::dist(grid[idx], grid[q]) < separation) {
        far = false;
        break;
      }
    if (far) picked.push_back(idx);
  }

  const double grid_min = field[order.front()];
  std::vector<PotentialValue> out;
  for (std::size_t idx : picked) {
    std::size_t part_index = 0;
    project(set, grid[idx], part_index);
    const SetDescriptor& p = set.part(part_index);
    const double share = measure(p) / total * static_cast<double>(grid.size());
    const double spacing = std::pow(measure(p) / std::max(1.0, share), 1.0 / d);
    Refined r = is_one_dimensional(p)
                    ? refine_1d(p, points, s, grid[idx], field[idx], spacing, tolerance, max_evaluations)
                    : refine_compass(p, points, s, grid[idx], field[idx], spacing, tolerance, max_evaluations);
    PotentialValue pv;
    pv.value = ExtendedReal(r.value);
    pv.witness = std::move(r.x);
    pv.part = part_index;
    pv.converged = r.converged;
    pv.grid_size = grid.size();
    pv.refine_gain = std::isfinite(grid_min) ? std::max(0.0, grid_min - r.value) : 0.0;
    out.push_back(std::move(pv));
  }
  std::sort(out.begin(), out.end(),
            [&](const PotentialValue& a, const PotentialValue& b) { return witness_less(set, a, b); });
  // Values equal up to rounding are ties; the smallest chart parameter wins.
  if (!out.empty() && out.front().value.is_finite()) {
    const double cut = out.front().value.to_double() * (1.0 + 1e-12);
    std::size_t pick = 0;
    for (std::size_t i = 1; i < out.size() && out[i].value.to_double() <= cut; ++i) {
      const auto& a = out[i];
      const auto& b = out[pick];
      if (a.part < b.part || (a.part == b.part && chart_params(set.part(a.part), a.witness) <
                                                     chart_params(set.part(b.part), b.witness)))
        pick = i;
    }
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(pick),
                out.begin() + static_cast<std::ptrdiff_t>(pick) + 1);
  }
  return out;
}

PotentialValue min_potential(const SetDescriptor& set, const PointList& points, double s, const PointList& grid,
                             const MinPotentialOptions& opts) {
  if (!(s > 0)) throw std::invalid_argument("min_potential: s must be positive");
  auto minima = local_minima(set, points, s, grid, std::max<std::size_t>(1, opts.k_best), opts.tolerance,
                             opts.max_evaluations);
  PotentialValue best = minima.front();
  for (const auto& m : minima) best.converged = best.converged && m.converged;
  best.refine_gain = minima.front().refine_gain;
  return best;
}

PotentialValue min_potential(const SetDescriptor& set, const Configuration& omega, double s,
                             const MinPotentialOptions& opts) {
  const std::size_t n = opts.grid_n > 0 ? opts.grid_n : default_grid_size(omega.size());
  return min_potential(set, omega.points(), s, sample(set, n), opts);
}

}  // namespace riesz
