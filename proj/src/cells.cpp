#include "riesz/cells.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double on_part_tolerance(const SetDescriptor& part) {
  return 1e-9 * std::max(1.0, part.scale() + vec::norm(part.center()));
}

bool on_part(const SetDescriptor& part, std::span<const double> x) {
  return distance_to(part, x) <= on_part_tolerance(part);
}

bool is_round(const SetDescriptor& p) {
  return p.kind() == SetKind::Circle || p.kind() == SetKind::Arc || p.kind() == SetKind::Sphere;
}

// Which chart parameters are periodic angles.
std::vector<bool> periodic_params(const SetDescriptor& p) {
  switch (p.kind()) {
    case SetKind::Circle: return {true};
    case SetKind::Sphere:
      if (p.d() == 1) return {true};
      if (p.d() == 2) return {false, true};
      return {false};
    default: return std::vector<bool>(p.kind() == SetKind::Arc || p.kind() == SetKind::Segment ? 1 : p.d(), false);
  }
}

}  // namespace

TestCell cap_cell(const SetDescriptor& set, std::size_t part, std::span<const double> center, double chord_radius) {
  if (part >= set.part_count()) throw std::invalid_argument("cap_cell: part index out of range");
  if (!(chord_radius > 0)) throw std::invalid_argument("cap_cell: radius must be positive");
  const SetDescriptor& p = set.part(part);
  if (!on_part(p, center)) throw std::domain_error("cap_cell: center is not on the part");
  TestCell c;
  c.shape = TestCell::Shape::Cap;
  c.part = p;
  c.part_index = part;
  c.center.assign(center.begin(), center.end());
  c.chord_radius = chord_radius;
  c.measure = primitive_ball_measure(p, center, chord_radius);
  return c;
}

TestCell angular_cap_cell(const SetDescriptor& set, std::size_t part, std::span<const double> center, double angle) {
  const SetDescriptor& p = set.part(part);
  if (!is_round(p)) throw std::invalid_argument("angular_cap_cell: part is not a circle, arc or sphere");
  if (!(angle > 0 && angle <= kPi)) throw std::invalid_argument("angular_cap_cell: angle must lie in (0, pi]");
  return cap_cell(set, part, center, 2.0 * p.radius() * std::sin(angle / 2.0));
}

TestCell param_box_cell(const SetDescriptor& set, std::size_t part, std::vector<double> lo, std::vector<double> hi) {
  if (part >= set.part_count()) throw std::invalid_argument("param_box_cell: part index out of range");
  const SetDescriptor& p = set.part(part);
  if (lo.size() != hi.size() || lo.size() != periodic_params(p).size())
    throw std::invalid_argument("param_box_cell: wrong number of parameters for this part");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(hi[i] >= lo[i])) throw std::invalid_argument("param_box_cell: empty box");
  TestCell c;
  c.shape = TestCell::Shape::ParamBox;
  c.part = p;
  c.part_index = part;
  switch (p.kind()) {
    case SetKind::Circle: c.measure = p.radius() * std::min(hi[0] - lo[0], kTwoPi); break;
    case SetKind::Arc: c.measure = p.radius() * detail::overlap({lo[0], hi[0]}, {0.0, p.extent()}); break;
    case SetKind::Segment:
      c.measure = detail::overlap({lo[0], hi[0]}, {-p.length() / 2, p.length() / 2});
      break;
    case SetKind::Sphere:
      if (p.d() == 1) {
        c.measure = p.radius() * std::min(hi[0] - lo[0], kTwoPi);
      } else {
        const double a = std::clamp(lo[0], 0.0, kPi);
        const double b = std::clamp(hi[0], 0.0, kPi);
        const double zone = sphere_cap_area(p.d(), p.radius(), b) - sphere_cap_area(p.d(), p.radius(), a);
        c.measure = p.d() == 2 ? zone * std::min(hi[1] - lo[1], kTwoPi) / kTwoPi : zone;
      }
      break;
    case SetKind::Cube: {
      double v = 1.0;
      for (std::size_t i = 0; i < lo.size(); ++i) v *= detail::overlap({lo[i], hi[i]}, {-p.side() / 2, p.side() / 2});
      c.measure = v;
      break;
    }
    default: throw std::invalid_argument("param_box_cell: unsupported part kind");
  }
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  return c;
}

TestCell shell_cell(const SetDescriptor& set, std::size_t part, double inner, double outer) {
  const SetDescriptor& p = set.part(part);
  if (p.kind() != SetKind::Ball) throw std::invalid_argument("shell_cell: part is not a ball");
  if (!(inner >= 0 && outer >= inner)) throw std::invalid_argument("shell_cell: need 0 <= inner <= outer");
  TestCell c;
  c.shape = TestCell::Shape::Shell;
  c.part = p;
  c.part_index = part;
  c.center = p.center();
  c.lo = {inner};
  c.hi = {std::min(outer, p.radius())};
  c.measure = unit_ball_volume(p.d()) * (std::pow(c.hi[0], p.d()) - std::pow(std::min(inner, c.hi[0]), p.d()));
  return c;
}

bool contains(const TestCell& cell, std::span<const double> x) {
  if (!on_part(cell.part, x)) return false;
  switch (cell.shape) {
    case TestCell::Shape::Cap: return vec::dist(x, cell.center) <= cell.chord_radius;
    case TestCell::Shape::Shell: {
      const double r = vec::dist(x, cell.center);
      return r >= cell.lo[0] && r <= cell.hi[0];
    }
    case TestCell::Shape::ParamBox: {
      const auto params = chart_params(cell.part, x);
      const auto periodic = periodic_params(cell.part);
      for (std::size_t i = 0; i < cell.lo.size(); ++i) {
        const double t = params[i];
        bool in = t >= cell.lo[i] && t <= cell.hi[i];
        if (!in && periodic[i]) in = t + kTwoPi >= cell.lo[i] && t + kTwoPi <= cell.hi[i];
        if (!in) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

std::vector<TestCell> partition_part(const SetDescriptor& set, std::size_t part, std::size_t count) {
  const SetDescriptor& p = set.part(part);
  std::vector<TestCell> cells;
  const double n = static_cast<double>(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double a = static_cast<double>(j) / n;
    const double b = static_cast<double>(j + 1) / n;
    switch (p.kind()) {
      case SetKind::Circle: cells.push_back(param_box_cell(set, part, {kTwoPi * a}, {kTwoPi * b})); break;
      case SetKind::Arc: cells.push_back(param_box_cell(set, part, {p.extent() * a}, {p.extent() * b})); break;
      case SetKind::Segment:
        cells.push_back(param_box_cell(set, part, {p.length() * (a - 0.5)}, {p.length() * (b - 0.5)}));
        break;
      case SetKind::Sphere:
        if (p.d() == 1) {
          cells.push_back(param_box_cell(set, part, {kTwoPi * a}, {kTwoPi * b}));
        } else if (p.d() == 2) {
          // Equal-area zones.
          cells.push_back(
              param_box_cell(set, part, {std::acos(1.0 - 2.0 * a), 0.0}, {std::acos(1.0 - 2.0 * b), kTwoPi}));
        } else {
          const double total = sphere_cap_area(p.d(), p.radius(), kPi);
          auto polar_at = [&](double frac) {
            double lo = 0.0, hi = kPi;
            for (int it = 0; it < 200; ++it) {
              const double mid = 0.5 * (lo + hi);
              (sphere_cap_area(p.d(), p.radius(), mid) < frac * total ? lo : hi) = mid;
            }
            if (frac <= 0.0) return 0.0;
            if (frac >= 1.0) return kPi;
            return 0.5 * (lo + hi);
          };
          cells.push_back(param_box_cell(set, part, {polar_at(a)}, {polar_at(b)}));
        }
        break;
      case SetKind::Ball:
        cells.push_back(shell_cell(set, part, p.radius() * std::pow(a, 1.0 / p.d()),
                                   p.radius() * std::pow(b, 1.0 / p.d())));
        break;
      case SetKind::Cube: {
        std::vector<double> lo(static_cast<std::size_t>(p.d()), -p.side() / 2);
        std::vector<double> hi(static_cast<std::size_t>(p.d()), p.side() / 2);
        lo[0] = p.side() * (a - 0.5);
        hi[0] = p.side() * (b - 0.5);
        cells.push_back(param_box_cell(set, part, lo, hi));
        break;
      }
      case SetKind::Union: break;
    }
  }
  return cells;
}

}  // namespace

std::vector<TestCell> make_test_cells(const SetDescriptor& set, const CellFamily& family, std::uint64_t seed) {
  if (family.count < 1) throw std::invalid_argument("make_test_cells: family size must be >= 1");
  std::vector<TestCell> cells;
  if (family.kind == CellFamily::Kind::Partition) {
    for (std::size_t part = 0; part < set.part_count(); ++part) {
      auto pc = partition_part(set, part, family.count);
      cells.insert(cells.end(), pc.begin(), pc.end());
    }
    return cells;
  }
  Rng rng(seed);
  const double total = measure(set);
  for (std::size_t i = 0; i < family.count; ++i) {
    std::size_t part = 0;
    if (set.is_union()) {
      double u = rng.uniform() * total;
      for (part = 0; part + 1 < set.part_count(); ++part) {
        u -= measure(set.part(part));
        if (u < 0.0) break;
      }
    }
    const SetDescriptor& p = set.part(part);
    const Point c = random_point(p, rng);
    const double size = rng.uniform(family.min_size, family.max_size);
    if (is_round(p))
      cells.push_back(angular_cap_cell(set, part, c, std::min(size, kPi)));
    else
      cells.push_back(cap_cell(set, part, c, size * p.scale()));
  }
  return cells;
}

}  // namespace riesz
