#pragma once

// Internal numerical helpers shared by the geometry and analysis modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace riesz::detail {

inline constexpr std::array<double, 8> kGaussNodes8 = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights8 = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

/// Composite 8-point Gauss-Legendre on [a, b] split at the given breakpoints,
/// with `panels` equal panels inside each piece.
template <class F>
double gauss_composite(F&& f, double a, double b, int panels, std::span<const double> breaks = {}) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double lo = cuts[piece];
    const double hi = cuts[piece + 1];
    if (!(hi > lo)) continue;
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = lo + (k + 0.5) * h;
      double acc = 0.0;
      for (std::size_t q = 0; q < kGaussNodes8.size(); ++q) acc += kGaussWeights8[q] * f(mid + 0.5 * h * kGaussNodes8[q]);
      total += 0.5 * h * acc;
    }
  }
  return total;
}

/// Angle normalised into [0, 2pi).
inline double wrap_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

using Interval = std::pair<double, double>;

/// Splits the circular window [center - half, center + half] into at most two
/// intervals of [0, 2pi).
inline std::vector<Interval> circular_window(double center, double half) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (half >= std::numbers::pi) return {{0.0, two_pi}};
  if (half < 0.0) return {};
  const double lo = wrap_angle(center - half);
  const double hi = lo + 2.0 * half;
  if (hi <= two_pi) return {{lo, hi}};
  return {{lo, two_pi}, {0.0, hi - two_pi}};
}

inline double overlap(Interval a, Interval b) {
  const double lo = std::max(a.first, b.first);
  const double hi = std::min(a.second, b.second);
  return hi > lo ? hi - lo : 0.0;
}

/// Intersection of two sorted disjoint interval lists.
inline std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      const double lo = std::max(x.first, y.first);
      const double hi = std::min(x.second, y.second);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// a minus b, for interval lists.
inline std::vector<Interval> subtract(std::vector<Interval> a, const std::vector<Interval>& b) {
  for (const auto& cut : b) {
    std::vector<Interval> next;
    for (const auto& x : a) {
      if (cut.second <= x.first || cut.first >= x.second) {
        next.push_back(x);
        continue;
      }
      if (cut.first > x.first) next.emplace_back(x.first, cut.first);
      if (cut.second < x.second) next.emplace_back(cut.second, x.second);
    }
    a = std::move(next);
  }
  return a;
}

inline double total_length(const std::vector<Interval>& a) {
  double t = 0.0;
  for (const auto& x : a) t += x.second - x.first;
  return t;
}

}  // namespace riesz::detail
