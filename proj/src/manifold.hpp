#pragma once

// Tangent projection and retraction helpers shared by the optimizers.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "riesz/geometry.hpp"

namespace riesz::detail {

/// Typical point spacing (measure / n)^{1/d}.
inline double spacing(const SetDescriptor& set, std::size_t n) {
  return std::pow(measure(set) / static_cast<double>(n), 1.0 / set.d());
}

/// Removes the normal component of every per-point block of g.
inline void tangent_all(const SetDescriptor& set, const PointList& x, std::vector<double>& g) {
  const std::size_t m = x.dim();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const SetDescriptor& p = set.part(set.is_union() ? owning_part(set, x[i]) : 0);
    tangent_project(p, x[i], std::span<double>(g.data() + i * m, m));
  }
}

/// x_i <- project(x_i + alpha d_i)
inline PointList step(const SetDescriptor& set, const PointList& x, const std::vector<double>& d, double alpha) {
  PointList out(x.dim());
  Point y(x.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < x.dim(); ++k) y[k] = x[i][k] + alpha * d[i * x.dim() + k];
    out.push_back(project(set, y));
  }
  return out;
}

/// Largest per-point block norm of a flattened displacement.
inline double max_block_norm(const std::vector<double>& d, std::size_t m) {
  double big = 0.0;
  for (std::size_t i = 0; i * m < d.size(); ++i) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) n2 += d[i * m + k] * d[i * m + k];
    big = std::max(big, std::sqrt(n2));
  }
  return big;
}

/// Points sorted lexicographically and flattened; used for deterministic
/// tie-breaks between restarts.
inline std::vector<double> sorted_flat(const PointList& x) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < x.size(); ++i) pts.push_back(x.point(i));
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (const auto& p : pts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline PointList random_configuration(const SetDescriptor& set, std::size_t n, Rng& rng) {
  PointList x(set.m());
  for (std::size_t i = 0; i < n; ++i) x.push_back(random_point(set, rng));
  return x;
}

}  // namespace riesz::detail
