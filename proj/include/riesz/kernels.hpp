#pragma once

// Data-parallel Riesz kernels.
//
// The functions in riesz::kernels are OpenMP-parallel. Every output element is
// produced by one thread with a fixed summation order, so results do not
// depend on the number of threads. riesz::kernels::serial holds plain
// reference loops used by the tests and the benchmark.

#include <cmath>
#include <span>

#include "riesz/geometry.hpp"

namespace riesz::kernels {

/// |x - y|^{-s} from the squared distance.
inline double riesz_kernel(double r2, double s) {
  if (s == 2.0) return 1.0 / r2;
  if (s == 1.0) return 1.0 / std::sqrt(r2);
  return std::pow(r2, -0.5 * s);
}

/// field[j] = sum_i |targets[j] - sources[i]|^{-s}; +inf where a target
/// coincides with a source.
void potential_field(const PointList& sources, const PointList& targets, double s, std::span<double> field);

/// Softmin of the field over the targets, -(1/tau) log sum_j exp(-tau f_j).
/// When grad is non-empty it receives d(softmin)/d(sources), flattened like
/// sources.flat().
double softmin(const PointList& sources, const PointList& targets, double s, double tau, std::span<double> grad);

/// Riesz s-energy over ordered pairs j != k; +inf on coincident points. When
/// grad is non-empty it receives dE/d(points).
double energy(const PointList& points, double s, std::span<double> grad);

/// Number of worker threads the parallel kernels will use.
int thread_count();
void set_thread_count(int n);

namespace serial {
void potential_field(const PointList& sources, const PointList& targets, double s, std::span<double> field);
double softmin(const PointList& sources, const PointList& targets, double s, double tau, std::span<double> grad);
double energy(const PointList& points, double s, std::span<double> grad);
}  // namespace serial

}  // namespace riesz::kernels
