#include "riesz/kernels.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riesz::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const PointList& a, const PointList& b) {
  if (!a.empty() && !b.empty() && a.dim() != b.dim()) throw std::invalid_argument("kernels: dimension mismatch");
}

// Sum over sources for one target, fixed order.
double field_at(const double* y, const double* src, std::size_t n, std::size_t dim, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = src + i * dim;
    double r2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double t = y[k] - x[k];
      r2 += t * t;
    }
    if (r2 == 0.0) return kInf;
    acc += riesz_kernel(r2, s);
  }
  return acc;
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

void potential_field(const PointList& sources, const PointList& targets, double s, std::span<double> field) {
  check_dims(sources, targets);
  const std::size_t n = sources.size();
  const std::size_t g = targets.size();
  const std::size_t dim = targets.dim();
  if (field.size() != g) throw std::invalid_argument("potential_field: output size mismatch");
  const double* src = sources.flat().data();
  const double* tgt = targets.flat().data();
  const auto count = static_cast<std::ptrdiff_t>(g);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < count; ++j)
    field[static_cast<std::size_t>(j)] = field_at(tgt + static_cast<std::size_t>(j) * dim, src, n, dim, s);
}

double softmin(const PointList& sources, const PointList& targets, double s, double tau, std::span<double> grad) {
  check_dims(sources, targets);
  const std::size_t n = sources.size();
  const std::size_t g = targets.size();
  const std::size_t dim = sources.dim();
  std::vector<double> f(g);
  potential_field(sources, targets, s, f);
  const double fmin = *std::min_element(f.begin(), f.end());
  if (fmin == kInf) {
    if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
    return kInf;
  }
  double z = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    f[j] = std::exp(-tau * (f[j] - fmin));  // f now holds unnormalised weights
    z += f[j];
  }
  const double value = fmin - std::log(z) / tau;
  if (grad.empty()) return value;
  if (grad.size() != n * dim) throw std::invalid_argument("softmin: gradient size mismatch");
  const double* src = sources.flat().data();
  const double* tgt = targets.flat().data();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double* x = src + i * dim;
    double acc[16] = {0.0};
    std::vector<double> big(dim > 16 ? dim : 0, 0.0);
    double* a = dim > 16 ? big.data() : acc;
    for (std::size_t j = 0; j < g; ++j) {
      const double w = f[j];
      if (w == 0.0) continue;
      const double* y = tgt + j * dim;
      double r2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double t = y[k] - x[k];
        r2 += t * t;
      }
      // d/dx |y - x|^{-s} = s |y - x|^{-s-2} (y - x)
      const double c = w * s * riesz_kernel(r2, s) / r2;
      for (std::size_t k = 0; k < dim; ++k) a[k] += c * (y[k] - x[k]);
    }
    for (std::size_t k = 0; k < dim; ++k) grad[i * dim + k] = a[k] / z;
  }
  return value;
}

double energy(const PointList& points, double s, std::span<double> grad) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim();
  if (!grad.empty() && grad.size() != n * dim) throw std::invalid_argument("energy: gradient size mismatch");
  const double* p = points.flat().data();
  std::vector<double> row(n, 0.0);
  const bool want_grad = !grad.empty();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double* x = p + i * dim;
    double acc = 0.0;
    double gbuf[16] = {0.0};
    std::vector<double> big(dim > 16 ? dim : 0, 0.0);
    double* gi = dim > 16 ? big.data() : gbuf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* y = p + j * dim;
      double r2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double t = x[k] - y[k];
        r2 += t * t;
      }
      if (r2 == 0.0) {
        acc = kInf;
        continue;
      }
      const double kv = riesz_kernel(r2, s);
      acc += kv;
      if (want_grad) {
        const double c = -2.0 * s * kv / r2;
        for (std::size_t k = 0; k < dim; ++k) gi[k] += c * (x[k] - y[k]);
      }
    }
    row[i] = acc;
    if (want_grad)
      for (std::size_t k = 0; k < dim; ++k) grad[i * dim + k] = gi[k];
  }
  double total = 0.0;
  for (double r : row) total += r;
  return total;
}

namespace serial {

void potential_field(const PointList& sources, const PointList& targets, double s, std::span<double> field) {
  check_dims(sources, targets);
  if (field.size() != targets.size()) throw std::invalid_argument("potential_field: output size mismatch");
  for (std::size_t j = 0; j < targets.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const double r2 = vec::dist2(targets[j], sources[i]);
      acc += r2 == 0.0 ? kInf : riesz_kernel(r2, s);
    }
    field[j] = acc;
  }
}

double softmin(const PointList& sources, const PointList& targets, double s, double tau, std::span<double> grad) {
  std::vector<double> f(targets.size());
  potential_field(sources, targets, s, f);
  double fmin = kInf;
  for (double v : f) fmin = std::min(fmin, v);
  std::vector<double> w(f.size());
  double z = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    w[j] = std::exp(-tau * (f[j] - fmin));
    z += w[j];
  }
  if (!grad.empty()) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t dim = sources.dim();
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (w[j] == 0.0) continue;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        const double r2 = vec::dist2(targets[j], sources[i]);
        const double c = (w[j] / z) * s * std::pow(r2, -0.5 * s - 1.0);
        for (std::size_t k = 0; k < dim; ++k) grad[i * dim + k] += c * (targets[j][k] - sources[i][k]);
      }
    }
  }
  return fmin - std::log(z) / tau;
}

double energy(const PointList& points, double s, std::span<double> grad) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim();
  if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r2 = vec::dist2(points[i], points[j]);
      if (r2 == 0.0) return kInf;
      total += 2.0 * std::pow(r2, -0.5 * s);
      if (!grad.empty()) {
        const double c = -2.0 * s * std::pow(r2, -0.5 * s - 1.0);
        for (std::size_t k = 0; k < dim; ++k) {
          const double t = c * (points[i][k] - points[j][k]);
          grad[i * dim + k] += t;
          grad[j * dim + k] -= t;
        }
      }
    }
  return total;
}

}  // namespace serial

}  // namespace riesz::kernels
