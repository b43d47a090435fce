#include "riesz/energy_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "manifold.hpp"
#include "riesz/kernels.hpp"

namespace riesz {

namespace {

struct Descent {
  PointList x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

Descent descend(const SetDescriptor& set, PointList x, double s, const EnergyOptions& opts) {
  const double h = opts.step_fraction * detail::spacing(set, x.size());
  Descent out;
  std::vector<double> grad(x.flat().size());
  double e = kernels::energy(x, s, grad);
  double alpha = h;
  for (; out.iterations < opts.max_iterations; ++out.iterations) {
    if (!std::isfinite(e)) break;
    std::vector<double> d(grad.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = -grad[k];
    detail::tangent_all(set, x, d);
    const double big = detail::max_block_norm(d, x.dim());
    if (!(big > 0.0)) {
      out.converged = true;
      break;
    }
    for (auto& v : d) v /= big;
    // Projected direction: drops outward components on the boundary of solid sets.
    const PointList probe = detail::step(set, x, d, h);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (probe.flat()[k] - x.flat()[k]) / h;
    if (!(detail::max_block_norm(d, x.dim()) > 1e-12)) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (alpha >= 1e-10 * h) {
      PointList trial = detail::step(set, x, d, alpha);
      double slope = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k) slope += grad[k] * (trial.flat()[k] - x.flat()[k]);
      std::vector<double> tg(grad.size());
      const double te = kernels::energy(trial, s, tg);
      if (te < e && te <= e + opts.armijo * slope) {
        x = std::move(trial);
        grad = std::move(tg);
        e = te;
        out.trace.push_back(e);
        alpha = std::min(1.5 * alpha, h);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  out.value = e;
  return out;
}

}  // namespace

EnergyReport minimize(const SetDescriptor& set, std::size_t n, double s, const EnergyOptions& opts) {
  if (n < 2) throw std::invalid_argument("minimize: N must be >= 2");
  if (!(s > 0)) throw std::invalid_argument("minimize: s must be positive");
  if (opts.restarts < 1) throw std::invalid_argument("minimize: need at least one restart");
  if (opts.initial && (opts.initial->size() != n || opts.initial->dim() != set.m()))
    throw std::invalid_argument("minimize: initial configuration has the wrong shape");
  auto home = std::make_shared<const SetDescriptor>(set);
  EnergyReport best;
  best.seed = opts.seed;
  best.restarts = opts.restarts;
  bool have = false;
  std::vector<double> best_key;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, r));
    PointList x = r == 0 ? (opts.initial ? *opts.initial : sample(set, n)) : detail::random_configuration(set, n, rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Point p = project(set, x[i]);
      for (std::size_t k = 0; k < x.dim(); ++k) x[i][k] = p[k];
    }
    Descent run = descend(set, std::move(x), s, opts);
    best.iterations += run.iterations;
    best.restart_values.push_back(run.value);
    const auto key = detail::sorted_flat(run.x);
    if (!have || run.value < best.value.to_double() || (run.value == best.value.to_double() && key < best_key)) {
      have = true;
      best_key = key;
      best.value = std::isfinite(run.value) ? ExtendedReal(run.value) : ExtendedReal::infinity();
      best.converged = run.converged;
      best.trace = std::move(run.trace);
      best.config = Configuration(home, std::move(run.x));
    }
  }
  return best;
}

InequalityCheck polarization_energy_inequality(std::size_t n, double pol_value, double energy_value, bool analytic) {
  if (n < 2) throw std::invalid_argument("polarization_energy_inequality: N must be >= 2");
  InequalityCheck c;
  c.lhs = pol_value;
  c.rhs = energy_value / static_cast<double>(n - 1);
  c.holds = c.lhs >= c.rhs - 1e-9;
  c.advisory = !analytic;
  return c;
}

AsymptoticsTable energy_ratio_table(const SetDescriptor& set, const std::vector<std::size_t>& ns,
                                    const EnergyOptions& opts) {
  AsymptoticsTable t;
  t.set_name = describe(set);
  t.source = "solver";
  t.normalization = Normalization::N2LogN;
  t.d = set.d();
  t.s = set.d();
  t.seed = opts.seed;
  for (std::size_t n : ns) {
    const auto r = minimize(set, n, t.s, opts);
    t.rows.push_back({n, r.value.to_double(), 0.0});
  }
  t.target = limit_target(set, t.d);
  finalize_table(t);
  return t;
}

}  // namespace riesz
