#include "riesz/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "manifold.hpp"
#include "riesz/kernels.hpp"

namespace riesz {

namespace {

using detail::max_block_norm;
using detail::random_configuration;
using detail::sorted_flat;
using detail::spacing;
using detail::step;
using detail::tangent_all;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Scales d so that the largest per-point displacement is 1. Returns false for
// a zero direction.
bool normalize_blocks(std::vector<double>& d, std::size_t m) {
  double big = 0.0;
  for (std::size_t i = 0; i * m < d.size(); ++i) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) n2 += d[i * m + k] * d[i * m + k];
    big = std::max(big, std::sqrt(n2));
  }
  if (!(big > 0.0) || !std::isfinite(big)) return false;
  for (auto& v : d) v /= big;
  return true;
}

// Euclidean projection onto the probability simplex.

// Weights of the linearized maximin step: minimizes
// (rho/2) |sum_j l_j g_j|^2 + sum_j l_j f_j over the simplex. The step is then
// d = rho sum_j l_j g_j, the maximizer of min_j (f_j + g_j . d) - |d|^2/(2 rho).
std::vector<double> maximin_step(const std::vector<std::vector<double>>& g, const std::vector<double>& f,
                                 double rho) {
  const std::size_t k = g.size();
  std::vector<double> q(k * k);
  double lip = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      q[a * k + b] = vec::dot(g[a], g[b]);
      row += std::abs(q[a * k + b]);
    }
    lip = std::max(lip, row);
  }
  std::vector<double> lambda(k, 0.0);
  const std::size_t start = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  lambda[start] = 1.0;
  if (k > 1 && lip > 0.0) {
    // Pairwise Frank-Wolfe with exact line search; ql = Q lambda.
    std::vector<double> ql(k);
    for (std::size_t a = 0; a < k; ++a) ql[a] = q[a * k + start];
    double fscale = 0.0;
    for (double v : f) fscale = std::max(fscale, std::abs(v));
    const double tol = 1e-15 * (fscale + rho * lip);
    for (int it = 0; it < 200000; ++it) {
      std::size_t toward = 0, away = k;
      double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin, gap = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        const double ga = rho * ql[a] + f[a];
        if (ga < gmin) {
          gmin = ga;
          toward = a;
        }
        if (lambda[a] > 0.0 && ga > gmax) {
          gmax = ga;
          away = a;
        }
        gap += lambda[a] * ga;
      }
      gap -= gmin;
      if (gap <= tol || away == k || away == toward) break;
      const double curv = rho * (q[toward * k + toward] + q[away * k + away] - 2.0 * q[toward * k + away]);
      double gamma = lambda[away];
      if (curv > 0.0) gamma = std::min(gamma, (gmax - gmin) / curv);
      if (!(gamma > 0.0)) break;
      lambda[toward] += gamma;
      lambda[away] -= gamma;
      if (lambda[away] < 1e-300) lambda[away] = 0.0;
      for (std::size_t a = 0; a < k; ++a) ql[a] += gamma * (q[a * k + toward] - q[a * k + away]);
    }
  }
  std::vector<double> d(g.front().size(), 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < d.size(); ++c) d[c] += rho * lambda[a] * g[a][c];
  return d;
}

// Gradient of the potential at y with respect to the configuration points.
std::vector<double> potential_gradient(const PointList& x, std::span<const double> y, double s) {
  const std::size_t m = x.dim();
  std::vector<double> g(x.size() * m, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r2 = vec::dist2(y, x[i]);
    if (r2 == 0.0) continue;
    const double c = s * kernels::riesz_kernel(r2, s) / r2;
    for (std::size_t k = 0; k < m; ++k) g[i * m + k] = c * (y[k] - x[i][k]);
  }
  return g;
}

struct Context {
  const SetDescriptor& set;
  std::size_t n;
  double s;
  const SolveOptions& opts;
  double h;
  PointList exact_grid;
  PointList witness_grid;

  PotentialValue exact(const PointList& x) const { return min_potential(set, x, s, exact_grid, opts.inner); }
};

Context make_context(const SetDescriptor& set, std::size_t n, double s, const SolveOptions& opts) {
  const std::size_t g_exact = opts.inner.grid_n > 0 ? opts.inner.grid_n : default_grid_size(n);
  const std::size_t g_witness = opts.witness_grid > 0 ? opts.witness_grid : std::max<std::size_t>(1024, 16 * n);
  return {set, n, s, opts, spacing(set, n), sample(set, g_exact), sample(set, g_witness)};
}

constexpr std::size_t kPolishBasins = 16;

constexpr std::size_t kBundleSize = 64;
constexpr std::size_t kGridPlanes = 32;
// Polish stops when the value gains less than kStallGain (relative) over
// kStallWindow iterations.
constexpr std::size_t kStallWindow = 10;
constexpr double kStallGain = 1e-10;

// Cutting planes f(y; x) + grad_x f(y; x) . d for a bundle of witness points.
struct Bundle {
  std::vector<Point> witnesses;

  void add(const std::vector<PotentialValue>& minima) {
    for (const auto& m : minima)
      if (m.value.is_finite()) witnesses.push_back(m.witness);
  }
  // Low grid points spread over the near-active region.
  void add_grid(const Context& cx, const PointList& x) {
    std::vector<double> f(cx.exact_grid.size());
    kernels::potential_field(x, cx.exact_grid, cx.s, f);
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::size_t> picked;
    const double sep2 = 0.09 * cx.h * cx.h;
    for (std::size_t idx : order) {
      if (picked.size() >= kGridPlanes || !std::isfinite(f[idx])) break;
      bool far = true;
      for (std::size_t q : picked) far = far && vec::dist2(cx.exact_grid[idx], cx.exact_grid[q]) >= sep2;
      if (far) picked.push_back(idx);
    }
    for (std::size_t q : picked) witnesses.push_back(cx.exact_grid.point(q));
  }
  // Keeps the kBundleSize lowest planes at x (dropping duplicates).
  void build(const Context& cx, const PointList& x, std::vector<std::vector<double>>& grads,
             std::vector<double>& vals) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < witnesses.size(); ++j)
      order.emplace_back(potential(witnesses[j], x, cx.s).to_double(), j);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Point> kept;
    grads.clear();
    vals.clear();
    for (const auto& [v, j] : order) {
      if (kept.size() >= kBundleSize) break;
      if (!std::isfinite(v)) continue;
      const double sep2 = 1e-12 * cx.h * cx.h;
      bool dup = false;
      for (const auto& k : kept) dup = dup || vec::dist2(k, witnesses[j]) < sep2;
      if (dup) continue;
      kept.push_back(witnesses[j]);
      auto g = potential_gradient(x, witnesses[j], cx.s);
      tangent_all(cx.set, x, g);
      grads.push_back(std::move(g));
      vals.push_back(v);
    }
    witnesses = std::move(kept);
    if (!vals.empty()) {
      const double lo = vals.front();
      for (auto& v : vals) v -= lo;
    }
  }
};

std::pair<PointList, PotentialValue> polish_impl(const Context& cx, PointList x, int* iterations, bool* converged) {
  auto eval = [&](const PointList& pts) {
    return local_minima(cx.set, pts, cx.s, cx.exact_grid, kPolishBasins, cx.opts.inner.tolerance,
                        cx.opts.inner.max_evaluations);
  };
  auto minima = eval(x);
  Bundle bundle;
  bundle.add(minima);
  double rho = -1.0;
  int it = 0;
  bool done = false;
  double last_gain = kInf;
  std::vector<std::vector<double>> grads;
  std::vector<double> vals;
  std::vector<double> history;
  const bool solid = cx.set.kind() == SetKind::Ball || cx.set.kind() == SetKind::Cube;
  for (; it < cx.opts.polish_iterations; ++it) {
    if (!minima.front().value.is_finite()) break;
    const double v = minima.front().value.to_double();
    history.push_back(v);
    if (history.size() > kStallWindow && v - history[history.size() - 1 - kStallWindow] <= kStallGain * v) {
      done = true;
      break;
    }
    bundle.add_grid(cx, x);
    bundle.build(cx, x, grads, vals);
    if (grads.empty()) break;
    if (rho < 0) {
      const double gmax = max_block_norm(grads.front(), x.dim());
      if (!(gmax > 0)) {
        done = true;
        break;
      }
      rho = 0.25 * cx.h / gmax;
    }
    bool accepted = false;
    while (true) {
      const auto d = maximin_step(grads, vals, rho);
      const double move = max_block_norm(d, x.dim());
      if (!(move >= 1e-10 * cx.h)) break;
      PointList trial = step(cx.set, x, d, 1.0);
      auto tm = eval(trial);
      bundle.add(tm);
      if (tm.front().value.to_double() > v) {
        last_gain = (tm.front().value.to_double() - v) / v;
        x = std::move(trial);
        minima = std::move(tm);
        if (move < cx.h) rho *= 2.0;
        accepted = true;
        break;
      }
      rho *= 0.5;
      bundle.build(cx, x, grads, vals);
    }
    // Contraction toward the centroid: the fallback after a failed step, and
    // an extra candidate on convex solids, where maximizers may collapse.
    if (!accepted || solid) {
      Point c(x.dim(), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < x.dim(); ++k) c[k] += x[i][k] / static_cast<double>(x.size());
      std::vector<double> d(x.flat().size());
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < x.dim(); ++k) d[i * x.dim() + k] = c[k] - x[i][k];
      const double floor = accepted ? 0.5 : 1.0 / 64;
      const double base = minima.front().value.to_double();
      for (double gamma = 0.5; gamma >= floor; gamma *= 0.5) {
        PointList trial = step(cx.set, x, d, gamma);
        auto tm = eval(trial);
        bundle.add(tm);
        if (tm.front().value.to_double() > base) {
          last_gain = (tm.front().value.to_double() - v) / v;
          x = std::move(trial);
          minima = std::move(tm);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      done = true;
      break;
    }
  }
  if (iterations) *iterations = it;
  if (converged) *converged = done || last_gain < 1e-7;
  return {std::move(x), cx.exact(x)};
}

PointList smoothed_ascent(const Context& cx, PointList x, int& iterations) {
  const std::size_t m = x.dim();
  PointList best = x;
  double best_v = cx.exact(x).value.to_double();
  std::vector<double> grad(x.flat().size());
  for (double t : cx.opts.temperatures) {
    std::vector<double> field(cx.witness_grid.size());
    kernels::potential_field(x, cx.witness_grid, cx.s, field);
    const double fmin = *std::min_element(field.begin(), field.end());
    if (!std::isfinite(fmin) || !(fmin > 0)) break;
    const double tau = t / fmin;
    double alpha = 0.5 * cx.h;
    double val = kernels::softmin(x, cx.witness_grid, cx.s, tau, grad);
    for (int it = 0; it < cx.opts.stage_iterations; ++it) {
      ++iterations;
      std::vector<double> d = grad;
      tangent_all(cx.set, x, d);
      if (!normalize_blocks(d, m)) break;
      double slope = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k) slope += d[k] * grad[k];
      bool accepted = false;
      while (alpha >= 1e-6 * cx.h) {
        PointList trial = step(cx.set, x, d, alpha);
        std::vector<double> tg(grad.size());
        const double tv = kernels::softmin(trial, cx.witness_grid, cx.s, tau, tg);
        if (tv >= val + 1e-4 * alpha * slope) {
          x = std::move(trial);
          grad = std::move(tg);
          val = tv;
          alpha = std::min(1.5 * alpha, cx.h);
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    const double v = cx.exact(x).value.to_double();
    if (v > best_v) {
      best_v = v;
      best = x;
    }
  }
  return best;
}

// Grid-field bookkeeping shared by exchange and anneal.
struct GridField {
  const PointList& grid;
  double s;
  std::vector<double> f;

  GridField(const PointList& g, const PointList& x, double s_) : grid(g), s(s_), f(g.size()) {
    kernels::potential_field(x, grid, s, f);
  }
  double k(std::size_t j, std::span<const double> p) const {
    const double r2 = vec::dist2(grid[j], p);
    return r2 == 0.0 ? kInf : kernels::riesz_kernel(r2, s);
  }
  double min() const { return *std::min_element(f.begin(), f.end()); }
  // Minimum after removing `out` and adding `in` (either may be empty).
  double min_after(std::span<const double> out, std::span<const double> in) const {
    double best = kInf;
    for (std::size_t j = 0; j < f.size(); ++j) {
      double v = f[j];
      if (!in.empty()) v += k(j, in);
      if (!out.empty() && std::isfinite(f[j])) v -= k(j, out);
      best = std::min(best, v);
    }
    return best;
  }
  void replace(const PointList& x) { kernels::potential_field(x, grid, s, f); }
};

Point tangent_perturb(const SetDescriptor& set, std::span<const double> x, double radius, Rng& rng) {
  std::vector<double> v(x.size());
  for (auto& c : v) c = rng.normal();
  const SetDescriptor& p = set.part(set.is_union() ? owning_part(set, x) : 0);
  tangent_project(p, x, v);
  const double n = vec::norm(v);
  Point y(x.begin(), x.end());
  if (n > 0)
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += radius * v[k] / n;
  return project(set, y);
}

PointList exchange(const Context& cx, PointList x, Rng& rng, int& iterations) {
  GridField gf(cx.witness_grid, x, cx.s);
  double rho = 0.5;
  for (int move = 0; move < cx.opts.moves && rho >= 1e-3; ++move) {
    ++iterations;
    const auto jt = std::min_element(gf.f.begin(), gf.f.end());
    const double current = *jt;
    if (!std::isfinite(current)) break;
    const Point w = cx.witness_grid.point(static_cast<std::size_t>(jt - gf.f.begin()));
    std::size_t victim = 0;
    double victim_min = -kInf;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = gf.min_after(x[i], {});
      if (v > victim_min) {
        victim_min = v;
        victim = i;
      }
    }
    std::vector<Point> candidates = {w};
    for (int c = 0; c < 8; ++c) candidates.push_back(tangent_perturb(cx.set, w, rho * cx.h * rng.uniform(0.2, 1.0), rng));
    double best = current;
    int pick = -1;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double v = gf.min_after(x[victim], candidates[c]);
      if (v > best) {
        best = v;
        pick = static_cast<int>(c);
      }
    }
    if (pick < 0) {
      rho *= 0.5;
      continue;
    }
    const Point& cnew = candidates[static_cast<std::size_t>(pick)];
    for (std::size_t k = 0; k < x.dim(); ++k) x[victim][k] = cnew[k];
    gf.replace(x);
  }
  return x;
}

PointList anneal(const Context& cx, PointList x, Rng& rng, int& iterations) {
  GridField gf(cx.witness_grid, x, cx.s);
  double current = gf.min();
  PointList best = x;
  double best_v = current;
  const int moves = std::max(1, cx.opts.moves) * 4;
  const double t0 = 0.05, t1 = 1e-4;
  const double s0 = 0.5, s1 = 0.01;
  for (int move = 0; move < moves; ++move) {
    ++iterations;
    const double frac = static_cast<double>(move) / moves;
    const double temp = t0 * std::pow(t1 / t0, frac);
    const double sigma = s0 * std::pow(s1 / s0, frac) * cx.h;
    const std::size_t i = rng.index(x.size());
    const Point c = tangent_perturb(cx.set, x[i], sigma * std::abs(rng.normal()), rng);
    const double v = gf.min_after(x[i], c);
    const double u = rng.uniform();
    if (!std::isfinite(current) || !std::isfinite(v)) continue;
    const double delta = (v - current) / current;
    if (delta >= 0.0 || u < std::exp(delta / temp)) {
      for (std::size_t k = 0; k < x.dim(); ++k) x[i][k] = c[k];
      gf.replace(x);
      current = v;
      if (current > best_v) {
        best_v = current;
        best = x;
      }
    }
  }
  return best;
}

// 40 mantissa bits.
double quantize(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  int e = 0;
  const double m = std::frexp(v, &e);
  return std::ldexp(std::round(std::ldexp(m, 40)), e - 40);
}

PointList gather(const PointList& grid, const std::vector<std::size_t>& idx) {
  PointList out(grid.dim());
  for (std::size_t i : idx) out.push_back(grid[i]);
  return out;
}

SolveReport grid_report(const PointList& grid, const std::vector<std::size_t>& idx, double s) {
  SolveReport r;
  r.config = Configuration::on_grid(gather(grid, idx));
  r.value = grid_value(grid, idx, s);
  // Witness: first grid point attaining the (unquantized) minimum.
  double best = kInf;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
    const double v = potential(grid[j], r.config.points(), s).to_double();
    if (v < best) {
      best = v;
      r.witness = grid.point(j);
    }
  }
  r.grid_size = grid.size();
  return r;
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::SmoothedAscent: return "smoothed_ascent";
    case Strategy::Exchange: return "exchange";
    case Strategy::Anneal: return "anneal";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "smoothed_ascent") return Strategy::SmoothedAscent;
  if (name == "exchange") return Strategy::Exchange;
  if (name == "anneal") return Strategy::Anneal;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::pair<PointList, PotentialValue> polish(const SetDescriptor& set, PointList points, double s,
                                            const SolveOptions& opts, int* iterations, bool* converged) {
  const Context cx = make_context(set, points.size(), s, opts);
  return polish_impl(cx, std::move(points), iterations, converged);
}

SolveReport solve(const SetDescriptor& set, std::size_t n, double s, const SolveOptions& opts) {
  if (n < 1) throw std::invalid_argument("solve: N must be >= 1");
  if (!(s > 0)) throw std::invalid_argument("solve: s must be positive");
  if (opts.restarts < 1) throw std::invalid_argument("solve: need at least one restart");
  if (opts.initial && (opts.initial->size() != n || opts.initial->dim() != set.m()))
    throw std::invalid_argument("solve: initial configuration has the wrong shape");
  const Context cx = make_context(set, n, s, opts);
  auto home = std::make_shared<const SetDescriptor>(set);

  SolveReport best;
  best.strategy = opts.strategy;
  best.seed = opts.seed;
  best.restarts = opts.restarts;
  best.grid_size = cx.exact_grid.size();
  bool have = false;
  std::vector<double> best_key;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    const std::uint64_t rs = derive_seed(opts.seed, r);
    Rng rng(rs);
    PointList x = r == 0 ? (opts.initial ? *opts.initial : sample(set, n)) : random_configuration(set, n, rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Point p = project(set, x[i]);
      for (std::size_t k = 0; k < x.dim(); ++k) x[i][k] = p[k];
    }
    const double start_v = cx.exact(x).value.to_double();
    const PointList start = x;
    int iters = 0;
    switch (opts.strategy) {
      case Strategy::SmoothedAscent: x = smoothed_ascent(cx, std::move(x), iters); break;
      case Strategy::Exchange: x = exchange(cx, std::move(x), rng, iters); break;
      case Strategy::Anneal: x = anneal(cx, std::move(x), rng, iters); break;
    }
    if (!(cx.exact(x).value.to_double() >= start_v)) x = start;
    int polish_iters = 0;
    bool conv = true;
    auto [px, pv] = polish_impl(cx, std::move(x), &polish_iters, &conv);
    iters += polish_iters;
    conv = conv && pv.converged;
    best.restart_log.push_back({rs, pv.value.to_double(), iters, conv});
    best.iterations += iters;

    const auto key = sorted_flat(px);
    if (!have || best.value < pv.value || (best.value == pv.value && key < best_key)) {
      have = true;
      best_key = key;
      best.value = pv.value;
      best.witness = pv.witness;
      best.witness_part = pv.part;
      best.refine_gain = pv.refine_gain;
      best.converged = conv;
      best.config = Configuration(home, std::move(px));
    }
  }
  return best;
}

ExtendedReal grid_value(const PointList& grid, const std::vector<std::size_t>& indices, double s) {
  std::vector<std::size_t> idx = indices;
  std::sort(idx.begin(), idx.end());
  double best = kInf;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::binary_search(idx.begin(), idx.end(), j)) continue;
    double acc = 0.0;
    for (std::size_t i : idx) {
      const double r2 = vec::dist2(grid[j], grid[i]);
      acc += r2 == 0.0 ? kInf : kernels::riesz_kernel(r2, s);
    }
    best = std::min(best, acc);
  }
  return std::isfinite(best) ? ExtendedReal(quantize(best)) : ExtendedReal::infinity();
}

SolveReport solve_on_grid(const PointList& grid, std::size_t n, double s, std::uint64_t seed, std::size_t restarts) {
  if (grid.empty()) throw std::invalid_argument("solve_on_grid: empty grid");
  if (n < 1) throw std::invalid_argument("solve_on_grid: N must be >= 1");
  const std::size_t g = grid.size();
  std::vector<std::size_t> best_idx;
  ExtendedReal best_v;
  bool have = false;
  int total_iters = 0;
  auto better = [&](const ExtendedReal& v, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    return !have || best_v < v || (v == best_v && idx < best_idx);
  };
  std::vector<RestartRecord> log;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    const std::uint64_t rs = derive_seed(seed, r);
    Rng rng(rs);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = r == 0 ? (i * g) / n : rng.index(g);
    std::sort(idx.begin(), idx.end());
    ExtendedReal v = grid_value(grid, idx, s);
    int iters = 0;
    for (bool improved = true; improved;) {
      improved = false;
      ++iters;
      std::vector<std::size_t> cand_best = idx;
      ExtendedReal cand_v = v;
      auto consider = [&](std::vector<std::size_t> t) {
        std::sort(t.begin(), t.end());
        const ExtendedReal tv = grid_value(grid, t, s);
        if (cand_v < tv || (tv == cand_v && t < cand_best)) {
          cand_v = tv;
          cand_best = std::move(t);
        }
      };
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < g; ++a) {
          auto t = idx;
          t[i] = a;
          consider(std::move(t));
        }
      if (!(v < cand_v) && n >= 2) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t a = 0; a < g; ++a)
              for (std::size_t b = 0; b < g; ++b) {
                auto t = idx;
                t[i] = a;
                t[k] = b;
                consider(std::move(t));
              }
      }
      if (v < cand_v) {
        idx = cand_best;
        v = cand_v;
        improved = true;
      }
    }
    total_iters += iters;
    log.push_back({rs, v.to_double(), iters, true});
    if (better(v, idx)) {
      have = true;
      best_v = v;
      best_idx = idx;
    }
  }
  SolveReport rep = grid_report(grid, best_idx, s);
  rep.strategy = Strategy::Exchange;
  rep.seed = seed;
  rep.restarts = std::max<std::size_t>(1, restarts);
  rep.iterations = total_iters;
  rep.restart_log = std::move(log);
  return rep;
}

SolveReport oracle_solve(const PointList& grid, std::size_t n, double s) {
  if (grid.size() > 64 || n > 4) throw std::invalid_argument("oracle_solve: guard exceeded (|grid| <= 64, N <= 4)");
  if (grid.empty() || n < 1) throw std::invalid_argument("oracle_solve: empty problem");
  const std::size_t g = grid.size();
  std::vector<std::size_t> idx(n, 0), best_idx;
  ExtendedReal best_v;
  bool have = false;
  int count = 0;
  while (true) {
    const ExtendedReal v = grid_value(grid, idx, s);
    ++count;
    if (!have || best_v < v) {
      have = true;
      best_v = v;
      best_idx = idx;
    }
    // Next non-decreasing index tuple; enumeration order is lexicographic so
    // the first maximizer found is the lexicographically smallest.
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == g - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < n; ++k) idx[k] = idx[pos - 1];
  }
  SolveReport rep = grid_report(grid, best_idx, s);
  rep.strategy = Strategy::Exchange;
  rep.iterations = count;
  rep.restarts = 1;
  return rep;
}

double equally_spaced_value(std::size_t n, double s) {
  if (n < 1) throw std::invalid_argument("equally_spaced_value: N must be >= 1");
  if (!(s > 0)) throw std::invalid_argument("equally_spaced_value: s must be positive");
  const double nn = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // Angular distance from pi/N to 2 pi j / N, folded into [0, pi].
    double theta = std::abs(kPi / nn - 2.0 * kPi * static_cast<double>(j) / nn);
    if (theta > kPi) theta = 2.0 * kPi - theta;
    acc += std::pow(2.0 * std::sin(theta / 2.0), -s);
  }
  return acc;
}

PointList equally_spaced_circle(std::size_t n) { return sample(SetDescriptor::circle(), n); }

}  // namespace riesz
