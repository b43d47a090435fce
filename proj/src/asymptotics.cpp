#include "riesz/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace riesz {

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::NLogN: return "N_log_N";
    case Normalization::N2LogN: return "N2_log_N";
    case Normalization::N: return "N";
  }
  return "?";
}

double normalization_factor(Normalization n, std::size_t count) {
  const double x = static_cast<double>(count);
  switch (n) {
    case Normalization::NLogN: return x * std::log(x);
    case Normalization::N2LogN: return x * x * std::log(x);
    case Normalization::N: return x;
  }
  return x;
}

double limit_target(const SetDescriptor& set, int d) {
  const double h = measure_in_dimension(set, d);
  if (!(h > 0.0)) return std::numeric_limits<double>::infinity();
  return unit_ball_volume(d) / h;
}

void finalize_table(AsymptoticsTable& table) {
  auto& rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].n == rows[i - 1].n) throw std::invalid_argument("table: repeated N");
    if (table.normalization != Normalization::N && rows[i].n < 2)
      throw std::invalid_argument("table: log normalizations need N >= 2");
    rows[i].ratio = rows[i].value / normalization_factor(table.normalization, rows[i].n);
  }
  if (table.normalization == Normalization::N) table.target = std::numeric_limits<double>::quiet_NaN();
  if (!rows.empty()) {
    const std::size_t tail = rows.size() / 2;
    table.liminf_estimate = rows[tail].ratio;
    table.limsup_estimate = rows[tail].ratio;
    for (std::size_t i = tail; i < rows.size(); ++i) {
      table.liminf_estimate = std::min(table.liminf_estimate, rows[i].ratio);
      table.limsup_estimate = std::max(table.limsup_estimate, rows[i].ratio);
    }
  }
  table.fit.reset();
  if (table.normalization != Normalization::N && rows.size() >= 3) table.fit = extrapolate(table);
}

Fit extrapolate(const AsymptoticsTable& table) {
  if (table.rows.size() < 3) throw std::invalid_argument("extrapolate: need at least three rows");
  auto rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.n < b.n || (a.n == b.n && a.ratio < b.ratio);
  });
  if (rows.front().n == rows.back().n) throw std::invalid_argument("extrapolate: singular fit (all N equal)");
  if (rows.front().n < 2) throw std::invalid_argument("extrapolate: N must be >= 2");
  const double count = static_cast<double>(rows.size());
  double mu = 0.0, mr = 0.0;
  for (const auto& r : rows) {
    mu += 1.0 / std::log(static_cast<double>(r.n));
    mr += r.ratio;
  }
  mu /= count;
  mr /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : rows) {
    const double du = 1.0 / std::log(static_cast<double>(r.n)) - mu;
    sxx += du * du;
    sxy += du * (r.ratio - mr);
  }
  Fit f;
  f.b = sxy / sxx;
  f.a = mr - f.b * mu;
  double ss = 0.0;
  for (const auto& r : rows) {
    const double e = r.ratio - (f.a + f.b / std::log(static_cast<double>(r.n)));
    ss += e * e;
  }
  f.residual = std::sqrt(ss / count);
  return f;
}

std::string to_string(RatioSource s) { return s == RatioSource::AnalyticCircle ? "analytic" : "solver"; }

RatioSource ratio_source_from_string(const std::string& name) {
  if (name == "analytic" || name == "analytic_circle") return RatioSource::AnalyticCircle;
  if (name == "solver") return RatioSource::Solver;
  throw std::invalid_argument("unknown ratio source '" + name + "'");
}

AsymptoticsTable polarization_ratio_table(const SetDescriptor& set, const std::vector<std::size_t>& ns,
                                          RatioSource source, const SolveOptions& opts, int d) {
  AsymptoticsTable t;
  t.set_name = describe(set);
  t.source = to_string(source);
  t.normalization = Normalization::NLogN;
  t.d = d > 0 ? d : set.d();
  t.s = t.d;
  t.seed = opts.seed;
  t.lower_estimates = source == RatioSource::Solver;
  if (source == RatioSource::AnalyticCircle && set.kind() != SetKind::Circle)
    throw std::invalid_argument("analytic ratios are only available for a circle");
  for (std::size_t n : ns) {
    if (n < 2) throw std::invalid_argument("polarization_ratio_table: N must be >= 2");
    double v = 0.0;
    if (source == RatioSource::AnalyticCircle)
      v = equally_spaced_value(n, t.s) * std::pow(set.radius(), -t.s);
    else
      v = solve(set, n, t.s, opts).value.to_double();
    t.rows.push_back({n, v, 0.0});
  }
  t.target = limit_target(set, t.d);
  finalize_table(t);
  return t;
}

AsymptoticsTable chebyshev_ratio_table(const SetDescriptor& set, double s, const std::vector<std::size_t>& ns,
                                       const SolveOptions& opts) {
  AsymptoticsTable t;
  t.set_name = describe(set);
  t.source = "solver";
  t.normalization = Normalization::N;
  t.d = set.d();
  t.s = s;
  t.seed = opts.seed;
  t.lower_estimates = true;
  for (std::size_t n : ns) t.rows.push_back({n, solve(set, n, s, opts).value.to_double(), 0.0});
  finalize_table(t);
  return t;
}

std::string to_string(BoundFlag f) {
  switch (f) {
    case BoundFlag::Consistent: return "consistent";
    case BoundFlag::Inconsistent: return "inconsistent";
    case BoundFlag::Diverging: return "diverging";
    case BoundFlag::Undetermined: return "undetermined";
  }
  return "?";
}

LowerBoundReport lower_bound_report(const AsymptoticsTable& table, double tol) {
  LowerBoundReport r;
  r.target = table.target;
  if (table.rows.empty()) return r;
  r.tail_min_ratio = table.liminf_estimate;
  if (std::isinf(table.target)) {
    r.extrapolated = std::numeric_limits<double>::infinity();
    if (table.rows.size() >= 2 && table.rows.back().ratio >= 2.0 * table.rows.front().ratio)
      r.flag = BoundFlag::Diverging;
    return r;
  }
  if (std::isnan(table.target) || table.rows.size() < 3) return r;
  r.extrapolated = table.fit ? table.fit->a : extrapolate(table).a;
  r.flag = r.extrapolated >= table.target * (1.0 - tol) ? BoundFlag::Consistent : BoundFlag::Inconsistent;
  return r;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string table_csv(const AsymptoticsTable& table, const std::string& set_hash) {
  std::ostringstream out;
  out << "# set " << table.set_name << " hash " << set_hash << " seed " << table.seed << '\n';
  out << "# source " << table.source << " normalization " << to_string(table.normalization) << " s "
      << format_number(table.s) << '\n';
  if (table.fit)
    out << "# fit a " << format_number(table.fit->a) << " b " << format_number(table.fit->b) << " residual "
        << format_number(table.fit->residual) << '\n';
  out << "N,value,ratio,target,model_fit\n";
  for (const auto& r : table.rows) {
    const double model = table.fit ? table.fit->a + table.fit->b / std::log(static_cast<double>(r.n))
                                   : std::numeric_limits<double>::quiet_NaN();
    out << r.n << ',' << format_number(r.value) << ',' << format_number(r.ratio) << ','
        << format_number(table.target) << ',' << format_number(model) << '\n';
  }
  return out.str();
}

std::string emit_plotdata(const AsymptoticsTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plotdata: empty table");
  std::ostringstream out;
  for (const auto& r : table.rows) out << r.n << ' ' << format_number(r.ratio) << '\n';
  if (std::isfinite(table.target))
    out << "target " << format_number(table.target) << '\n';
  else if (std::isinf(table.target))
    out << "# target is infinite (zero d-dimensional measure)\n";
  else
    out << "# no target for this normalization\n";
  return out.str();
}

}  // namespace riesz
