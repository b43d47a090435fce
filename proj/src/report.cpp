#include "riesz/report.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "riesz/asymptotics.hpp"
#include "riesz/cells.hpp"
#include "riesz/energy_solver.hpp"
#include "riesz/measure_analysis.hpp"
#include "riesz/polarization.hpp"

namespace riesz {

namespace {

const std::vector<double> kDefaultEpsilon = {1.0, 0.5, 0.1, 0.01};

struct Status {
  bool ok = true;
  std::string message = "ok";

  void fail(const std::string& why) {
    if (ok) message = why;
    ok = false;
  }
};

YAML::Emitter& emit_point(YAML::Emitter& out, std::span<const double> p) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : p) out << v;
  return out << YAML::EndSeq;
}

void emit_points(YAML::Emitter& out, const PointList& points) {
  out << YAML::BeginSeq;
  for (std::size_t i = 0; i < points.size(); ++i) emit_point(out, points[i]);
  out << YAML::EndSeq;
}

void emit_doubles(YAML::Emitter& out, const std::vector<double>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << v;
  out << YAML::EndSeq;
}

double exponent(const RunConfig& c, const SetDescriptor& set) { return c.s ? *c.s : static_cast<double>(set.d()); }

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.strategy = strategy_from_string(c.strategy);
  o.seed = c.seed.value_or(0);
  o.restarts = c.restarts;
  o.witness_grid = c.witness_grid;
  o.stage_iterations = c.stage_iterations;
  o.polish_iterations = c.polish_iterations;
  o.inner.grid_n = c.exact_grid;
  return o;
}

EnergyOptions energy_options(const RunConfig& c) {
  EnergyOptions o;
  o.seed = c.seed.value_or(0);
  o.restarts = c.restarts;
  o.max_iterations = c.energy_iterations;
  return o;
}

/// Sorted gaps between consecutive angles of points on a circle.
std::vector<double> gap_spectrum(const SetDescriptor& circle, const PointList& points) {
  std::vector<double> angles;
  for (std::size_t i = 0; i < points.size(); ++i) angles.push_back(chart_params(circle, points[i])[0]);
  std::sort(angles.begin(), angles.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) gaps.push_back(angles[i + 1] - angles[i]);
  gaps.push_back(2.0 * std::numbers::pi - (angles.back() - angles.front()));
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

void run_solve(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out, Status& status) {
  const double s = exponent(c, set);
  out << YAML::Key << "s" << YAML::Value << s;
  out << YAML::Key << "results" << YAML::Value << YAML::BeginSeq;
  for (std::size_t n : c.n) {
    const SolveReport r = solve(set, n, s, solve_options(c));
    if (!r.converged) status.fail("solver did not converge for N = " + std::to_string(n));
    out << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << n;
    out << YAML::Key << "value" << YAML::Value << r.value.to_double();
    out << YAML::Key << "ratio_to_n" << YAML::Value << r.value.to_double() / static_cast<double>(n);
    out << YAML::Key << "witness" << YAML::Value;
    emit_point(out, r.witness);
    out << YAML::Key << "witness_part" << YAML::Value << r.witness_part;
    out << YAML::Key << "strategy" << YAML::Value << to_string(r.strategy);
    out << YAML::Key << "iterations" << YAML::Value << r.iterations;
    out << YAML::Key << "restarts" << YAML::Value << r.restarts;
    out << YAML::Key << "converged" << YAML::Value << r.converged;
    out << YAML::Key << "restart_values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& rec : r.restart_log) out << rec.value;
    out << YAML::EndSeq;
    if (set.kind() == SetKind::Circle) {
      const auto gaps = gap_spectrum(set, r.config.points());
      const double uniform = 2.0 * std::numbers::pi / static_cast<double>(n);
      double dev = 0.0;
      for (double g : gaps) dev = std::max(dev, std::abs(g - uniform));
      out << YAML::Key << "gap_spectrum" << YAML::Value;
      emit_doubles(out, gaps);
      out << YAML::Key << "gap_max_deviation" << YAML::Value << dev;
    }
    out << YAML::Key << "points" << YAML::Value;
    emit_points(out, r.config.points());
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void run_energy(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out, Status& status) {
  const double s = exponent(c, set);
  out << YAML::Key << "s" << YAML::Value << s;
  out << YAML::Key << "results" << YAML::Value << YAML::BeginSeq;
  for (std::size_t n : c.n) {
    const EnergyReport r = minimize(set, n, s, energy_options(c));
    if (!r.converged) status.fail("energy descent did not converge for N = " + std::to_string(n));
    out << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << n;
    out << YAML::Key << "value" << YAML::Value << r.value.to_double();
    out << YAML::Key << "iterations" << YAML::Value << r.iterations;
    out << YAML::Key << "restarts" << YAML::Value << r.restarts;
    out << YAML::Key << "converged" << YAML::Value << r.converged;
    out << YAML::Key << "restart_values" << YAML::Value;
    emit_doubles(out, r.restart_values);
    out << YAML::Key << "points" << YAML::Value;
    emit_points(out, r.config.points());
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void run_asymptotics(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out, RunResult& result) {
  AsymptoticsTable table;
  if (c.table == "polarization") {
    table = polarization_ratio_table(set, c.n, ratio_source_from_string(c.source), solve_options(c), c.target_dim);
  } else if (c.table == "chebyshev") {
    table = chebyshev_ratio_table(set, exponent(c, set), c.n, solve_options(c));
  } else {
    table = energy_ratio_table(set, c.n, energy_options(c));
  }
  out << YAML::Key << "table" << YAML::Value << c.table;
  out << YAML::Key << "source" << YAML::Value << table.source;
  out << YAML::Key << "normalization" << YAML::Value << to_string(table.normalization);
  out << YAML::Key << "d" << YAML::Value << table.d;
  out << YAML::Key << "s" << YAML::Value << table.s;
  out << YAML::Key << "target" << YAML::Value << table.target;
  out << YAML::Key << "rows" << YAML::Value << YAML::BeginSeq;
  for (const auto& row : table.rows) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << row.n;
    out << YAML::Key << "value" << YAML::Value << row.value;
    out << YAML::Key << "ratio" << YAML::Value << row.ratio;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (table.fit) {
    out << YAML::Key << "fit" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "a" << YAML::Value << table.fit->a;
    out << YAML::Key << "b" << YAML::Value << table.fit->b;
    out << YAML::Key << "residual" << YAML::Value << table.fit->residual;
    out << YAML::EndMap;
  }
  out << YAML::Key << "liminf_estimate" << YAML::Value << table.liminf_estimate;
  out << YAML::Key << "limsup_estimate" << YAML::Value << table.limsup_estimate;
  out << YAML::Key << "lower_estimates" << YAML::Value << table.lower_estimates;
  if (c.table == "polarization") {
    const LowerBoundReport bound = lower_bound_report(table, c.bound_tol);
    out << YAML::Key << "bound_flag" << YAML::Value << to_string(bound.flag);
  }
  result.csv = table_csv(table, fnv1a_hex(describe(set)));
  result.plot = emit_plotdata(table);
}

PointList analytic_circle(const SetDescriptor& set, std::size_t n) {
  const PointList unit = equally_spaced_circle(n);
  PointList out(set.m());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const auto p = unit[i];
    Point local(set.m(), 0.0);
    local[0] = set.radius() * p[0];
    local[1] = set.radius() * p[1];
    out.push_back(set.to_ambient(local));
  }
  return out;
}

void run_equidist(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out, Status& status) {
  const double s = exponent(c, set);
  CellFamily family;
  family.count = c.cells;
  const auto cells = make_test_cells(set, family, c.seed.value_or(0));
  const auto parts = part_cells(set);
  std::vector<PointList> configs;
  for (std::size_t n : c.n) {
    if (c.source == "analytic") {
      configs.push_back(analytic_circle(set, n));
    } else {
      const SolveReport r = solve(set, n, s, solve_options(c));
      if (!r.converged) status.fail("solver did not converge for N = " + std::to_string(n));
      configs.push_back(r.config.points());
    }
  }
  const auto report = equidistribution_report(set, configs, cells);
  out << YAML::Key << "source" << YAML::Value << c.source;
  out << YAML::Key << "s" << YAML::Value << s;
  out << YAML::Key << "cells" << YAML::Value << cells.size();
  out << YAML::Key << "rows" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << report.rows[i].n;
    out << YAML::Key << "max_deviation" << YAML::Value << report.rows[i].max_deviation;
    if (set.is_union()) {
      const auto counts = empirical_counts(set, configs[i], parts);
      std::vector<double> masses;
      for (const auto& row : counts.rows) masses.push_back(row.fraction);
      out << YAML::Key << "part_masses" << YAML::Value;
      emit_doubles(out, masses);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "decreasing" << YAML::Value << report.decreasing;
}

void run_alpha(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out) {
  const auto& schedule = c.epsilon.empty() ? kDefaultEpsilon : c.epsilon;
  out << YAML::Key << "d" << YAML::Value << set.d();
  out << YAML::Key << "exclusion" << YAML::Value << c.exclusion;
  out << YAML::Key << "estimates" << YAML::Value << YAML::BeginSeq;
  for (double eps : schedule) {
    const AlphaEstimate a = alpha(set, eps, 64, 64, c.exclusion);
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "epsilon" << YAML::Value << eps;
    out << YAML::Key << "value" << YAML::Value << a.value;
    out << YAML::Key << "arg_r" << YAML::Value << a.arg_r;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  const auto check = alpha_limit_check(set, schedule, c.exclusion);
  out << YAML::Key << "limsup_estimate" << YAML::Value << check.limsup_estimate;
  out << YAML::Key << "passes" << YAML::Value << check.passes;
}

void run_oracle(const RunConfig& c, const SetDescriptor& set, YAML::Emitter& out, Status& status) {
  const double s = exponent(c, set);
  const PointList grid = sample(set, c.grid);
  out << YAML::Key << "s" << YAML::Value << s;
  out << YAML::Key << "grid" << YAML::Value << grid.size();
  out << YAML::Key << "results" << YAML::Value << YAML::BeginSeq;
  for (std::size_t n : c.n) {
    const SolveReport exact = oracle_solve(grid, n, s);
    const SolveReport local = solve_on_grid(grid, n, s, *c.seed, c.restarts);
    const bool equal = exact.value == local.value;
    if (!equal) status.fail("grid solver missed the oracle value for N = " + std::to_string(n));
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << n;
    out << YAML::Key << "oracle" << YAML::Value << exact.value.to_double();
    out << YAML::Key << "grid_solver" << YAML::Value << local.value.to_double();
    out << YAML::Key << "equal" << YAML::Value << equal;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void run_bound_check(const RunConfig& c, YAML::Emitter& out, Status& status) {
  const NearFieldSuite suite = near_field_suite(c.samples, *c.seed);
  out << YAML::Key << "instances" << YAML::Value << suite.instances;
  out << YAML::Key << "holding" << YAML::Value << suite.holding;
  out << YAML::Key << "converged" << YAML::Value << suite.converged;
  out << YAML::Key << "worst_slack" << YAML::Value << suite.worst_slack;
  if (suite.converged != suite.instances) status.fail("quadrature did not converge on every instance");
  if (suite.holding != suite.instances) status.fail("bound fails on some instances");
}

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& opts) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const SetDescriptor set = to_descriptor(config.set);
  RunResult result;
  Status status;

  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kSchemaVersion;
  out << YAML::Key << "tool_version" << YAML::Value << kToolVersion;
  out << YAML::Key << "command" << YAML::Value << to_string(config.command);
  out << YAML::Key << "config_hash" << YAML::Value << config_hash(config);
  out << YAML::Key << "seed" << YAML::Value;
  if (config.seed)
    out << *config.seed;
  else
    out << YAML::Null;
  out << YAML::Key << "set" << YAML::Value << describe(set);
  out << YAML::Key << "config" << YAML::Value << YAML::Load(serialize(config));

  out << YAML::Key << "payload" << YAML::Value << YAML::BeginMap;
  switch (config.command) {
    case Command::Solve: run_solve(config, set, out, status); break;
    case Command::Energy: run_energy(config, set, out, status); break;
    case Command::Asymptotics: run_asymptotics(config, set, out, result); break;
    case Command::Equidist: run_equidist(config, set, out, status); break;
    case Command::Alpha: run_alpha(config, set, out); break;
    case Command::Oracle: run_oracle(config, set, out, status); break;
    case Command::BoundCheck: run_bound_check(config, out, status); break;
  }
  out << YAML::EndMap;

  result.exit_code = status.ok ? kExitOk : kExitNonconvergence;
  out << YAML::Key << "status" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "ok" << YAML::Value << status.ok;
  out << YAML::Key << "message" << YAML::Value << status.message;
  out << YAML::Key << "exit_code" << YAML::Value << result.exit_code;
  out << YAML::EndMap;

  if (!opts.omit_timing) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "wall_seconds" << YAML::Value << wall;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  result.report = std::string(out.c_str()) + "\n";
  return result;
}

std::string strip_timing(const std::string& report) {
  const auto pos = report.find("\ntiming:");
  if (pos == std::string::npos) return report;
  return report.substr(0, pos + 1);
}

void write_outputs(const RunConfig& config, const RunResult& result) {
  auto write = [](const std::string& path, const std::string& text) {
    if (path.empty() || text.empty()) return;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << text;
  };
  write(config.report_path, result.report);
  write(config.csv_path, result.csv);
  write(config.plot_path, result.plot);
}

}  // namespace riesz
