#include "riesz/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace riesz {

namespace {

const std::set<std::string> kTopKeys = {
    "command",   "set",          "n",           "s",       "strategy",         "seed",
    "restarts",  "source",       "table",       "target_dim", "epsilon",       "exclusion",
    "samples",   "cells",        "grid",        "witness_grid", "exact_grid",  "stage_iterations",
    "polish_iterations", "energy_iterations", "bound_tol", "report", "csv",     "plot"};

const std::set<std::string> kSetKeys = {"kind", "d", "radius", "extent", "length", "side", "center", "ambient", "parts"};

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.line < 0) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

template <class T>
T as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for key '" + key + "'" + where(node));
  }
}

SetSpec parse_set(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) {
    try {
      return preset_set(node.as<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("key '" + key + "': " + e.what() + where(node));
    }
  }
  if (!node.IsMap()) throw ConfigError("key '" + key + "' must be a set name or a mapping" + where(node));
  SetSpec spec;
  bool have_radius = false, have_extent = false;
  for (const auto& item : node) {
    const std::string k = item.first.as<std::string>();
    const std::string full = key + "." + k;
    if (!kSetKeys.count(k)) throw ConfigError("unknown key '" + full + "'" + where(item.first));
    const YAML::Node& v = item.second;
    if (k == "kind") {
      spec.kind = as<std::string>(v, full);
      if (spec.kind != "union") {
        try {
          set_kind_from_string(spec.kind);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("key '" + full + "': " + e.what() + where(v));
        }
      }
    } else if (k == "d") {
      spec.d = as<int>(v, full);
    } else if (k == "radius") {
      spec.radius = as<double>(v, full);
      have_radius = true;
    } else if (k == "extent") {
      spec.extent = as<double>(v, full);
      have_extent = true;
    } else if (k == "length") {
      spec.length = as<double>(v, full);
    } else if (k == "side") {
      spec.side = as<double>(v, full);
    } else if (k == "center") {
      spec.center = as<std::vector<double>>(v, full);
    } else if (k == "ambient") {
      spec.ambient = as<std::size_t>(v, full);
    } else if (k == "parts") {
      if (!v.IsSequence()) throw ConfigError("key '" + full + "' must be a list" + where(v));
      for (std::size_t i = 0; i < v.size(); ++i) spec.parts.push_back(parse_set(v[i], full + "[" + std::to_string(i) + "]"));
    }
  }
  (void)have_radius;
  (void)have_extent;
  return spec;
}

void emit_set(YAML::Emitter& out, const SetSpec& spec) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << spec.kind;
  out << YAML::Key << "d" << YAML::Value << spec.d;
  out << YAML::Key << "radius" << YAML::Value << spec.radius;
  out << YAML::Key << "extent" << YAML::Value << spec.extent;
  out << YAML::Key << "length" << YAML::Value << spec.length;
  out << YAML::Key << "side" << YAML::Value << spec.side;
  out << YAML::Key << "center" << YAML::Value << YAML::Flow << spec.center;
  out << YAML::Key << "ambient" << YAML::Value << spec.ambient;
  if (!spec.parts.empty()) {
    out << YAML::Key << "parts" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : spec.parts) emit_set(out, p);
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

bool stochastic(const RunConfig& c) {
  switch (c.command) {
    case Command::Solve:
    case Command::Energy:
    case Command::Oracle:
    case Command::BoundCheck: return true;
    case Command::Equidist: return c.source == "solver";
    case Command::Asymptotics: return c.source == "solver" || c.table != "polarization";
    case Command::Alpha: return false;
  }
  return true;
}

}  // namespace

SetSpec preset_set(const std::string& name) {
  SetSpec s;
  if (name == "disk") {
    s.kind = "ball";
    s.d = 2;
    return s;
  }
  if (name == "two-circles" || name == "tangent-circles") {
    const double offset = name == "two-circles" ? 3.0 : 1.0;
    SetSpec a, b;
    a.center = {name == "two-circles" ? 0.0 : -offset, 0.0};
    b.center = {offset, 0.0};
    s.kind = "union";
    s.parts = {a, b};
    return s;
  }
  if (name == "union") throw std::invalid_argument("a union needs a parts list");
  set_kind_from_string(name);
  s.kind = name;
  if (name == "arc") s.extent = 1.0;
  return s;
}

SetDescriptor to_descriptor(const SetSpec& spec) {
  SetDescriptor base;
  if (spec.kind == "union") {
    if (spec.parts.size() < 2) throw std::invalid_argument("a union needs at least two parts");
    std::vector<SetDescriptor> parts;
    for (const auto& p : spec.parts) parts.push_back(to_descriptor(p));
    base = SetDescriptor::union_of(std::move(parts));
  } else {
    switch (set_kind_from_string(spec.kind)) {
      case SetKind::Circle: base = SetDescriptor::circle(spec.radius); break;
      case SetKind::Arc: base = SetDescriptor::arc(spec.radius, spec.extent); break;
      case SetKind::Segment: base = SetDescriptor::segment(spec.length); break;
      case SetKind::Ball: base = SetDescriptor::ball(spec.d > 0 ? spec.d : 3, spec.radius); break;
      case SetKind::Cube: base = SetDescriptor::cube(spec.d > 0 ? spec.d : 2, spec.side); break;
      case SetKind::Sphere: base = SetDescriptor::sphere(spec.d > 0 ? spec.d : 2, spec.radius); break;
      case SetKind::Union: break;
    }
  }
  const std::size_t m = std::max({base.m(), spec.ambient, spec.center.size()});
  if (m > base.m()) base = base.embedded(m);
  if (!spec.center.empty()) {
    Point c = spec.center;
    c.resize(m, 0.0);
    base = base.placed(c);
  }
  return base;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Energy: return "energy";
    case Command::Asymptotics: return "asymptotics";
    case Command::Equidist: return "equidist";
    case Command::Alpha: return "alpha";
    case Command::Oracle: return "oracle";
    case Command::BoundCheck: return "bound-check";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (auto c : {Command::Solve, Command::Energy, Command::Asymptotics, Command::Equidist, Command::Alpha,
                 Command::Oracle, Command::BoundCheck})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown command '" + name + "'");
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  auto number = [&](const std::string& t) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != t.size() || t.find('-') != std::string::npos || v == 0)
      throw ConfigError("key 'n': '" + t + "' is not a positive integer");
    return static_cast<std::size_t>(v);
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::size_t lo = number(text.substr(0, dots));
    const std::size_t hi = number(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("key 'n': empty range '" + text + "'");
    for (std::size_t v = lo; v <= hi; v *= 2) out.push_back(v);
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(number(item));
  }
  if (out.empty()) throw ConfigError("key 'n': empty list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.mark.line + 1) + "): " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  RunConfig c;
  bool have_command = false;
  for (const auto& item : root) {
    const std::string k = item.first.as<std::string>();
    if (!kTopKeys.count(k)) throw ConfigError("unknown key '" + k + "'" + where(item.first));
    const YAML::Node& v = item.second;
    if (k == "command") {
      c.command = command_from_string(as<std::string>(v, k));
      have_command = true;
    } else if (k == "set") {
      c.set = parse_set(v, k);
    } else if (k == "n") {
      if (v.IsSequence()) {
        std::string joined;
        for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + as<std::string>(v[i], k);
        c.n = parse_n_list(joined);
      } else {
        c.n = parse_n_list(as<std::string>(v, k));
      }
    } else if (k == "s") {
      c.s = as<double>(v, k);
    } else if (k == "strategy") {
      c.strategy = as<std::string>(v, k);
    } else if (k == "seed") {
      c.seed = as<std::uint64_t>(v, k);
    } else if (k == "restarts") {
      c.restarts = as<std::size_t>(v, k);
    } else if (k == "source") {
      c.source = as<std::string>(v, k);
    } else if (k == "table") {
      c.table = as<std::string>(v, k);
    } else if (k == "target_dim") {
      c.target_dim = as<int>(v, k);
    } else if (k == "epsilon") {
      c.epsilon = v.IsSequence() ? as<std::vector<double>>(v, k) : std::vector<double>{as<double>(v, k)};
    } else if (k == "exclusion") {
      c.exclusion = as<double>(v, k);
    } else if (k == "samples") {
      c.samples = as<std::size_t>(v, k);
    } else if (k == "cells") {
      c.cells = as<std::size_t>(v, k);
    } else if (k == "grid") {
      c.grid = as<std::size_t>(v, k);
    } else if (k == "witness_grid") {
      c.witness_grid = as<std::size_t>(v, k);
    } else if (k == "exact_grid") {
      c.exact_grid = as<std::size_t>(v, k);
    } else if (k == "stage_iterations") {
      c.stage_iterations = as<int>(v, k);
    } else if (k == "polish_iterations") {
      c.polish_iterations = as<int>(v, k);
    } else if (k == "energy_iterations") {
      c.energy_iterations = as<int>(v, k);
    } else if (k == "bound_tol") {
      c.bound_tol = as<double>(v, k);
    } else if (k == "report") {
      c.report_path = as<std::string>(v, k);
    } else if (k == "csv") {
      c.csv_path = as<std::string>(v, k);
    } else if (k == "plot") {
      c.plot_path = as<std::string>(v, k);
    }
  }
  if (!have_command) throw ConfigError("missing key 'command'");
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  SetDescriptor set;
  try {
    set = to_descriptor(c.set);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'set': ") + e.what());
  }
  const bool needs_n = c.command != Command::Alpha && c.command != Command::BoundCheck;
  if (needs_n && c.n.empty()) throw ConfigError("missing key 'n'");
  for (std::size_t v : c.n)
    if (v < 1) throw ConfigError("key 'n': values must be positive");
  if (c.s && !(*c.s > 0)) throw ConfigError("key 's': must be positive");
  if (c.strategy != "smoothed_ascent" && c.strategy != "exchange" && c.strategy != "anneal")
    throw ConfigError("key 'strategy': unknown strategy '" + c.strategy + "'");
  if (c.source != "solver" && c.source != "analytic") throw ConfigError("key 'source': unknown source '" + c.source + "'");
  if (c.table != "polarization" && c.table != "chebyshev" && c.table != "energy")
    throw ConfigError("key 'table': unknown table '" + c.table + "'");
  if (c.restarts < 1) throw ConfigError("key 'restarts': must be at least 1");
  if (c.samples < 1) throw ConfigError("key 'samples': must be at least 1");
  if (c.cells < 1) throw ConfigError("key 'cells': must be at least 1");
  if (c.exclusion < 0) throw ConfigError("key 'exclusion': must be non-negative");
  if (stochastic(c) && !c.seed) throw ConfigError("missing key 'seed' (required for " + to_string(c.command) + ")");
  if (c.command == Command::Energy || (c.command == Command::Asymptotics && c.table != "chebyshev"))
    for (std::size_t v : c.n)
      if (v < 2) throw ConfigError("key 'n': values must be at least 2 for " + to_string(c.command));
  if (c.source == "analytic" && (c.command == Command::Asymptotics || c.command == Command::Equidist) &&
      set.kind() != SetKind::Circle)
    throw ConfigError("key 'source': analytic values need a circle");
  if (c.command == Command::Oracle) {
    if (c.grid < 1 || c.grid > 64) throw ConfigError("key 'grid': must lie in [1, 64]");
    for (std::size_t v : c.n)
      if (v > 4) throw ConfigError("key 'n': the oracle handles N <= 4");
  }
  if (!c.epsilon.empty()) {
    if (c.epsilon.size() < 3) throw ConfigError("key 'epsilon': need at least three values");
    for (std::size_t i = 0; i < c.epsilon.size(); ++i)
      if (!(c.epsilon[i] > 0) || (i > 0 && !(c.epsilon[i] < c.epsilon[i - 1])))
        throw ConfigError("key 'epsilon': values must be positive and strictly decreasing");
  }
}

std::string serialize(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "command" << YAML::Value << to_string(c.command);
  out << YAML::Key << "set" << YAML::Value;
  emit_set(out, c.set);
  out << YAML::Key << "n" << YAML::Value << YAML::Flow << c.n;
  if (c.s) out << YAML::Key << "s" << YAML::Value << *c.s;
  out << YAML::Key << "strategy" << YAML::Value << c.strategy;
  if (c.seed) out << YAML::Key << "seed" << YAML::Value << *c.seed;
  out << YAML::Key << "restarts" << YAML::Value << c.restarts;
  out << YAML::Key << "source" << YAML::Value << c.source;
  out << YAML::Key << "table" << YAML::Value << c.table;
  out << YAML::Key << "target_dim" << YAML::Value << c.target_dim;
  out << YAML::Key << "epsilon" << YAML::Value << YAML::Flow << c.epsilon;
  out << YAML::Key << "exclusion" << YAML::Value << c.exclusion;
  out << YAML::Key << "samples" << YAML::Value << c.samples;
  out << YAML::Key << "cells" << YAML::Value << c.cells;
  out << YAML::Key << "grid" << YAML::Value << c.grid;
  out << YAML::Key << "witness_grid" << YAML::Value << c.witness_grid;
  out << YAML::Key << "exact_grid" << YAML::Value << c.exact_grid;
  out << YAML::Key << "stage_iterations" << YAML::Value << c.stage_iterations;
  out << YAML::Key << "polish_iterations" << YAML::Value << c.polish_iterations;
  out << YAML::Key << "energy_iterations" << YAML::Value << c.energy_iterations;
  out << YAML::Key << "bound_tol" << YAML::Value << c.bound_tol;
  out << YAML::Key << "report" << YAML::Value << c.report_path;
  out << YAML::Key << "csv" << YAML::Value << c.csv_path;
  out << YAML::Key << "plot" << YAML::Value << c.plot_path;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& config) {
  RunConfig c = config;
  c.report_path.clear();
  c.csv_path.clear();
  c.plot_path.clear();
  return fnv1a_hex(serialize(c));
}

}  // namespace riesz
