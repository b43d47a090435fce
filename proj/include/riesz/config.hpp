#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riesz/geometry.hpp"

namespace riesz {

/// Raised for invalid configurations; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set description as written in a config file.
struct SetSpec {
  std::string kind = "circle";
  int d = 0;  // 0: the kind's default
  double radius = 1.0;
  double extent = 0.0;
  double length = 2.0;
  double side = 1.0;
  std::vector<double> center;
  std::size_t ambient = 0;  // 0: the kind's natural dimension
  std::vector<SetSpec> parts;

  friend bool operator==(const SetSpec&, const SetSpec&) = default;
};

/// Named sets accepted by --set: every catalog kind plus "disk",
/// "two-circles" (unit circles centered at (0,0) and (3,0)) and
/// "tangent-circles" (unit circles centered at (-1,0) and (1,0)).
SetSpec preset_set(const std::string& name);

SetDescriptor to_descriptor(const SetSpec& spec);

enum class Command { Solve, Energy, Asymptotics, Equidist, Alpha, Oracle, BoundCheck };

std::string to_string(Command c);
Command command_from_string(const std::string& name);

struct RunConfig {
  Command command = Command::Solve;
  SetSpec set;
  std::vector<std::size_t> n;
  std::optional<double> s;
  std::string strategy = "smoothed_ascent";
  std::optional<std::uint64_t> seed;
  std::size_t restarts = 16;
  /// asymptotics: "analytic" or "solver"; equidist: "analytic" or "solver".
  std::string source = "solver";
  /// asymptotics: "polarization", "chebyshev" or "energy".
  std::string table = "polarization";
  /// Dimension for the polarization target (0: the set's own).
  int target_dim = 0;
  std::vector<double> epsilon;
  double exclusion = 0.0;
  std::size_t samples = 200;
  std::size_t cells = 100;
  /// oracle: grid size.
  std::size_t grid = 12;
  // Tolerance and budget overrides.
  std::size_t witness_grid = 0;
  std::size_t exact_grid = 0;
  int stage_iterations = 150;
  int polish_iterations = 200;
  int energy_iterations = 4000;
  double bound_tol = 0.05;
  std::string report_path;
  std::string csv_path;
  std::string plot_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// "64,128,256" or "64..8192" (doubling). Returns an ascending list without
/// repeats.
std::vector<std::size_t> parse_n_list(const std::string& text);

/// Parses YAML text into a validated config; throws ConfigError.
RunConfig parse_config(const std::string& text);
/// Canonical YAML text; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);
/// Validation shared by the file and flag front ends; throws ConfigError.
void validate(const RunConfig& config);

/// FNV-1a 64-bit hash in hex.
std::string fnv1a_hex(const std::string& text);
std::string config_hash(const RunConfig& config);

}  // namespace riesz
