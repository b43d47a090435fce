#pragma once

#include <string>

#include "riesz/config.hpp"

namespace riesz {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode { kExitOk = 0, kExitInvalidConfig = 2, kExitNonconvergence = 3 };

struct RunOptions {
  /// Leaves out the trailing timing section, making reports byte-comparable.
  bool omit_timing = false;
};

struct RunResult {
  /// YAML report: header, config, command payload, status and timing.
  std::string report;
  /// Asymptotics only: CSV table and plot data.
  std::string csv;
  std::string plot;
  int exit_code = kExitOk;
};

/// Executes a validated config. Throws ConfigError for configs that fail
/// validation.
RunResult run(const RunConfig& config, const RunOptions& opts = {});

/// The report without its timing section.
std::string strip_timing(const std::string& report);

/// Writes the report, CSV and plot files named in the config (empty paths
/// are skipped).
void write_outputs(const RunConfig& config, const RunResult& result);

}  // namespace riesz
