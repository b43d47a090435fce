#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riesz/asymptotics.hpp"
#include "riesz/riesz_core.hpp"

namespace riesz {

struct EnergyOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 8;
  int max_iterations = 4000;
  /// Initial step as a fraction of (measure / N)^{1/d}.
  double step_fraction = 0.1;
  double armijo = 1e-4;
  /// Starting configuration for restart 0 (default: sample(set, N)).
  std::optional<PointList> initial;
};

struct EnergyReport {
  Configuration config;
  /// Energy of the returned configuration, an upper bound for the minimum.
  ExtendedReal value;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::size_t restarts = 0;
  bool converged = true;
  /// Energies after each accepted step of the winning restart.
  std::vector<double> trace;
  std::vector<double> restart_values;
};

/// Projected gradient descent with Armijo backtracking, best of several
/// restarts.
EnergyReport minimize(const SetDescriptor& set, std::size_t n, double s, const EnergyOptions& opts = {});

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// Set when the energy side was not an analytic configuration; the check is
  /// then informational only.
  bool advisory = false;
};

/// lhs = polarization value, rhs = energy / (N - 1); holds when
/// lhs >= rhs - 1e-9.
InequalityCheck polarization_energy_inequality(std::size_t n, double pol_value, double energy_value,
                                               bool analytic = true);

/// Minimal energies normalized by N^2 ln N (s = d).
AsymptoticsTable energy_ratio_table(const SetDescriptor& set, const std::vector<std::size_t>& ns,
                                    const EnergyOptions& opts = {});

}  // namespace riesz
