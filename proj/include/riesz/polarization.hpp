#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riesz/riesz_core.hpp"

namespace riesz {

enum class Strategy { SmoothedAscent, Exchange, Anneal };

std::string to_string(Strategy s);
/// Accepts "smoothed_ascent", "exchange", "anneal"; throws otherwise.
Strategy strategy_from_string(const std::string& name);

struct SolveOptions {
  Strategy strategy = Strategy::SmoothedAscent;
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  /// Softmin temperatures, relative to the current minimum value.
  std::vector<double> temperatures = {10.0, 30.0, 100.0, 300.0};
  /// Witness grid of the surrogate; 0 selects max(1024, 16 N).
  std::size_t witness_grid = 0;
  /// Ascent iterations per temperature stage.
  int stage_iterations = 150;
  /// Exchange / anneal move budget.
  int moves = 400;
  /// Exact active-set ascent iterations after every strategy.
  int polish_iterations = 200;
  MinPotentialOptions inner;
  /// Starting configuration for restart 0 (default: sample(set, N)).
  std::optional<PointList> initial;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct SolveReport {
  Configuration config;
  /// Exact re-scored M^s(config; A), a lower bound for M^s_N(A).
  ExtendedReal value;
  Point witness;
  std::size_t witness_part = 0;
  Strategy strategy = Strategy::SmoothedAscent;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::size_t restarts = 0;
  bool converged = true;
  std::size_t grid_size = 0;
  double refine_gain = 0.0;
  std::vector<RestartRecord> restart_log;
};

/// Best-found maximizer of M^s(ω; A) over N-point multisets of `set`.
SolveReport solve(const SetDescriptor& set, std::size_t n, double s, const SolveOptions& opts = {});

/// Value of a configuration drawn from a finite grid: the minimum over grid
/// points of the potential, where grid points occupied by the configuration
/// are skipped (+inf when every grid point is occupied). Values keep 40
/// mantissa bits so that congruent configurations on symmetric grids tie.
ExtendedReal grid_value(const PointList& grid, const std::vector<std::size_t>& indices, double s);

/// Local search restricted to the grid: single and paired index swaps, with
/// multiple seeded restarts.
SolveReport solve_on_grid(const PointList& grid, std::size_t n, double s, std::uint64_t seed,
                          std::size_t restarts = 16);

/// Exhaustive maximin over all multisets of size n from the grid.
/// Guard: |grid| <= 64 and n <= 4.
SolveReport oracle_solve(const PointList& grid, std::size_t n, double s);

/// M^s of N equally spaced points on the unit circle, evaluated at angle pi/N.
double equally_spaced_value(std::size_t n, double s);
/// N equally spaced points on the unit circle starting at angle 0.
PointList equally_spaced_circle(std::size_t n);

/// One exact ascent run from a given start; exposed for tests and warm starts.
/// Returns the improved configuration and its exact value.
std::pair<PointList, PotentialValue> polish(const SetDescriptor& set, PointList points, double s,
                                            const SolveOptions& opts, int* iterations = nullptr,
                                            bool* converged = nullptr);

}  // namespace riesz
