#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riesz/geometry.hpp"
#include "riesz/polarization.hpp"

namespace riesz {

enum class Normalization { NLogN, N2LogN, N };

std::string to_string(Normalization n);
/// N ln N, N^2 ln N or N.
double normalization_factor(Normalization n, std::size_t count);

struct AsymptoticsRow {
  std::size_t n = 0;
  double value = 0.0;
  double ratio = 0.0;
};

/// Least-squares fit ratio(N) = a + b / ln N.
struct Fit {
  double a = 0.0;
  double b = 0.0;
  /// Root mean square of the fit residuals.
  double residual = 0.0;
};

struct AsymptoticsTable {
  std::string set_name;
  std::string source;
  Normalization normalization = Normalization::NLogN;
  /// Dimension used in the target beta_d / H_d(A) (may differ from set.d()).
  int d = 1;
  double s = 1.0;
  std::uint64_t seed = 0;
  std::vector<AsymptoticsRow> rows;
  /// beta_d / H_d(A); +inf when H_d(A) = 0; NaN for the N normalization.
  double target = 0.0;
  std::optional<Fit> fit;
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
  /// Solver values are lower bounds, so ratios are lower estimates.
  bool lower_estimates = false;
};

/// beta_d / H_d(A), or +inf when H_d(A) = 0.
double limit_target(const SetDescriptor& set, int d);

/// Fills ratios, tail estimates and (with at least three distinct N) the fit.
/// Rows are sorted by N; N must be strictly increasing after sorting.
void finalize_table(AsymptoticsTable& table);

/// Throws std::invalid_argument for fewer than three rows or a single
/// distinct N. Rows are fitted in N order, so the result does not depend on
/// their order in the table.
Fit extrapolate(const AsymptoticsTable& table);

enum class RatioSource { AnalyticCircle, Solver };
std::string to_string(RatioSource s);
RatioSource ratio_source_from_string(const std::string& name);

/// M^d_N(A) / (N ln N) with s = d. `d` defaults to set.d(); passing a larger
/// dimension gives the zero-measure (infinite target) mode. AnalyticCircle
/// requires a circle and uses equally spaced points.
AsymptoticsTable polarization_ratio_table(const SetDescriptor& set, const std::vector<std::size_t>& ns,
                                          RatioSource source, const SolveOptions& opts = {}, int d = 0);

/// M^s_N(A) / N from the solver.
AsymptoticsTable chebyshev_ratio_table(const SetDescriptor& set, double s, const std::vector<std::size_t>& ns,
                                       const SolveOptions& opts = {});

enum class BoundFlag { Consistent, Inconsistent, Diverging, Undetermined };
std::string to_string(BoundFlag f);

struct LowerBoundReport {
  double tail_min_ratio = 0.0;
  double target = 0.0;
  double extrapolated = 0.0;
  BoundFlag flag = BoundFlag::Undetermined;
};

/// Consistent when the extrapolated limit is at least target * (1 - tol).
/// With an infinite target the table is diverging when its last ratio is at
/// least twice its first.
LowerBoundReport lower_bound_report(const AsymptoticsTable& table, double tol = 0.05);

/// Columns N,value,ratio,target,model_fit, preceded by comment lines with the
/// set hash and seed.
std::string table_csv(const AsymptoticsTable& table, const std::string& set_hash);

/// Two columns "N ratio", then a target row "# target" style line; throws on an
/// empty table.
std::string emit_plotdata(const AsymptoticsTable& table);

/// Decimal with 17 significant digits; "inf" and "nan" spelled out.
std::string format_number(double v);

}  // namespace riesz
