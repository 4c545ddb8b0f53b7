#pragma once

// Convergence diagnostics for pooled chains and estimate comparison.

#include <span>
#include <string>
#include <vector>

namespace fa4p {

inline constexpr double kDefaultRhatThreshold = 1.05;

struct RhatResult {
  double value = 1.0;
  /// Set when within-chain variance is zero; value is then 1.0 if the chains
  /// also agree with each other.
  bool zero_variance = false;
};

struct EssResult {
  double value = 0.0;
  bool zero_variance = false;
};

/// Split-R-hat: every chain is cut into two halves (a leading draw is dropped
/// for odd lengths, chains are truncated to the shortest) and the classic
/// potential scale reduction is computed across the halves. Needs at least
/// 10 draws per half.
RhatResult split_rhat(std::span<const std::vector<double>> chains);

/// Autocorrelation-based effective sample size of one sequence, with Geyer's
/// truncation at the first negative sum of adjacent-lag pairs. Capped at the
/// sequence length. Needs at least 100 draws.
EssResult ess(std::span<const double> trace);

/// Linearly interpolated quantile (R type 7) of an unsorted sample.
double quantile(std::vector<double> values, double prob);

/// Mean over items of squared differences.
double mse_compare(std::span<const double> a, std::span<const double> b);

struct ParameterTraces {
  std::string name;
  std::vector<std::vector<double>> chains;
};

struct ParameterSummary {
  std::string name;
  double rhat = 1.0;
  /// Sum of per-chain ESS; NaN when chains are shorter than 100 draws.
  double ess = 0.0;
  double median = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  bool zero_variance = false;
};

struct DiagnosticsReport {
  std::vector<ParameterSummary> parameters;
  double rhat_threshold = kDefaultRhatThreshold;
  /// Names of parameters whose R-hat exceeds the threshold.
  std::vector<std::string> flagged;

  const ParameterSummary* find(const std::string& name) const;
};

/// Builds the report. Parameters whose chains are too short for split-R-hat
/// get rhat = NaN.
DiagnosticsReport diagnose(std::span<const ParameterTraces> traces,
                           double rhat_threshold = kDefaultRhatThreshold);

}  // namespace fa4p
