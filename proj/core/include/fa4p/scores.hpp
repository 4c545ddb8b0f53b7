#pragma once

// Guessing- and inattention-adjusted person scores.

#include <cstddef>
#include <optional>
#include <vector>

#include "fa4p/response_matrix.hpp"
#include "fa4p/sampler.hpp"

namespace fa4p {

struct ScoreTable {
  std::size_t items = 0;
  std::vector<int> observed_total;
  std::vector<double> theta;
  std::vector<double> ngni_items;  // persons x items, posterior means of Z
  std::vector<double> ngni_total;
  std::optional<std::vector<double>> ng_total;
  std::optional<std::vector<double>> ni_total;
  /// Index of the person's response pattern, in order of first appearance.
  std::vector<std::size_t> pattern_id;

  std::size_t persons() const noexcept { return ngni_total.size(); }
};

struct NgniScores {
  std::vector<double> items;  // persons x items
  std::vector<double> totals;
};

/// Pooled posterior means of Z and their row sums.
NgniScores ngni_scores(const PosteriorDraws& draws);

/// Assembles the per-person table from a fit of `data`.
ScoreTable make_score_table(const FitResult& fit, const ResponseMatrix& data);

enum class RestrictedScore { NG, NI };

/// NG totals come from a refit with d pinned to 1 (3P), NI totals from a
/// refit with c pinned to 0 (inattention only). The link and all sampler
/// settings are taken from `config`.
std::vector<double> restricted_scores(const ResponseMatrix& data, const SamplerConfig& config,
                                      RestrictedScore which);

/// Replaces each ngni_total by the mean over persons sharing its exact
/// response pattern.
ScoreTable pattern_average(ScoreTable table, const ResponseMatrix& data);

}  // namespace fa4p
