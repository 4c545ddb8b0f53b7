#include "fa4p/scores.hpp"

#include <map>

#include "fa4p/errors.hpp"

namespace fa4p {

namespace {

std::vector<std::size_t> pattern_ids(const ResponseMatrix& data) {
  std::map<std::vector<std::uint8_t>, std::size_t> seen;
  std::vector<std::size_t> ids(data.persons());
  for (std::size_t p = 0; p < data.persons(); ++p) {
    const auto row = data.row(p);
    auto [it, inserted] = seen.try_emplace({row.begin(), row.end()}, seen.size());
    ids[p] = it->second;
  }
  return ids;
}

}  // namespace

NgniScores ngni_scores(const PosteriorDraws& draws) {
  NgniScores out;
  out.items = draws.pooled_z_mean();
  out.totals.assign(draws.persons, 0.0);
  for (std::size_t p = 0; p < draws.persons; ++p) {
    for (std::size_t i = 0; i < draws.items; ++i) out.totals[p] += out.items[p * draws.items + i];
  }
  return out;
}

ScoreTable make_score_table(const FitResult& fit, const ResponseMatrix& data) {
  if (fit.draws.persons != data.persons() || fit.draws.items != data.items()) {
    throw Error(ErrorKind::LengthMismatch, "fit and data have different shapes");
  }
  auto ngni = ngni_scores(fit.draws);
  ScoreTable t;
  t.items = data.items();
  for (std::size_t p = 0; p < data.persons(); ++p) t.observed_total.push_back(data.total(p));
  t.theta = fit.theta_hat;
  t.ngni_items = std::move(ngni.items);
  t.ngni_total = std::move(ngni.totals);
  t.pattern_id = pattern_ids(data);
  return t;
}

std::vector<double> restricted_scores(const ResponseMatrix& data, const SamplerConfig& config,
                                      RestrictedScore which) {
  SamplerConfig restricted = config;
  restricted.model.variant = which == RestrictedScore::NG ? Variant::ThreeP : Variant::NIOnly;
  return ngni_scores(fit(data, restricted).draws).totals;
}

ScoreTable pattern_average(ScoreTable table, const ResponseMatrix& data) {
  if (table.persons() != data.persons()) {
    throw Error(ErrorKind::LengthMismatch, "score table and data have different row counts");
  }
  const auto ids = pattern_ids(data);
  std::size_t groups = 0;
  for (auto id : ids) groups = std::max(groups, id + 1);
  std::vector<double> sums(groups, 0.0);
  std::vector<std::size_t> counts(groups, 0);
  for (std::size_t p = 0; p < ids.size(); ++p) {
    sums[ids[p]] += table.ngni_total[p];
    ++counts[ids[p]];
  }
  for (std::size_t p = 0; p < ids.size(); ++p) {
    table.ngni_total[p] = sums[ids[p]] / static_cast<double>(counts[ids[p]]);
  }
  return table;
}

}  // namespace fa4p
