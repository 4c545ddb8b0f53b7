#include "fa4p/simulate.hpp"

#include "fa4p/errors.hpp"

namespace fa4p {

ResponseMatrix SimulatedDataset::matrix() const {
  return ResponseMatrix(persons, items, responses);
}

SimulatedDataset simulate(std::span<const FAItemParams> items, std::size_t n, LinkFunction link,
                          std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::Config, "simulate: n must be at least 1");
  if (items.empty()) throw Error(ErrorKind::Config, "simulate: need at least one item");
  const std::size_t m = items.size();

  SimulatedDataset out;
  out.persons = n;
  out.items = m;
  out.link = link;
  out.seed = seed;
  out.true_items.assign(items.begin(), items.end());
  out.true_theta.resize(n);
  out.true_z.resize(n * m);
  out.true_ystar.resize(n * m);
  out.responses.resize(n * m);

  for (std::size_t p = 0; p < n; ++p) {
    StreamRng person_stream(derive_seed(seed, p, m));
    const double theta = std_normal(person_stream);
    out.true_theta[p] = theta;
    for (std::size_t i = 0; i < m; ++i) {
      const FAItemParams& item = items[i];
      StreamRng cell(derive_seed(seed, p, i));
      const double ystar = item.alpha() * theta + draw_error(cell, link, item.uniqueness());
      const std::uint8_t z = ystar >= item.tau() ? 1 : 0;
      const std::uint8_t y = bernoulli(cell, z ? item.d() : item.c()) ? 1 : 0;
      out.true_ystar[p * m + i] = ystar;
      out.true_z[p * m + i] = z;
      out.responses[p * m + i] = y;
    }
  }
  return out;
}

std::map<std::uint64_t, double> empirical_pattern_freq(const SimulatedDataset& dataset) {
  if (dataset.items > kMaxEnumerationItems) {
    throw Error(ErrorKind::EnumerationLimit, "pattern frequencies support at most 12 items");
  }
  std::map<std::uint64_t, std::size_t> counts;
  for (std::size_t p = 0; p < dataset.persons; ++p) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < dataset.items; ++i) {
      if (dataset.responses[p * dataset.items + i]) key |= std::uint64_t{1} << i;
    }
    ++counts[key];
  }
  std::map<std::uint64_t, double> freq;
  const double n = static_cast<double>(dataset.persons);
  for (const auto& [key, count] : counts) freq[key] = static_cast<double>(count) / n;
  return freq;
}

}  // namespace fa4p
