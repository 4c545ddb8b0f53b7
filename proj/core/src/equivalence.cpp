#include "fa4p/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fa4p/errors.hpp"
#include "fa4p/random.hpp"
#include "fa4p/simulate.hpp"

namespace fa4p {

namespace {

double fa_argument(const FAItemParams& p, double theta) {
  return (p.alpha() * theta - p.tau()) / p.uniqueness();
}

double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace

EquivalenceReport EquivalenceReport::make(std::string name, double discrepancy,
                                          double tolerance, std::string sample) {
  return {std::move(name), discrepancy, tolerance, discrepancy <= tolerance, std::move(sample)};
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int k = -24; k <= 24; ++k) grid.push_back(0.25 * k);
  return grid;
}

EquivalenceReport check_conditional_equivalence(std::span<const FAItemParams> items,
                                                LinkFunction link,
                                                std::span<const double> theta_grid) {
  double worst = 0.0;
  for (const auto& fa : items) {
    const IRTItemParams irt = fa_to_irt(fa);
    for (double theta : theta_grid) {
      worst = std::max(worst, std::abs(irc_fa(fa, theta, link) - irc_irt(irt, theta, link)));
    }
  }
  std::ostringstream sample;
  sample << items.size() << " items x " << theta_grid.size() << " theta values, "
         << link_name(link);
  return EquivalenceReport::make("conditional", worst, kConditionalTolerance, sample.str());
}

EquivalenceReport check_marginal_equivalence(std::span<const FAItemParams> items,
                                             LinkFunction link, const QuadratureRule& rule) {
  const std::size_t m = items.size();
  if (m == 0 || m > 3) {
    throw Error(ErrorKind::EnumerationLimit, "marginal check enumerates patterns for 1 to 3 items");
  }
  std::vector<IRTItemParams> irt;
  for (const auto& fa : items) irt.push_back(fa_to_irt(fa));
  double worst = 0.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
    const auto y = pattern_from_index(k, m);
    const double fa_side = marginal_pattern_prob_fa_enum(y, items, link, rule);
    const double irt_side = marginal_pattern_prob_irt(y, irt, link, rule);
    worst = std::max(worst, std::abs(fa_side - irt_side));
  }
  std::ostringstream sample;
  sample << m << " items, " << (1U << m) << " patterns, " << rule.size() << "-node rule, "
         << link_name(link);
  return EquivalenceReport::make("marginal", worst, kMarginalTolerance, sample.str());
}

EquivalenceReport check_marginal_normalization(std::span<const FAItemParams> items,
                                               LinkFunction link, const QuadratureRule& rule) {
  const std::size_t m = items.size();
  if (m == 0 || m > kMaxEnumerationItems) {
    throw Error(ErrorKind::EnumerationLimit, "normalization check supports 1 to 12 items");
  }
  std::vector<IRTItemParams> irt;
  for (const auto& fa : items) irt.push_back(fa_to_irt(fa));
  double fa_sum = 0.0;
  double irt_sum = 0.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
    const auto y = pattern_from_index(k, m);
    fa_sum += marginal_pattern_prob_fa_enum(y, items, link, rule);
    irt_sum += marginal_pattern_prob_irt(y, irt, link, rule);
  }
  std::ostringstream sample;
  sample << m << " items, " << rule.size() << "-node rule, " << link_name(link);
  return EquivalenceReport::make("marginal-normalization",
                                 std::max(std::abs(fa_sum - 1.0), std::abs(irt_sum - 1.0)),
                                 kNormalizationTolerance, sample.str());
}

EquivalenceReport check_lemma_a1(const FAItemParams& item, LinkFunction link, double theta,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 10000) throw Error(ErrorKind::Config, "lemma-a1 needs at least 10^4 samples");
  Engine rng(derive_seed(seed, 0xA1));
  const double u = item.uniqueness();
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    const double ystar = item.alpha() * theta + draw_error(rng, link, u);
    if (ystar >= item.tau()) ++hits;
  }
  const double expected = link_cdf(link, fa_argument(item, theta));
  const double freq = static_cast<double>(hits) / static_cast<double>(n_samples);
  std::ostringstream sample;
  sample << n_samples << " draws at theta=" << theta << ", " << link_name(link);
  return EquivalenceReport::make("lemma-a1", std::abs(freq - expected),
                                 kMonteCarloBand * binomial_se(expected, n_samples),
                                 sample.str());
}

EquivalenceReport check_sum_product(std::span<const FAItemParams> items,
                                    std::span<const std::uint8_t> pattern, double theta,
                                    LinkFunction link) {
  const std::size_t m = items.size();
  if (pattern.size() != m) throw Error(ErrorKind::LengthMismatch, "pattern/items length mismatch");
  if (m > kMaxEnumerationItems) {
    throw Error(ErrorKind::EnumerationLimit, "sum-product check supports at most 12 items");
  }
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = link_cdf(link, fa_argument(items[i], theta));

  double sum_of_products = 0.0;
  for (std::uint64_t zi = 0; zi < (std::uint64_t{1} << m); ++zi) {
    double term = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto z = static_cast<std::uint8_t>((zi >> i) & 1U);
      term *= response_given_latent(pattern[i], z, items[i].c(), items[i].d()) *
              (z ? f[i] : 1.0 - f[i]);
    }
    sum_of_products += term;
  }
  double product_of_sums = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    product_of_sums *=
        response_given_latent(pattern[i], 0, items[i].c(), items[i].d()) * (1.0 - f[i]) +
        response_given_latent(pattern[i], 1, items[i].c(), items[i].d()) * f[i];
  }
  std::ostringstream sample;
  sample << m << " items at theta=" << theta << ", " << link_name(link);
  return EquivalenceReport::make("lemma-a2", std::abs(sum_of_products - product_of_sums),
                                 kSumProductTolerance, sample.str());
}

EquivalenceReport check_conditional_independence(std::span<const FAItemParams> items,
                                                 LinkFunction link, double theta,
                                                 std::uint64_t n_samples, std::uint64_t seed) {
  if (items.size() != 2) throw Error(ErrorKind::Config, "lemma-a3 uses exactly two items");
  if (n_samples < 100000) throw Error(ErrorKind::Config, "lemma-a3 needs at least 10^5 samples");
  Engine rng(derive_seed(seed, 0xA3));
  std::uint64_t both = 0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    bool joint = true;
    for (const auto& item : items) {
      const double ystar = item.alpha() * theta + draw_error(rng, link, item.uniqueness());
      joint = joint && ystar >= item.tau();
    }
    if (joint) ++both;
  }
  const double expected = link_cdf(link, fa_argument(items[0], theta)) *
                          link_cdf(link, fa_argument(items[1], theta));
  const double freq = static_cast<double>(both) / static_cast<double>(n_samples);
  std::ostringstream sample;
  sample << n_samples << " draws at theta=" << theta << ", " << link_name(link);
  return EquivalenceReport::make("lemma-a3", std::abs(freq - expected),
                                 kMonteCarloBand * binomial_se(expected, n_samples),
                                 sample.str());
}

EquivalenceReport check_unconditional_independence(std::span<const FAItemParams> items,
                                                   LinkFunction link,
                                                   std::uint64_t n_samples,
                                                   std::uint64_t seed) {
  if (items.size() != 2) throw Error(ErrorKind::Config, "independence control uses two items");
  Engine rng(derive_seed(seed, 0xA30));
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  std::uint64_t both = 0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    const double theta = std_normal(rng);
    const bool a = items[0].alpha() * theta + draw_error(rng, link, items[0].uniqueness()) >=
                   items[0].tau();
    const bool b = items[1].alpha() * theta + draw_error(rng, link, items[1].uniqueness()) >=
                   items[1].tau();
    first += a;
    second += b;
    both += a && b;
  }
  const double n = static_cast<double>(n_samples);
  const double expected = (static_cast<double>(first) / n) * (static_cast<double>(second) / n);
  const double freq = static_cast<double>(both) / n;
  std::ostringstream sample;
  sample << n_samples << " draws with theta ~ N(0,1), " << link_name(link);
  return EquivalenceReport::make("lemma-a3-unconditional", std::abs(freq - expected),
                                 kMonteCarloBand * binomial_se(expected, n_samples),
                                 sample.str());
}

FAItemParams random_fa_item(Engine& rng) {
  const double alpha = uniform(rng, 0.02, 0.98);
  const double tau = uniform(rng, -3.0, 3.0);
  const double c = uniform(rng, 0.0, 0.4);
  const double d = uniform(rng, std::max(c, 0.6), 1.0);
  return FAItemParams(alpha, tau, c, d);
}

std::vector<FuzzRecord> fuzz_check(std::string_view check, std::size_t instances,
                                   std::uint64_t seed, const FuzzOptions& options) {
  const auto* found = std::find(std::begin(kVerifyChecks), std::end(kVerifyChecks), check);
  if (found == std::end(kVerifyChecks)) {
    throw Error(ErrorKind::Config, "unknown check: " + std::string(check));
  }
  const auto check_id = static_cast<std::uint64_t>(found - std::begin(kVerifyChecks));
  const QuadratureRule rule = options.quadrature_nodes == kDefaultQuadratureNodes
                                  ? default_quadrature()
                                  : gauss_hermite(options.quadrature_nodes);
  const auto grid = default_theta_grid();

  std::vector<FuzzRecord> out;
  for (std::size_t k = 0; k < instances; ++k) {
    Engine rng(derive_seed(seed, check_id, k));
    const LinkFunction link = k % 2 == 0 ? LinkFunction::Logistic : LinkFunction::NormalOgive;
    const std::uint64_t mc_seed = derive_seed(seed, check_id + 100, k);
    std::vector<FAItemParams> items;
    if (check == "conditional") {
      items.push_back(random_fa_item(rng));
      out.push_back({k, check_conditional_equivalence(items, link, grid)});
    } else if (check == "marginal") {
      const std::size_t m = 1 + rng() % 3;
      for (std::size_t i = 0; i < m; ++i) items.push_back(random_fa_item(rng));
      out.push_back({k, check_marginal_equivalence(items, link, rule)});
      out.push_back({k, check_marginal_normalization(items, link, rule)});
    } else if (check == "lemma-a1") {
      const auto item = random_fa_item(rng);
      const double theta = uniform(rng, -3.0, 3.0);
      out.push_back({k, check_lemma_a1(item, link, theta, options.mc_samples, mc_seed)});
    } else if (check == "lemma-a2") {
      const std::size_t m = 1 + rng() % options.max_sum_product_items;
      ResponsePattern y(m);
      for (std::size_t i = 0; i < m; ++i) {
        items.push_back(random_fa_item(rng));
        y[i] = static_cast<std::uint8_t>(rng() & 1U);
      }
      const double theta = uniform(rng, -4.0, 4.0);
      out.push_back({k, check_sum_product(items, y, theta, link)});
    } else {
      items.push_back(random_fa_item(rng));
      items.push_back(random_fa_item(rng));
      const double theta = uniform(rng, -3.0, 3.0);
      out.push_back(
          {k, check_conditional_independence(items, link, theta, options.mc_samples, mc_seed)});
    }
  }
  if (check == "lemma-a3") {
    const std::vector<FAItemParams> correlated{FAItemParams(0.9, 0.0), FAItemParams(0.9, 0.0)};
    out.push_back({instances,
                   check_unconditional_independence(correlated, LinkFunction::NormalOgive,
                                                    options.mc_samples,
                                                    derive_seed(seed, check_id + 200)),
                   false});
  }
  return out;
}

}  // namespace fa4p
