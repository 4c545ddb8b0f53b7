#pragma once

// Executable checks that the four-parameter factor-analytic model and the
// four-parameter IRT model agree: conditionally on theta, marginally, and in
// the supporting lemmas (threshold-exceedance CDF, sum/product exchange,
// conditional independence of the latent responses).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fa4p/model.hpp"
#include "fa4p/probability.hpp"
#include "fa4p/random.hpp"

namespace fa4p {

struct EquivalenceReport {
  std::string name;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string sample;

  /// Sets pass = discrepancy <= tolerance.
  static EquivalenceReport make(std::string name, double discrepancy, double tolerance,
                                std::string sample);
};

inline constexpr double kConditionalTolerance = 1e-12;
inline constexpr double kMarginalTolerance = 1e-8;
inline constexpr double kSumProductTolerance = 1e-12;
/// Monte Carlo checks pass within this many binomial standard errors.
inline constexpr double kMonteCarloBand = 4.0;
inline constexpr double kNormalizationTolerance = 1e-10;

/// theta from -6 to 6 in steps of 0.25.
std::vector<double> default_theta_grid();

/// max |irc_fa(p, theta) - irc_irt(fa_to_irt(p), theta)| over items x grid.
EquivalenceReport check_conditional_equivalence(std::span<const FAItemParams> items,
                                                LinkFunction link,
                                                std::span<const double> theta_grid);

/// max over all 2^m patterns of |FA enumeration marginal - IRT quadrature
/// marginal|. m <= 3.
EquivalenceReport check_marginal_equivalence(std::span<const FAItemParams> items,
                                             LinkFunction link, const QuadratureRule& rule);

/// max over the two marginal routes of |sum over all 2^m patterns - 1|.
EquivalenceReport check_marginal_normalization(std::span<const FAItemParams> items,
                                               LinkFunction link, const QuadratureRule& rule);

/// Simulates Y* = alpha theta + u eps and compares the frequency of
/// Y* >= tau with F((alpha theta - tau) / u). n_samples >= 10^4.
EquivalenceReport check_lemma_a1(const FAItemParams& item, LinkFunction link, double theta,
                                 std::uint64_t n_samples, std::uint64_t seed);

/// At fixed theta: 2^m-term sum over latent patterns of per-item products
/// versus the m-term product of two-term sums. m <= 12.
EquivalenceReport check_sum_product(std::span<const FAItemParams> items,
                                    std::span<const std::uint8_t> pattern, double theta,
                                    LinkFunction link);

/// Two items at fixed theta: joint exceedance frequency versus the product
/// of the exceedance probabilities. n_samples >= 10^5.
EquivalenceReport check_conditional_independence(std::span<const FAItemParams> items,
                                                 LinkFunction link, double theta,
                                                 std::uint64_t n_samples, std::uint64_t seed);

/// Negative control for the check above: theta is redrawn from N(0, 1) for
/// every sample, and the joint frequency is compared with the product of the
/// two empirical marginal frequencies. Correlated items should fail.
EquivalenceReport check_unconditional_independence(std::span<const FAItemParams> items,
                                                   LinkFunction link,
                                                   std::uint64_t n_samples,
                                                   std::uint64_t seed);

/// Valid random item: alpha ~ U(0.02, 0.98), tau ~ U(-3, 3),
/// c ~ U(0, 0.4), d ~ U(max(c, 0.6), 1).
FAItemParams random_fa_item(Engine& rng);

inline constexpr const char* kVerifyChecks[] = {"conditional", "marginal", "lemma-a1",
                                                "lemma-a2", "lemma-a3"};

struct FuzzOptions {
  std::uint64_t mc_samples = 1'000'000;
  std::size_t quadrature_nodes = kDefaultQuadratureNodes;
  std::size_t max_sum_product_items = 8;
};

struct FuzzRecord {
  std::size_t instance = 0;
  EquivalenceReport report;
  /// False for negative controls, which are supposed to fail.
  bool expect_pass = true;

  bool as_expected() const noexcept { return report.pass == expect_pass; }
};

/// Runs `instances` randomized instances of one named check (see
/// kVerifyChecks). Instance k uses its own stream derived from (seed, check,
/// k), with the link alternating between logistic and normal. "marginal"
/// adds a normalization record per instance; "lemma-a3" appends one negative
/// control (alpha = 0.9, tau = 0, theta redrawn per sample).
std::vector<FuzzRecord> fuzz_check(std::string_view check, std::size_t instances,
                                   std::uint64_t seed, const FuzzOptions& options = {});

}  // namespace fa4p
