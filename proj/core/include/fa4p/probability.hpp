#pragma once

// Pattern likelihoods, quadrature marginals and the conditional
// distributions of the discrete latent responses.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fa4p/model.hpp"

namespace fa4p {

/// Binary response pattern, one entry per item.
using ResponsePattern = std::vector<std::uint8_t>;

/// Quadrature against the standard normal density: sum_k w_k g(x_k)
/// approximates E[g(theta)], theta ~ N(0, 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kDefaultQuadratureNodes = 61;
inline constexpr std::size_t kMaxEnumerationItems = 12;

/// Probabilists' Gauss-Hermite rule with n nodes, 1 <= n <= 512.
QuadratureRule gauss_hermite(int n);

/// The shared 61-node production rule.
const QuadratureRule& default_quadrature();

/// Pattern with bits taken from the low m bits of `index` (item 0 = bit 0).
ResponsePattern pattern_from_index(std::uint64_t index, std::size_t m);

/// P(Y = y | theta) under conditional independence. Switches to log-domain
/// accumulation for more than 30 items.
double pattern_prob_given_theta(std::span<const std::uint8_t> pattern,
                                std::span<const IRTItemParams> items, double theta,
                                LinkFunction link);

double log_pattern_prob_given_theta(std::span<const std::uint8_t> pattern,
                                    std::span<const IRTItemParams> items, double theta,
                                    LinkFunction link);

/// P(Y = y) = E_theta[P(Y = y | theta)] under the given rule.
double marginal_pattern_prob_irt(std::span<const std::uint8_t> pattern,
                                 std::span<const IRTItemParams> items, LinkFunction link,
                                 const QuadratureRule& rule);

/// P(Y_i = y | Z_i = z) for the two-level mixture.
double response_given_latent(std::uint8_t y, std::uint8_t z, double c, double d) noexcept;

/// Marginal pattern probability of the factor-analytic model, computed by
/// summing over all 2^m latent patterns z and integrating the latent-pattern
/// probability separately for each z. Limited to m <= 12.
double marginal_pattern_prob_fa_enum(std::span<const std::uint8_t> pattern,
                                     std::span<const FAItemParams> items, LinkFunction link,
                                     const QuadratureRule& rule);

/// Same marginal computed from the per-item product of two-term sums at each
/// node. Linear in m.
double marginal_pattern_prob_fa_product(std::span<const std::uint8_t> pattern,
                                        std::span<const FAItemParams> items,
                                        LinkFunction link, const QuadratureRule& rule);

/// P(Z = 1 | Y = y, theta) where f = F(x) is the prior probability of Z = 1.
/// Throws DegeneratePosterior when both mixture components have zero mass.
double z_posterior_prob(std::uint8_t y, double f, double c, double d);

}  // namespace fa4p
