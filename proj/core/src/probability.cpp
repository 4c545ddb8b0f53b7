#include "fa4p/probability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fa4p/errors.hpp"

namespace fa4p {

namespace {

constexpr std::size_t kLogDomainItems = 30;

void check_lengths(std::size_t pattern, std::size_t items) {
  if (pattern != items) {
    throw Error(ErrorKind::LengthMismatch,
                "pattern has " + std::to_string(pattern) + " entries but " +
                    std::to_string(items) + " items were given");
  }
}

double fa_argument(const FAItemParams& p, double theta) {
  return (p.alpha() * theta - p.tau()) / p.uniqueness();
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > 512) {
    throw Error(ErrorKind::Domain, "Gauss-Hermite order must be in [1, 512]");
  }
  // Golub-Welsch on the Jacobi matrix of the monic probabilists' Hermite
  // recurrence: zero diagonal, off-diagonal sqrt(k).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 1.0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Domain, "Gauss-Hermite eigenproblem did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = values(i);
    rule.weights[i] = vectors(0, i) * vectors(0, i);
  }
  // Enforce exact symmetry about zero, then renormalize.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) w /= total;
  return rule;
}

const QuadratureRule& default_quadrature() {
  static const QuadratureRule rule = gauss_hermite(kDefaultQuadratureNodes);
  return rule;
}

ResponsePattern pattern_from_index(std::uint64_t index, std::size_t m) {
  ResponsePattern bits(m);
  for (std::size_t i = 0; i < m; ++i) bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
  return bits;
}

double log_pattern_prob_given_theta(std::span<const std::uint8_t> pattern,
                                    std::span<const IRTItemParams> items, double theta,
                                    LinkFunction link) {
  check_lengths(pattern.size(), items.size());
  double log_p = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double p = irc_irt(items[i], theta, link);
    log_p += pattern[i] ? std::log(p) : std::log1p(-p);
  }
  return log_p;
}

double pattern_prob_given_theta(std::span<const std::uint8_t> pattern,
                                std::span<const IRTItemParams> items, double theta,
                                LinkFunction link) {
  check_lengths(pattern.size(), items.size());
  if (items.size() > kLogDomainItems) {
    return std::exp(log_pattern_prob_given_theta(pattern, items, theta, link));
  }
  double prob = 1.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double p = irc_irt(items[i], theta, link);
    prob *= pattern[i] ? p : 1.0 - p;
  }
  return prob;
}

double marginal_pattern_prob_irt(std::span<const std::uint8_t> pattern,
                                 std::span<const IRTItemParams> items, LinkFunction link,
                                 const QuadratureRule& rule) {
  check_lengths(pattern.size(), items.size());
  if (items.size() <= kLogDomainItems) {
    double total = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      total += rule.weights[k] * pattern_prob_given_theta(pattern, items, rule.nodes[k], link);
    }
    return total;
  }
  std::vector<double> terms(rule.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rule.size(); ++k) {
    terms[k] = std::log(rule.weights[k]) +
               log_pattern_prob_given_theta(pattern, items, rule.nodes[k], link);
    peak = std::max(peak, terms[k]);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return std::exp(peak + std::log(sum));
}

double response_given_latent(std::uint8_t y, std::uint8_t z, double c, double d) noexcept {
  const double success = z ? d : c;
  return y ? success : 1.0 - success;
}

double marginal_pattern_prob_fa_enum(std::span<const std::uint8_t> pattern,
                                     std::span<const FAItemParams> items, LinkFunction link,
                                     const QuadratureRule& rule) {
  check_lengths(pattern.size(), items.size());
  const std::size_t m = items.size();
  if (m > kMaxEnumerationItems) {
    throw Error(ErrorKind::EnumerationLimit,
                "latent-pattern enumeration supports at most 12 items");
  }
  // F(x_i) at every node, computed once.
  std::vector<double> f(m * rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      f[k * m + i] = link_cdf(link, fa_argument(items[i], rule.nodes[k]));
    }
  }
  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t zi = 0; zi < count; ++zi) {
    double emission = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto z = static_cast<std::uint8_t>((zi >> i) & 1U);
      emission *= response_given_latent(pattern[i], z, items[i].c(), items[i].d());
    }
    if (emission == 0.0) continue;
    double latent = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      double prob = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double fk = f[k * m + i];
        prob *= ((zi >> i) & 1U) ? fk : 1.0 - fk;
      }
      latent += rule.weights[k] * prob;
    }
    total += emission * latent;
  }
  return total;
}

double marginal_pattern_prob_fa_product(std::span<const std::uint8_t> pattern,
                                        std::span<const FAItemParams> items,
                                        LinkFunction link, const QuadratureRule& rule) {
  check_lengths(pattern.size(), items.size());
  double total = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    double prob = 1.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double fk = link_cdf(link, fa_argument(items[i], rule.nodes[k]));
      const auto& p = items[i];
      prob *= response_given_latent(pattern[i], 0, p.c(), p.d()) * (1.0 - fk) +
              response_given_latent(pattern[i], 1, p.c(), p.d()) * fk;
    }
    total += rule.weights[k] * prob;
  }
  return total;
}

double z_posterior_prob(std::uint8_t y, double f, double c, double d) {
  const double rho1 = y ? d : 1.0 - d;
  const double rho0 = y ? c : 1.0 - c;
  const double one = rho1 * f;
  const double denom = one + rho0 * (1.0 - f);
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::DegeneratePosterior,
                "both latent states have zero probability for this response");
  }
  return one / denom;
}

}  // namespace fa4p
