#pragma once

// Item parameter types, link functions, item response curves and the exact
// conversions between the factor-analytic and IRT parameterizations.

#include <string>
#include <string_view>

namespace fa4p {

enum class LinkFunction { Logistic, NormalOgive };

/// Which asymptotes a model estimates. Pinned asymptotes sit at c = 0 / d = 1.
enum class Variant { TwoP, ThreeP, NIOnly, FourP };

struct ModelSpec {
  LinkFunction link = LinkFunction::Logistic;
  Variant variant = Variant::FourP;

  bool estimates_guessing() const noexcept {
    return variant == Variant::ThreeP || variant == Variant::FourP;
  }
  bool estimates_inattention() const noexcept {
    return variant == Variant::NIOnly || variant == Variant::FourP;
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Parses the CLI model names: 2pl 3pl 4pl nil (logistic) and
/// 2pno 3pno 4pno nino (normal ogive).
ModelSpec parse_model_name(std::string_view name);
std::string model_name(const ModelSpec& spec);
std::string_view link_name(LinkFunction link);

/// Standard logistic or standard normal CDF. Throws Domain on non-finite x.
double link_cdf(LinkFunction link, double x);

/// log F(x), stable far into both tails. The normal ogive is clamped at
/// |x| = 38.
double link_log_cdf(LinkFunction link, double x);

/// Factor-analytic item: loading, threshold, guessing and inattention.
/// Construction validates 0 < alpha < 1 and 0 <= c < d <= 1.
class FAItemParams {
 public:
  FAItemParams(double alpha, double tau, double c = 0.0, double d = 1.0);

  double alpha() const noexcept { return alpha_; }
  double tau() const noexcept { return tau_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }
  /// Uniqueness sqrt(1 - alpha^2).
  double uniqueness() const noexcept;

  friend bool operator==(const FAItemParams&, const FAItemParams&) = default;

 private:
  double alpha_;
  double tau_;
  double c_;
  double d_;
};

/// IRT item: discrimination, difficulty, guessing and inattention.
/// Construction validates a > 0 and 0 <= c < d <= 1.
class IRTItemParams {
 public:
  IRTItemParams(double a, double b, double c = 0.0, double d = 1.0);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  friend bool operator==(const IRTItemParams&, const IRTItemParams&) = default;

 private:
  double a_;
  double b_;
  double c_;
  double d_;
};

/// c + (d - c) F(a (theta - b)).
double irc_irt(const IRTItemParams& p, double theta, LinkFunction link);

/// c + (d - c) F((alpha theta - tau) / u).
double irc_fa(const FAItemParams& p, double theta, LinkFunction link);

/// a = alpha / u, b = tau / alpha. Throws DegenerateLoading when alpha is
/// too small for b to be finite.
IRTItemParams fa_to_irt(const FAItemParams& p);

/// alpha = a / sqrt(1 + a^2), tau = a b / sqrt(1 + a^2).
FAItemParams irt_to_fa(const IRTItemParams& p);

enum class RescaleDirection { LogisticToNormal, NormalToLogistic };

inline constexpr double kLogisticNormalScale = 1.7;

/// Approximate link change: divides (LogisticToNormal) or multiplies
/// (NormalToLogistic) the discrimination by 1.7. Not an exact equivalence.
IRTItemParams logistic_normal_rescale(const IRTItemParams& p,
                                      RescaleDirection direction);

}  // namespace fa4p
