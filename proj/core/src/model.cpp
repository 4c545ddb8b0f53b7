#include "fa4p/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fa4p/errors.hpp"

namespace fa4p {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateLoading: return "degenerate-loading";
    case ErrorKind::DegeneratePosterior: return "degenerate-posterior";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::EnumerationLimit: return "enumeration-limit";
    case ErrorKind::Config: return "config";
    case ErrorKind::Data: return "data";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::TooFewDraws: return "too-few-draws";
  }
  return "unknown";
}

namespace {

constexpr double kNormalClamp = 38.0;
// Smallest loading for which tau / alpha is still treated as a difficulty.
constexpr double kMinLoading = 1e-9;

void check_asymptotes(double c, double d) {
  if (!(c >= 0.0 && c < d && d <= 1.0)) {
    throw Error(ErrorKind::Domain,
                "asymptotes must satisfy 0 <= c < d <= 1 (c=" +
                    std::to_string(c) + ", d=" + std::to_string(d) + ")");
  }
}

double normal_cdf(double x) {
  x = std::clamp(x, -kNormalClamp, kNormalClamp);
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Not clamped below: the Mills expansion stays accurate where the CDF
// itself would underflow.
double normal_log_cdf(double x) {
  x = std::min(x, kNormalClamp);
  if (x > -37.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  // Mills-ratio expansion; erfc is subnormal below -37.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double logistic_cdf(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logistic_log_cdf(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace

ModelSpec parse_model_name(std::string_view name) {
  struct Entry {
    std::string_view name;
    ModelSpec spec;
  };
  static constexpr Entry kEntries[] = {
      {"2pl", {LinkFunction::Logistic, Variant::TwoP}},
      {"3pl", {LinkFunction::Logistic, Variant::ThreeP}},
      {"4pl", {LinkFunction::Logistic, Variant::FourP}},
      {"nil", {LinkFunction::Logistic, Variant::NIOnly}},
      {"2pno", {LinkFunction::NormalOgive, Variant::TwoP}},
      {"3pno", {LinkFunction::NormalOgive, Variant::ThreeP}},
      {"4pno", {LinkFunction::NormalOgive, Variant::FourP}},
      {"nino", {LinkFunction::NormalOgive, Variant::NIOnly}},
  };
  for (const auto& e : kEntries) {
    if (e.name == name) return e.spec;
  }
  throw Error(ErrorKind::Config, "unknown model '" + std::string(name) + "'");
}

std::string model_name(const ModelSpec& spec) {
  const bool logistic = spec.link == LinkFunction::Logistic;
  switch (spec.variant) {
    case Variant::TwoP: return logistic ? "2pl" : "2pno";
    case Variant::ThreeP: return logistic ? "3pl" : "3pno";
    case Variant::FourP: return logistic ? "4pl" : "4pno";
    case Variant::NIOnly: return logistic ? "nil" : "nino";
  }
  return "?";
}

std::string_view link_name(LinkFunction link) {
  return link == LinkFunction::Logistic ? "logistic" : "normal";
}

double link_cdf(LinkFunction link, double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Domain, "link_cdf: non-finite argument");
  return link == LinkFunction::Logistic ? logistic_cdf(x) : normal_cdf(x);
}

double link_log_cdf(LinkFunction link, double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Domain, "link_log_cdf: non-finite argument");
  return link == LinkFunction::Logistic ? logistic_log_cdf(x) : normal_log_cdf(x);
}

FAItemParams::FAItemParams(double alpha, double tau, double c, double d)
    : alpha_(alpha), tau_(tau), c_(c), d_(d) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::Domain,
                "loading must lie in (0, 1) (alpha=" + std::to_string(alpha) + ")");
  }
  if (!std::isfinite(tau)) throw Error(ErrorKind::Domain, "threshold must be finite");
  check_asymptotes(c, d);
}

double FAItemParams::uniqueness() const noexcept {
  // (1 - a)(1 + a) keeps precision for alpha close to 1.
  return std::sqrt((1.0 - alpha_) * (1.0 + alpha_));
}

IRTItemParams::IRTItemParams(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::Domain,
                "discrimination must be positive and finite (a=" + std::to_string(a) + ")");
  }
  if (!std::isfinite(b)) throw Error(ErrorKind::Domain, "difficulty must be finite");
  check_asymptotes(c, d);
}

double irc_irt(const IRTItemParams& p, double theta, LinkFunction link) {
  return p.c() + (p.d() - p.c()) * link_cdf(link, p.a() * (theta - p.b()));
}

double irc_fa(const FAItemParams& p, double theta, LinkFunction link) {
  const double x = (p.alpha() * theta - p.tau()) / p.uniqueness();
  return p.c() + (p.d() - p.c()) * link_cdf(link, x);
}

IRTItemParams fa_to_irt(const FAItemParams& p) {
  if (p.alpha() < kMinLoading) {
    throw Error(ErrorKind::DegenerateLoading,
                "loading too close to zero for a finite difficulty");
  }
  return IRTItemParams(p.alpha() / p.uniqueness(), p.tau() / p.alpha(), p.c(), p.d());
}

FAItemParams irt_to_fa(const IRTItemParams& p) {
  const double norm = std::hypot(1.0, p.a());
  double alpha = p.a() / norm;
  // For huge a the quotient rounds to exactly 1, outside the open interval.
  if (alpha >= 1.0) alpha = std::nextafter(1.0, 0.0);
  return FAItemParams(alpha, p.a() * p.b() / norm, p.c(), p.d());
}

IRTItemParams logistic_normal_rescale(const IRTItemParams& p, RescaleDirection direction) {
  const double a = direction == RescaleDirection::LogisticToNormal
                       ? p.a() / kLogisticNormalScale
                       : p.a() * kLogisticNormalScale;
  return IRTItemParams(a, p.b(), p.c(), p.d());
}

}  // namespace fa4p
