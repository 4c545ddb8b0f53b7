#include "fa4p/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fa4p/errors.hpp"

namespace fa4p {

namespace {

constexpr std::size_t kMinHalfLength = 10;
constexpr std::size_t kMinEssLength = 100;

struct Moments {
  double mean;
  double var;  // unbiased
};

Moments moments(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace

RhatResult split_rhat(std::span<const std::vector<double>> chains) {
  if (chains.empty()) throw Error(ErrorKind::TooFewDraws, "split_rhat: no chains");
  std::size_t length = chains.front().size();
  for (const auto& c : chains) length = std::min(length, c.size());
  const std::size_t half = length / 2;
  if (half < kMinHalfLength) {
    throw Error(ErrorKind::TooFewDraws, "split_rhat: need at least 10 draws per half-chain");
  }

  std::vector<Moments> parts;
  for (const auto& c : chains) {
    // Use the last 2*half draws so odd lengths drop the earliest draw.
    std::span<const double> tail(c.data() + (c.size() - 2 * half), 2 * half);
    parts.push_back(moments(tail.first(half)));
    parts.push_back(moments(tail.last(half)));
  }
  const double n = static_cast<double>(half);
  const double k = static_cast<double>(parts.size());
  double w = 0.0;
  double grand = 0.0;
  for (const auto& p : parts) {
    w += p.var;
    grand += p.mean;
  }
  w /= k;
  grand /= k;
  double b = 0.0;
  for (const auto& p : parts) b += (p.mean - grand) * (p.mean - grand);
  b *= n / (k - 1.0);

  if (w <= 0.0) {
    if (b <= 0.0) return {1.0, true};
    return {std::numeric_limits<double>::infinity(), true};
  }
  const double var_plus = (n - 1.0) / n * w + b / n;
  return {std::sqrt(var_plus / w), false};
}

EssResult ess(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < kMinEssLength) throw Error(ErrorKind::TooFewDraws, "ess: need at least 100 draws");
  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t t = 0; t < n; ++t) centered[t] = trace[t] - mean;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += centered[t] * centered[t + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return {1.0, true};

  // tau = -1 + 2 * sum of paired sums (rho_{2k} + rho_{2k+1}) until the
  // first negative pair.
  double tau = -1.0;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (pair < 0.0) break;
    tau += 2.0 * pair;
  }
  const double value = static_cast<double>(n) / std::max(tau, 1e-12);
  return {std::min(value, static_cast<double>(n)), false};
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw Error(ErrorKind::TooFewDraws, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double mse_compare(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "mse_compare: inputs differ in length");
  }
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

const ParameterSummary* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

DiagnosticsReport diagnose(std::span<const ParameterTraces> traces, double rhat_threshold) {
  DiagnosticsReport report;
  report.rhat_threshold = rhat_threshold;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& t : traces) {
    ParameterSummary s;
    s.name = t.name;
    std::vector<double> pooled;
    for (const auto& c : t.chains) pooled.insert(pooled.end(), c.begin(), c.end());
    if (pooled.empty()) throw Error(ErrorKind::TooFewDraws, "no draws for " + t.name);
    s.median = quantile(pooled, 0.5);
    s.q025 = quantile(pooled, 0.025);
    s.q975 = quantile(pooled, 0.975);

    try {
      const auto r = split_rhat(t.chains);
      s.rhat = r.value;
      s.zero_variance = r.zero_variance;
    } catch (const Error&) {
      s.rhat = nan;
    }
    double total_ess = 0.0;
    for (const auto& c : t.chains) {
      if (c.size() < kMinEssLength) {
        total_ess = nan;
        break;
      }
      const auto e = ess(c);
      total_ess += e.value;
      s.zero_variance = s.zero_variance || e.zero_variance;
    }
    s.ess = total_ess;
    if (s.rhat > rhat_threshold) report.flagged.push_back(s.name);
    report.parameters.push_back(std::move(s));
  }
  return report;
}

}  // namespace fa4p
