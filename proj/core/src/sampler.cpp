#include "fa4p/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "fa4p/errors.hpp"
#include "fa4p/probability.hpp"

namespace fa4p {

namespace {

constexpr double kInitThetaStep = 1.0;
constexpr double kInitAlphaStep = 0.05;
constexpr double kInitTauStep = 0.1;
constexpr double kMinStep = 1e-4;
constexpr double kMaxStep = 10.0;
constexpr int kMaxSliceSteps = 200;

double uniqueness_of(double alpha) { return std::sqrt((1.0 - alpha) * (1.0 + alpha)); }

// log F(x) for Z = 1 and log(1 - F(x)) = log F(-x) for Z = 0; both links are
// symmetric about zero.
double log_bernoulli_link(LinkFunction link, std::uint8_t z, double x) {
  return link_log_cdf(link, z ? x : -x);
}

bool metropolis_accept(Engine& rng, double log_ratio) {
  return log_ratio >= 0.0 || std::log(uniform_open(rng)) < log_ratio;
}

// Slice sampling with shrinkage on a bounded interval (lo, hi).
template <class LogDensity>
double slice_sample(Engine& rng, double x, double lo, double hi, LogDensity log_density) {
  const double level = log_density(x) + std::log(uniform_open(rng));
  double left = lo;
  double right = hi;
  for (int step = 0; step < kMaxSliceSteps; ++step) {
    const double candidate = left + (right - left) * uniform_open(rng);
    if (candidate <= lo || candidate >= hi) continue;
    if (log_density(candidate) > level) return candidate;
    if (candidate < x) {
      left = candidate;
    } else {
      right = candidate;
    }
  }
  return x;
}

void adapt(std::vector<double>& steps, std::vector<std::uint32_t>& accepts,
           std::size_t batch_iterations, double target, double delta, double max_step) {
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double rate = static_cast<double>(accepts[k]) / static_cast<double>(batch_iterations);
    const double log_step = std::log(steps[k]) + (rate > target ? delta : -delta);
    steps[k] = std::clamp(std::exp(log_step), kMinStep, max_step);
    accepts[k] = 0;
  }
}

}  // namespace

void SamplerConfig::validate() const {
  if (chains == 0) throw Error(ErrorKind::Config, "chains must be at least 1");
  if (samples == 0) throw Error(ErrorKind::Config, "samples must be at least 1");
  if (thin == 0) throw Error(ErrorKind::Config, "thin must be at least 1");
  if (samples < thin) throw Error(ErrorKind::Config, "samples must be at least thin");
  if (!(proposal_target_acceptance > 0.0 && proposal_target_acceptance < 1.0)) {
    throw Error(ErrorKind::Config, "target acceptance must lie in (0, 1)");
  }
}

double ChainState::argument(std::size_t p, std::size_t i) const {
  return (alpha[i] * theta[p] - tau[i]) / uniqueness_of(alpha[i]);
}

ChainState init_chain(const ResponseMatrix& data, const SamplerConfig& config,
                      std::size_t chain_index) {
  if (chain_index >= config.chains) {
    throw Error(ErrorKind::Config, "chain index out of range");
  }
  const std::size_t n = data.persons();
  const std::size_t m = data.items();
  const ModelSpec& model = config.model;

  ChainState s;
  s.model = model;
  s.persons = n;
  s.items = m;
  s.rng.seed(derive_seed(config.seed, chain_index));
  s.z.assign(data.values().begin(), data.values().end());
  s.alpha.resize(m);
  s.tau.resize(m);
  s.c.resize(m);
  s.d.resize(m);
  s.theta.resize(n);

  if (chain_index == 0) {
    std::fill(s.alpha.begin(), s.alpha.end(), 0.5);
    std::fill(s.tau.begin(), s.tau.end(), 0.0);
    std::fill(s.c.begin(), s.c.end(), model.estimates_guessing() ? 0.05 : 0.0);
    std::fill(s.d.begin(), s.d.end(), model.estimates_inattention() ? 0.95 : 1.0);
    std::vector<double> totals(n);
    for (std::size_t p = 0; p < n; ++p) totals[p] = data.total(p);
    const double mean = std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double t : totals) ss += (t - mean) * (t - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    for (std::size_t p = 0; p < n; ++p) s.theta[p] = sd > 0.0 ? (totals[p] - mean) / sd : 0.0;
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      s.alpha[i] = truncated_normal(s.rng, kAlphaPriorMean, kAlphaPriorSd, 0.0, 1.0);
      s.tau[i] = std_normal(s.rng);
      s.c[i] = model.estimates_guessing() ? uniform(s.rng, 0.0, 1.0) : 0.0;
      s.d[i] = model.estimates_inattention() ? uniform(s.rng, s.c[i], 1.0) : 1.0;
    }
    for (std::size_t p = 0; p < n; ++p) s.theta[p] = std_normal(s.rng);
  }

  s.steps.theta.assign(n, kInitThetaStep);
  s.steps.alpha.assign(m, kInitAlphaStep);
  s.steps.tau.assign(m, kInitTauStep);
  s.theta_accepts.assign(n, 0);
  s.alpha_accepts.assign(m, 0);
  s.tau_accepts.assign(m, 0);
  return s;
}

void update_z(ChainState& s, const ResponseMatrix& data) {
  const LinkFunction link = s.model.link;
  for (std::size_t i = 0; i < s.items; ++i) {
    const double u = uniqueness_of(s.alpha[i]);
    for (std::size_t p = 0; p < s.persons; ++p) {
      const std::uint8_t y = data(p, i);
      const double x = (s.alpha[i] * s.theta[p] - s.tau[i]) / u;
      // Posterior odds in the log domain so saturated F(x) cannot produce 0/0.
      const double rho1 = y ? s.d[i] : 1.0 - s.d[i];
      const double rho0 = y ? s.c[i] : 1.0 - s.c[i];
      const double log_one = std::log(rho1) + link_log_cdf(link, x);
      const double log_zero = std::log(rho0) + link_log_cdf(link, -x);
      const double prob_one = 1.0 / (1.0 + std::exp(log_zero - log_one));
      s.z_at(p, i) = bernoulli(s.rng, prob_one) ? 1 : 0;
    }
  }
}

void update_theta(ChainState& s) {
  const LinkFunction link = s.model.link;
  std::vector<double> u(s.items);
  for (std::size_t i = 0; i < s.items; ++i) u[i] = uniqueness_of(s.alpha[i]);

  auto log_target = [&](std::size_t p, double theta) {
    double lp = -0.5 * theta * theta;
    for (std::size_t i = 0; i < s.items; ++i) {
      lp += log_bernoulli_link(link, s.z_at(p, i), (s.alpha[i] * theta - s.tau[i]) / u[i]);
    }
    return lp;
  };

  for (std::size_t p = 0; p < s.persons; ++p) {
    const double current = s.theta[p];
    const double proposal = current + s.steps.theta[p] * std_normal(s.rng);
    const double ratio = log_target(p, proposal) - log_target(p, current);
    if (metropolis_accept(s.rng, ratio)) {
      s.theta[p] = proposal;
      ++s.theta_accepts[p];
    }
  }
}

void update_loading_threshold(ChainState& s) {
  const LinkFunction link = s.model.link;
  auto log_likelihood = [&](std::size_t i, double alpha, double tau) {
    const double u = uniqueness_of(alpha);
    double ll = 0.0;
    for (std::size_t p = 0; p < s.persons; ++p) {
      ll += log_bernoulli_link(link, s.z_at(p, i), (alpha * s.theta[p] - tau) / u);
    }
    return ll;
  };
  auto alpha_prior = [](double alpha) {
    const double z = (alpha - kAlphaPriorMean) / kAlphaPriorSd;
    return -0.5 * z * z;
  };

  for (std::size_t i = 0; i < s.items; ++i) {
    double current_ll = log_likelihood(i, s.alpha[i], s.tau[i]);

    const double alpha_prop = s.alpha[i] + s.steps.alpha[i] * std_normal(s.rng);
    if (alpha_prop > 0.0 && alpha_prop < 1.0) {
      const double prop_ll = log_likelihood(i, alpha_prop, s.tau[i]);
      const double ratio = prop_ll + alpha_prior(alpha_prop) - current_ll - alpha_prior(s.alpha[i]);
      if (metropolis_accept(s.rng, ratio)) {
        s.alpha[i] = alpha_prop;
        current_ll = prop_ll;
        ++s.alpha_accepts[i];
      }
    } else {
      // Outside the prior support: rejected. Consume the acceptance draw so
      // the stream position does not depend on the proposal.
      (void)uniform_open(s.rng);
    }

    const double tau_prop = s.tau[i] + s.steps.tau[i] * std_normal(s.rng);
    const double prop_ll = log_likelihood(i, s.alpha[i], tau_prop);
    const double ratio =
        prop_ll - 0.5 * tau_prop * tau_prop - current_ll + 0.5 * s.tau[i] * s.tau[i];
    if (metropolis_accept(s.rng, ratio)) {
      s.tau[i] = tau_prop;
      ++s.tau_accepts[i];
    }
  }
}

AsymptoteCounts asymptote_counts(const ChainState& s, const ResponseMatrix& data,
                                 std::size_t item) {
  AsymptoteCounts n;
  for (std::size_t p = 0; p < s.persons; ++p) {
    const bool z = s.z_at(p, item) != 0;
    const bool y = data(p, item) != 0;
    if (z) {
      y ? ++n.s1 : ++n.f1;
    } else {
      y ? ++n.s0 : ++n.f0;
    }
  }
  return n;
}

double log_conditional_c(double c, const AsymptoteCounts& n, bool inattention_estimated) {
  double lp = static_cast<double>(n.s0) * std::log(c) + static_cast<double>(n.f0) * std::log1p(-c);
  if (inattention_estimated) lp -= std::log1p(-c);
  return lp;
}

double log_conditional_d(double d, const AsymptoteCounts& n) {
  return static_cast<double>(n.s1) * std::log(d) + static_cast<double>(n.f1) * std::log1p(-d);
}

void update_asymptotes(ChainState& s, const ResponseMatrix& data) {
  const bool guess = s.model.estimates_guessing();
  const bool inatt = s.model.estimates_inattention();
  if (!guess && !inatt) return;
  for (std::size_t i = 0; i < s.items; ++i) {
    const AsymptoteCounts n = asymptote_counts(s, data, i);
    if (guess) {
      s.c[i] = slice_sample(s.rng, s.c[i], 0.0, s.d[i],
                            [&](double c) { return log_conditional_c(c, n, inatt); });
    }
    if (inatt) {
      s.d[i] = slice_sample(s.rng, s.d[i], s.c[i], 1.0,
                            [&](double d) { return log_conditional_d(d, n); });
    }
  }
}

void freeze_adaptation(ChainState& s) {
  s.adapting = false;
  std::fill(s.theta_accepts.begin(), s.theta_accepts.end(), 0);
  std::fill(s.alpha_accepts.begin(), s.alpha_accepts.end(), 0);
  std::fill(s.tau_accepts.begin(), s.tau_accepts.end(), 0);
  s.batch_iterations = 0;
}

void sweep(ChainState& s, const ResponseMatrix& data, const SamplerConfig& config) {
  update_z(s, data);
  update_theta(s);
  update_loading_threshold(s);
  update_asymptotes(s, data);
  if (!s.adapting) return;
  if (++s.batch_iterations < kAdaptationBatch) return;
  ++s.batches_completed;
  const double delta =
      std::min(0.1, 1.0 / std::sqrt(static_cast<double>(s.batches_completed)));
  const double target = config.proposal_target_acceptance;
  adapt(s.steps.theta, s.theta_accepts, s.batch_iterations, target, delta, kMaxStep);
  adapt(s.steps.alpha, s.alpha_accepts, s.batch_iterations, target, delta, 1.0);
  adapt(s.steps.tau, s.tau_accepts, s.batch_iterations, target, delta, kMaxStep);
  s.batch_iterations = 0;
}

ChainDraws run_chain(const ResponseMatrix& data, const SamplerConfig& config,
                     std::size_t chain_index) {
  config.validate();
  ChainState s = init_chain(data, config, chain_index);
  for (std::size_t it = 0; it < config.burnin; ++it) sweep(s, data, config);
  freeze_adaptation(s);

  const std::size_t n = s.persons;
  const std::size_t m = s.items;
  ChainDraws out;
  out.frozen_steps = s.steps;
  const std::size_t expected = config.draws_per_chain();
  out.alpha.reserve(expected * m);
  out.tau.reserve(expected * m);
  out.c.reserve(expected * m);
  out.d.reserve(expected * m);
  out.theta_mean.assign(n, 0.0);
  out.z_mean.assign(n * m, 0.0);

  for (std::size_t k = 1; k <= config.samples; ++k) {
    sweep(s, data, config);
    if (k % config.thin != 0) continue;
    ++out.draws;
    out.iterations.push_back(config.burnin + k);
    out.alpha.insert(out.alpha.end(), s.alpha.begin(), s.alpha.end());
    out.tau.insert(out.tau.end(), s.tau.begin(), s.tau.end());
    out.c.insert(out.c.end(), s.c.begin(), s.c.end());
    out.d.insert(out.d.end(), s.d.begin(), s.d.end());
    for (std::size_t p = 0; p < n; ++p) out.theta_mean[p] += s.theta[p];
    for (std::size_t k2 = 0; k2 < n * m; ++k2) out.z_mean[k2] += s.z[k2];
    if (config.keep_theta_trace) {
      out.theta_trace.insert(out.theta_trace.end(), s.theta.begin(), s.theta.end());
    }
  }
  const double draws = static_cast<double>(out.draws);
  for (double& v : out.theta_mean) v /= draws;
  for (double& v : out.z_mean) v /= draws;
  return out;
}

std::size_t PosteriorDraws::total_draws() const noexcept {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.draws;
  return total;
}

namespace {

std::vector<double> pooled_mean(const std::vector<ChainDraws>& chains, std::size_t size,
                                const std::vector<double> ChainDraws::*field) {
  std::vector<double> out(size, 0.0);
  double total = 0.0;
  for (const auto& c : chains) {
    const auto& v = c.*field;
    const double w = static_cast<double>(c.draws);
    for (std::size_t k = 0; k < size; ++k) out[k] += w * v[k];
    total += w;
  }
  for (double& v : out) v /= total;
  return out;
}

const std::vector<double>& item_field(const ChainDraws& c, const std::string& which) {
  if (which == "alpha") return c.alpha;
  if (which == "tau") return c.tau;
  if (which == "c") return c.c;
  if (which == "d") return c.d;
  throw Error(ErrorKind::Domain, "unknown item parameter '" + which + "'");
}

}  // namespace

std::vector<double> PosteriorDraws::pooled_z_mean() const {
  return pooled_mean(chains, persons * items, &ChainDraws::z_mean);
}

std::vector<double> PosteriorDraws::pooled_theta_mean() const {
  return pooled_mean(chains, persons, &ChainDraws::theta_mean);
}

std::vector<std::vector<double>> PosteriorDraws::item_traces(const std::string& which,
                                                             std::size_t item) const {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    const auto& v = item_field(c, which);
    std::vector<double> trace(c.draws);
    for (std::size_t t = 0; t < c.draws; ++t) trace[t] = v[t * items + item];
    out.push_back(std::move(trace));
  }
  return out;
}

std::string parameter_name(const std::string& which, const std::string& item_id) {
  return which + "[" + item_id + "]";
}

FitResult fit(const ResponseMatrix& data, const SamplerConfig& config) {
  config.validate();

  FitResult result;
  result.config = config;
  result.item_ids = data.item_ids();
  result.person_ids = data.person_ids();
  result.draws.persons = data.persons();
  result.draws.items = data.items();
  result.draws.chains.resize(config.chains);

  if (config.parallel_chains && config.chains > 1) {
    std::vector<std::exception_ptr> errors(config.chains);
    std::vector<std::thread> workers;
    for (std::size_t k = 0; k < config.chains; ++k) {
      workers.emplace_back([&, k] {
        try {
          result.draws.chains[k] = run_chain(data, config, k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t k = 0; k < config.chains; ++k) {
      result.draws.chains[k] = run_chain(data, config, k);
    }
  }

  const std::size_t m = data.items();
  std::vector<ParameterTraces> traces;
  for (std::size_t i = 0; i < m; ++i) {
    double median[4];
    int slot = 0;
    for (const char* which : {"alpha", "tau", "c", "d"}) {
      ParameterTraces t{parameter_name(which, result.item_ids[i]),
                        result.draws.item_traces(which, i)};
      std::vector<double> pooled;
      for (const auto& c : t.chains) pooled.insert(pooled.end(), c.begin(), c.end());
      median[slot++] = quantile(std::move(pooled), 0.5);
      traces.push_back(std::move(t));
    }
    const FAItemParams fa(median[0], median[1], median[2], median[3]);
    result.fa_estimates.push_back(fa);
    result.irt_estimates.push_back(fa_to_irt(fa));
  }
  result.theta_hat = result.draws.pooled_theta_mean();
  result.z_hat = result.draws.pooled_z_mean();
  result.diagnostics = diagnose(traces);
  return result;
}

}  // namespace fa4p
