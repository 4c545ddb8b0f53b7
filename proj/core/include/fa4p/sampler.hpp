#pragma once

// Metropolis-within-Gibbs sampler for the hierarchical four-parameter
// factor-analytic model:
//
//   theta_p ~ N(0, 1)
//   Z_ip | theta_p ~ Bernoulli(F((alpha_i theta_p - tau_i) / u_i))
//   Y_ip | Z_ip ~ Bernoulli(d_i^Z c_i^(1 - Z))
//   tau_i ~ N(0, 1), alpha_i ~ N(0.25, 1) truncated to (0, 1),
//   c_i ~ U(0, 1), d_i | c_i ~ U(c_i, 1)
//
// One sweep updates Z (exact Gibbs), theta (random-walk Metropolis),
// (alpha, tau) (random-walk Metropolis, one coordinate at a time) and then
// (c, d) (slice sampling of the exact full conditionals). Step sizes adapt in
// batches during burn-in and are frozen afterwards.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fa4p/diagnostics.hpp"
#include "fa4p/model.hpp"
#include "fa4p/random.hpp"
#include "fa4p/response_matrix.hpp"

namespace fa4p {

struct SamplerConfig {
  std::size_t chains = 2;
  std::size_t burnin = 4000;
  /// Post burn-in iterations per chain; every `thin`-th one is retained.
  std::size_t samples = 4000;
  std::size_t thin = 1;
  std::uint64_t seed = 20250101;
  ModelSpec model{};
  double proposal_target_acceptance = 0.44;
  /// Keep full per-draw theta traces in addition to running means.
  bool keep_theta_trace = false;
  /// Run chains on separate threads. Results do not depend on this flag.
  bool parallel_chains = true;

  /// Retained draws per chain.
  std::size_t draws_per_chain() const noexcept { return thin == 0 ? 0 : samples / thin; }

  /// Throws Config on chains == 0, samples == 0, thin == 0, samples < thin,
  /// or a target acceptance outside (0, 1).
  void validate() const;
};

inline constexpr double kAlphaPriorMean = 0.25;
inline constexpr double kAlphaPriorSd = 1.0;
inline constexpr std::size_t kAdaptationBatch = 50;

struct StepSizes {
  std::vector<double> theta;
  std::vector<double> alpha;
  std::vector<double> tau;

  friend bool operator==(const StepSizes&, const StepSizes&) = default;
};

struct ChainState {
  ModelSpec model;
  std::size_t persons = 0;
  std::size_t items = 0;

  std::vector<double> theta;     // persons
  std::vector<std::uint8_t> z;   // persons x items, row-major
  std::vector<double> alpha;     // items
  std::vector<double> tau;
  std::vector<double> c;
  std::vector<double> d;

  Engine rng;
  StepSizes steps;

  // Acceptance counts within the current adaptation batch.
  std::vector<std::uint32_t> theta_accepts;
  std::vector<std::uint32_t> alpha_accepts;
  std::vector<std::uint32_t> tau_accepts;
  std::size_t batch_iterations = 0;
  std::size_t batches_completed = 0;
  bool adapting = true;

  std::uint8_t& z_at(std::size_t p, std::size_t i) { return z[p * items + i]; }
  std::uint8_t z_at(std::size_t p, std::size_t i) const { return z[p * items + i]; }

  /// (alpha_i theta_p - tau_i) / u_i.
  double argument(std::size_t p, std::size_t i) const;

  FAItemParams item(std::size_t i) const { return FAItemParams(alpha[i], tau[i], c[i], d[i]); }

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

/// Chain 0 starts deterministically (alpha = 0.5, tau = 0, c = 0.05 and
/// d = 0.95 where estimated, theta = standardized total score). Later chains
/// draw item parameters from the priors and theta from N(0, 1). Z starts at Y.
/// The chain's generator is seeded from (config.seed, chain_index).
ChainState init_chain(const ResponseMatrix& data, const SamplerConfig& config,
                      std::size_t chain_index);

/// Redraws every Z_ip from its exact conditional given Y, theta and the items.
void update_z(ChainState& state, const ResponseMatrix& data);

/// Per-person random-walk Metropolis on theta given Z.
void update_theta(ChainState& state);

/// Per-item random-walk Metropolis on alpha (proposals outside (0, 1) are
/// rejected), then on tau, given theta and Z.
void update_loading_threshold(ChainState& state);

/// Slice-samples the estimated asymptotes from their full conditionals given
/// Z and Y. Pinned asymptotes are left untouched.
void update_asymptotes(ChainState& state, const ResponseMatrix& data);

/// Full sweep in the order Z, theta, (alpha, tau), (c, d), followed by
/// step-size adaptation while the state is still adapting.
void sweep(ChainState& state, const ResponseMatrix& data, const SamplerConfig& config);

/// Stops adaptation; step sizes stay constant from here on.
void freeze_adaptation(ChainState& state);

/// Sufficient counts for one item's asymptotes.
struct AsymptoteCounts {
  std::size_t s0 = 0;  // Z = 0, Y = 1
  std::size_t f0 = 0;  // Z = 0, Y = 0
  std::size_t s1 = 0;  // Z = 1, Y = 1
  std::size_t f1 = 0;  // Z = 1, Y = 0
};
AsymptoteCounts asymptote_counts(const ChainState& state, const ResponseMatrix& data,
                                 std::size_t item);

/// Unnormalized log full conditional of c (on (0, d)) for the given counts.
/// `inattention_estimated` adds the (1 - c)^-1 factor contributed by the
/// d | c ~ U(c, 1) prior.
double log_conditional_c(double c, const AsymptoteCounts& n, bool inattention_estimated);
/// Unnormalized log full conditional of d on (c, 1).
double log_conditional_d(double d, const AsymptoteCounts& n);

/// Retained output of one chain.
struct ChainDraws {
  std::size_t draws = 0;
  std::vector<double> alpha;  // draws x items, draw-major
  std::vector<double> tau;
  std::vector<double> c;
  std::vector<double> d;
  std::vector<std::size_t> iterations;  // 1-based sweep index of each draw
  std::vector<double> theta_mean;       // persons
  std::vector<double> z_mean;           // persons x items
  std::vector<double> theta_trace;      // draws x persons, optional
  StepSizes frozen_steps;
};

struct PosteriorDraws {
  std::size_t persons = 0;
  std::size_t items = 0;
  std::vector<ChainDraws> chains;

  std::size_t total_draws() const noexcept;
  /// Pooled posterior mean of Z (persons x items), chains weighted by draws.
  std::vector<double> pooled_z_mean() const;
  std::vector<double> pooled_theta_mean() const;
  /// Per-chain traces of one item parameter; `which` is one of
  /// "alpha", "tau", "c", "d".
  std::vector<std::vector<double>> item_traces(const std::string& which,
                                               std::size_t item) const;
};

/// Runs one chain: burn-in with adaptation, then `samples` frozen sweeps.
ChainDraws run_chain(const ResponseMatrix& data, const SamplerConfig& config,
                     std::size_t chain_index);

struct FitResult {
  SamplerConfig config;
  std::vector<std::string> item_ids;
  std::vector<std::string> person_ids;
  /// Pooled posterior medians; the IRT values are fa_to_irt of the FA ones.
  std::vector<FAItemParams> fa_estimates;
  std::vector<IRTItemParams> irt_estimates;
  std::vector<double> theta_hat;  // pooled posterior means
  std::vector<double> z_hat;      // pooled posterior means, persons x items
  PosteriorDraws draws;
  DiagnosticsReport diagnostics;
};

/// Parameter names used in traces and diagnostics, e.g. "alpha[Item49]".
std::string parameter_name(const std::string& which, const std::string& item_id);

/// Runs all chains independently, pools the retained draws and summarizes.
FitResult fit(const ResponseMatrix& data, const SamplerConfig& config);

}  // namespace fa4p
