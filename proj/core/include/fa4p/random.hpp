#pragma once

// Random number plumbing. Every variate is produced from raw 64-bit words by
// code in this library (no std::*_distribution), so streams are
// bit-reproducible across standard library implementations.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace fa4p {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from a master seed and up to two
/// stream coordinates (e.g. chain index, or person and item).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

/// Inverse of the standard normal CDF for p in (0, 1).
double std_normal_quantile(double p);

/// Counter-based generator: output k of stream `key` is splitmix64(key + k*golden).
/// Cheap to construct, so one can be created per (person, item) cell.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Engine = std::mt19937_64;

/// Uniform on [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform on the open interval (0, 1).
template <class G>
double uniform_open(G& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

template <class G>
double uniform(G& g, double lo, double hi) {
  return lo + (hi - lo) * uniform_open(g);
}

template <class G>
double std_normal(G& g) {
  return std_normal_quantile(uniform_open(g));
}

/// Standard logistic variate (scale 1, variance pi^2 / 3) by inverse CDF.
template <class G>
double std_logistic(G& g) {
  const double u = uniform_open(g);
  return std::log(u) - std::log1p(-u);
}

template <class G>
bool bernoulli(G& g, double p) {
  return uniform01(g) < p;
}

/// Normal(mean, sd) truncated to (lo, hi) by rejection; intended for
/// truncation regions with non-negligible mass.
template <class G>
double truncated_normal(G& g, double mean, double sd, double lo, double hi) {
  for (;;) {
    const double x = mean + sd * std_normal(g);
    if (x > lo && x < hi) return x;
  }
}

}  // namespace fa4p
