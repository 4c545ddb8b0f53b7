#pragma once

// Generative sampling from the four-parameter factor-analytic model with all
// latent quantities retained.
//
// Streams: theta_p is drawn from stream (seed, p, m) and cell (p, i) uses
// stream (seed, p, i), each a StreamRng keyed by derive_seed. Cell draws are
// epsilon first, then the Bernoulli response. A dataset therefore depends
// only on (items, n, link, seed), never on evaluation order.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fa4p/model.hpp"
#include "fa4p/probability.hpp"
#include "fa4p/response_matrix.hpp"

namespace fa4p {

struct SimulatedDataset {
  std::size_t persons = 0;
  std::size_t items = 0;
  std::vector<std::uint8_t> responses;  // persons x items
  std::vector<double> true_theta;      // persons
  std::vector<std::uint8_t> true_z;    // persons x items
  std::vector<double> true_ystar;      // persons x items
  std::vector<FAItemParams> true_items;
  LinkFunction link = LinkFunction::Logistic;
  std::uint64_t seed = 0;

  /// Responses as a validated matrix (needs n >= 2 and m >= 2). Item ids are
  /// item1..itemM.
  ResponseMatrix matrix() const;
};

/// Draws n >= 1 persons for m >= 1 items.
SimulatedDataset simulate(std::span<const FAItemParams> items, std::size_t n, LinkFunction link,
                          std::uint64_t seed);

/// Error variate for the latent response: N(0, u^2) for the normal ogive,
/// u times a standard logistic for the logistic link.
template <class G>
double draw_error(G& g, LinkFunction link, double u);

/// Relative frequency of each observed pattern; keys are pattern indices
/// (item 0 = bit 0). Limited to m <= 12.
std::map<std::uint64_t, double> empirical_pattern_freq(const SimulatedDataset& dataset);

}  // namespace fa4p

#include "fa4p/random.hpp"

namespace fa4p {

template <class G>
double draw_error(G& g, LinkFunction link, double u) {
  return u * (link == LinkFunction::Logistic ? std_logistic(g) : std_normal(g));
}

}  // namespace fa4p
