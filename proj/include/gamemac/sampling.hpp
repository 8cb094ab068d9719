#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gamemac/channels.hpp"
#include "gamemac/correlations.hpp"
#include "gamemac/games.hpp"
#include "gamemac/infotheory.hpp"

// Seeded generators for property checks. Every encoder is a mixture of local
// vertices and E*-lifted boxes, so M -> X -> Y is Markov by construction.
namespace gamemac::sampling {

using Rng = std::mt19937_64;

inline std::vector<double> random_simplex_point(Rng& rng, std::size_t size) {
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> p(size);
  double sum = 0.0;
  for (auto& v : p) sum += (v = exponential(rng));
  for (auto& v : p) v /= sum;
  // Park the rounding residue on the largest entry.
  double drift = 1.0;
  for (double v : p) drift -= v;
  *std::max_element(p.begin(), p.end()) += drift;
  return p;
}

inline ProductDistribution random_product_distribution(Rng& rng, int senders, int symbols) {
  std::vector<double> weights;
  for (int k = 0; k < senders; ++k) {
    const auto block = random_simplex_point(rng, static_cast<std::size_t>(symbols));
    weights.insert(weights.end(), block.begin(), block.end());
  }
  return ProductDistribution(senders, symbols, std::move(weights));
}

inline Encoder random_deterministic_encoder(Rng& rng, const Scenario& game_scenario) {
  const Scenario channel{game_scenario.parties, game_scenario.inputs, game_scenario.inputs * game_scenario.outputs};
  std::uniform_int_distribution<std::size_t> pick(0, local_vertex_count(channel) - 1);
  return Encoder::deterministic_vertex(game_scenario, pick(rng));
}

/// E* of a random mixture of local boxes, optionally with `extra` mixed in.
inline Encoder random_box_encoder(Rng& rng, const Scenario& game_scenario, const CorrelationBox* extra) {
  std::uniform_int_distribution<std::size_t> pick(0, local_vertex_count(game_scenario) - 1);
  std::vector<Encoder> parts;
  const int local_parts = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < local_parts; ++i) parts.push_back(e_star(local_deterministic_box(game_scenario, pick(rng))));
  if (extra) parts.push_back(e_star(*extra));
  const auto weights = random_simplex_point(rng, parts.size());
  return Encoder::mixture(weights, parts);
}

/// Mixture of deterministic encoders and E*-lifted boxes.
inline Encoder random_encoder(Rng& rng, const Scenario& game_scenario, const CorrelationBox* extra) {
  std::vector<Encoder> parts;
  const int vertices = static_cast<int>(rng() % 3);
  for (int i = 0; i < vertices; ++i) parts.push_back(random_deterministic_encoder(rng, game_scenario));
  parts.push_back(random_box_encoder(rng, game_scenario, extra));
  const auto weights = random_simplex_point(rng, parts.size());
  return Encoder::mixture(weights, parts);
}

/// Depolarizing MAC with 0 <= eta_l < eta_w <= 1 drawn uniformly.
inline MacChannel random_depolarizing_channel(Rng& rng, const NonlocalGame& game) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double a = unit(rng);
  double b = unit(rng);
  if (a == b) a = (1.0 + a) / 2.0;
  return depolarizing_mac(game, std::max(a, b), std::min(a, b));
}

}  // namespace gamemac::sampling
