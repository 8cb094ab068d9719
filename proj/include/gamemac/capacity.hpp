#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gamemac/channels.hpp"
#include "gamemac/correlations.hpp"
#include "gamemac/games.hpp"
#include "gamemac/infotheory.hpp"
#include "gamemac/io.hpp"

namespace gamemac {

struct OptimizerConfig {
  double grid_step = 0.0;  // 0 picks 0.05 for d = 2 and 0.1 otherwise
  int restarts = 20;
  double tolerance = 1e-7;
  int max_iterations = 4000;
  std::uint64_t seed = 20240917;
  unsigned threads = 0;  // 0 uses std::thread::hardware_concurrency
  std::size_t vertex_cap = kDefaultVertexCap;

  void validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("optimizer tolerance must be positive");
    if (restarts < 1) throw std::invalid_argument("optimizer needs at least one restart");
    if (max_iterations < 1) throw std::invalid_argument("optimizer needs max_iterations >= 1");
    if (grid_step < 0.0 || grid_step > 1.0) throw std::invalid_argument("grid step must lie in (0,1]");
  }

  double step_for(int symbols) const {
    if (grid_step > 0.0) return grid_step;
    return symbols == 2 ? 0.05 : 0.1;
  }

  unsigned worker_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

enum class BoundKind { exact, lower_bound, upper_bound };

inline std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::exact: return "exact";
    case BoundKind::lower_bound: return "lower-bound";
    case BoundKind::upper_bound: return "upper-bound";
  }
  return "unknown";
}

struct OptimizerDiagnostics {
  std::size_t grid_points = 0;
  int restarts = 0;
  long iterations = 0;
  double simplex_size = 0.0;
  std::size_t evaluations = 0;
};

struct PiMaximum {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> weights;  // flattened pi_k, sender 0 first
  OptimizerDiagnostics diagnostics;
};

struct CapacityResult {
  double value = 0.0;
  BoundKind kind = BoundKind::exact;
  std::string resource;  // L, Q, NS, any, or a user label
  std::optional<std::vector<double>> argmax_pi;
  std::string argmax_encoder;
  std::optional<OptimizerDiagnostics> diagnostics;
  std::string note;

  /// Single CSV-safe field (no commas).
  std::string diagnostic() const {
    std::ostringstream out;
    const char* sep = "";
    if (argmax_pi) {
      out << "pi=";
      for (std::size_t i = 0; i < argmax_pi->size(); ++i) out << (i ? ";" : "") << io::format_double((*argmax_pi)[i], 6);
      sep = " ";
    }
    if (!argmax_encoder.empty()) {
      out << sep << "encoder=" << argmax_encoder;
      sep = " ";
    }
    if (diagnostics) {
      out << sep << "restarts=" << diagnostics->restarts << " iterations=" << diagnostics->iterations
          << " simplex=" << io::format_double(diagnostics->simplex_size, 3);
      sep = " ";
    }
    if (!note.empty()) out << sep << note;
    return out.str();
  }
};

using PiObjective = std::function<double(const ProductDistribution&)>;

namespace detail {

/// All weight vectors on the d-simplex with entries in {0, 1/K, ..., 1},
/// lexicographic order.
inline std::vector<std::vector<double>> simplex_grid(int symbols, int divisions) {
  std::vector<std::vector<double>> points;
  std::vector<int> counts(static_cast<std::size_t>(symbols));
  std::function<void(int, int)> fill = [&](int position, int remaining) {
    if (position == symbols - 1) {
      counts[static_cast<std::size_t>(position)] = remaining;
      std::vector<double> p(static_cast<std::size_t>(symbols));
      for (int i = 0; i < symbols; ++i) p[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / divisions;
      points.push_back(std::move(p));
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(position)] = c;
      fill(position + 1, remaining - c);
    }
  };
  fill(0, divisions);
  return points;
}

/// Clip to the nonnegative orthant and renormalise each sender's block.
inline std::vector<double> project(std::span<const double> point, int senders, int symbols) {
  std::vector<double> out(point.begin(), point.end());
  for (int k = 0; k < senders; ++k) {
    const auto begin = out.begin() + k * symbols;
    double sum = 0.0;
    for (auto it = begin; it != begin + symbols; ++it) {
      *it = std::max(*it, 0.0);
      sum += *it;
    }
    for (auto it = begin; it != begin + symbols; ++it) *it = sum > 0.0 ? *it / sum : 1.0 / symbols;
    // Absorb rounding so each block sums to 1 within the distribution's tolerance.
    double drift = 1.0;
    for (auto it = begin; it != begin + symbols; ++it) drift -= *it;
    *std::max_element(begin, begin + symbols) += drift;
  }
  return out;
}

struct LocalSearch {
  double value;
  std::vector<double> point;
  long iterations;
  double simplex_size;
  std::size_t evaluations;
};

/// Nelder-Mead on the projected objective, maximising.
inline LocalSearch nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> start,
                               double initial_step, double tolerance, int max_iterations) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex{start};
  for (std::size_t i = 0; i < dim; ++i) {
    auto v = start;
    v[i] += v[i] + initial_step <= 1.0 ? initial_step : -initial_step;
    simplex.push_back(std::move(v));
  }
  std::vector<double> values;
  std::size_t evaluations = 0;
  auto eval = [&](std::span<const double> p) {
    ++evaluations;
    return f(p);
  };
  for (const auto& v : simplex) values.push_back(eval(v));

  std::vector<std::size_t> order(simplex.size());
  long iter = 0;
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };
  for (; iter < max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (std::abs(values[best] - values[worst]) < tolerance) break;

    std::vector<double> centroid(dim);
    for (std::size_t j = 0; j + 1 < order.size(); ++j)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[order[j]][i] / static_cast<double>(dim);

    auto reflected = combine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr > values[best]) {
      auto expanded = combine(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe > fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr > values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr > values[worst];
    auto contracted = combine(centroid, outside ? reflected : simplex[worst], 0.5);
    const double fc = eval(contracted);
    if (fc > (outside ? fr : values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t j = 1; j < order.size(); ++j) {
      const std::size_t idx = order[j];
      simplex[idx] = combine(simplex[best], simplex[idx], 0.5);
      values[idx] = eval(simplex[idx]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  double size = 0.0;
  for (const auto& v : simplex) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) d2 += (v[i] - simplex[best][i]) * (v[i] - simplex[best][i]);
    size = std::max(size, std::sqrt(d2));
  }
  return LocalSearch{values[best], simplex[best], iter, size, evaluations};
}

}  // namespace detail

/// Maximises `objective` over product distributions: a lexicographic grid
/// over each sender's simplex, then Nelder-Mead refinements from the best
/// grid point and from random starts. Deterministic for a fixed seed.
inline PiMaximum maximize_over_pi(const PiObjective& objective, int senders, int symbols, const OptimizerConfig& cfg) {
  cfg.validate();
  if (senders < 1 || symbols < 1) throw std::invalid_argument("maximize_over_pi needs senders >= 1 and symbols >= 1");
  const double step = cfg.step_for(symbols);
  const int divisions = static_cast<int>(std::lround(1.0 / step));
  if (divisions < 1 || std::abs(divisions * step - 1.0) > 1e-9) {
    throw std::invalid_argument("grid step " + io::format_double(step) + " does not divide 1");
  }

  PiMaximum result;
  auto evaluate = [&](std::span<const double> weights) {
    ++result.diagnostics.evaluations;
    return objective(ProductDistribution(senders, symbols, std::vector<double>(weights.begin(), weights.end())));
  };

  const auto marginal_grid = detail::simplex_grid(symbols, divisions);
  std::vector<std::size_t> choice(static_cast<std::size_t>(senders));
  std::vector<double> point(static_cast<std::size_t>(senders * symbols));
  while (true) {
    for (int k = 0; k < senders; ++k) {
      const auto& p = marginal_grid[choice[static_cast<std::size_t>(k)]];
      std::copy(p.begin(), p.end(), point.begin() + k * symbols);
    }
    const double v = evaluate(point);
    ++result.diagnostics.grid_points;
    if (v > result.value) {
      result.value = v;
      result.weights = point;
    }
    int k = senders - 1;
    while (k >= 0 && ++choice[static_cast<std::size_t>(k)] == marginal_grid.size()) choice[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }

  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> exponential(1.0);
  auto projected = [&](std::span<const double> raw) { return evaluate(detail::project(raw, senders, symbols)); };
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start;
    if (r == 0) {
      start = result.weights;
    } else {
      start.resize(point.size());
      for (auto& w : start) w = exponential(rng);
      start = detail::project(start, senders, symbols);
    }
    const auto local = detail::nelder_mead(projected, start, step, cfg.tolerance, cfg.max_iterations);
    ++result.diagnostics.restarts;
    result.diagnostics.iterations += local.iterations;
    if (r == 0) result.diagnostics.simplex_size = local.simplex_size;
    if (local.value > result.value) {
      result.value = local.value;
      result.weights = detail::project(local.point, senders, symbols);
      result.diagnostics.simplex_size = local.simplex_size;
    }
  }
  return result;
}

/// Sum of the `count` largest entries.
inline double top_mass(std::span<const double> weights, std::size_t count) {
  std::vector<double> sorted(weights.begin(), weights.end());
  count = std::min(count, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count), sorted.end(), std::greater<>());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
}

// ---------------------------------------------------------------------------
// Classical game value

struct GameValue {
  std::size_t winning_questions = 0;  // best number of question tuples won
  std::size_t questions = 0;
  std::size_t vertex = 0;             // lowest-index optimal local vertex
  std::vector<std::vector<int>> strategy;

  double value() const { return static_cast<double>(winning_questions) / static_cast<double>(questions); }
};

/// omega*_L at uniform questions by enumerating deterministic strategies.
inline GameValue bruteforce_classical_game_value(const NonlocalGame& game, std::size_t cap = kDefaultVertexCap) {
  const Scenario& s = game.scenario();
  const auto vertices = local_deterministic_boxes(s, cap);
  GameValue best;
  best.questions = s.input_tuples();
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const auto strategy = local_strategy(s, v);
    std::size_t won = 0;
    for (std::size_t q = 0; q < s.input_tuples(); ++q)
      if (game.wins(q, strategy_answer(s, strategy, q))) ++won;
    if (won > best.winning_questions || v == 0) {
      best.winning_questions = won;
      best.vertex = v;
      best.strategy = strategy;
      if (won == best.questions) break;
    }
  }
  return best;
}

/// 3/4 + 2^-(ceil(n/2)+1).
inline double mpp_classical_value(int players) {
  if (players < 2) throw std::invalid_argument("MPP game needs at least 2 players");
  return 0.75 + std::ldexp(1.0, -((players + 1) / 2 + 1));
}

// ---------------------------------------------------------------------------
// Classical capacity

namespace detail {

/// Distinct effective channels P(y|m) of deterministic encoders. Inputs with
/// identical channel rows are merged, so two vertices collide exactly when
/// they produce the same effective channel.
struct DeterministicFamily {
  std::vector<std::size_t> representative;  // lowest vertex index per class
  std::vector<std::vector<std::size_t>> rows;  // per class: canonical input per message
};

inline DeterministicFamily deterministic_family(const MacChannel& channel, std::size_t cap) {
  const Scenario& game = channel.game().scenario();
  const Scenario enc{game.parties, game.inputs, game.inputs * game.outputs};
  const auto vertices = local_deterministic_boxes(enc, cap);

  std::vector<std::size_t> canonical(channel.input_count());
  for (std::size_t x = 0; x < canonical.size(); ++x) {
    canonical[x] = x;
    for (std::size_t earlier = 0; earlier < x; ++earlier) {
      if (canonical[earlier] == earlier && std::ranges::equal(channel.row(earlier), channel.row(x))) {
        canonical[x] = earlier;
        break;
      }
    }
  }

  DeterministicFamily family;
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const auto strategy = local_strategy(enc, v);
    std::vector<std::size_t> key(enc.input_tuples());
    for (std::size_t m = 0; m < key.size(); ++m) key[m] = canonical[strategy_answer(enc, strategy, m)];
    if (seen.emplace(key, family.rows.size()).second) {
      family.representative.push_back(v);
      family.rows.push_back(std::move(key));
    }
  }
  return family;
}

inline std::vector<double> deterministic_matrix(const MacChannel& channel, std::span<const std::size_t> inputs) {
  const std::size_t outputs = channel.output_count();
  std::vector<double> matrix(inputs.size() * outputs);
  for (std::size_t m = 0; m < inputs.size(); ++m) {
    const auto row = channel.row(inputs[m]);
    std::copy(row.begin(), row.end(), matrix.begin() + static_cast<std::ptrdiff_t>(m * outputs));
  }
  return matrix;
}

/// Runs `work(i)` for i in [0, count) on `workers` threads in contiguous chunks.
template <typename Work>
void parallel_for(std::size_t count, unsigned workers, Work&& work) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) work(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Max over deterministic encoders (local vertices of the (n, d, d*D)
/// scenario) of the pi-maximised sum-rate. Refuses above cfg.vertex_cap.
inline CapacityResult classical_capacity_exact(const MacChannel& channel, const OptimizerConfig& cfg) {
  const Scenario& s = channel.game().scenario();
  detail::DeterministicFamily family;
  try {
    family = detail::deterministic_family(channel, cfg.vertex_cap);
  } catch (const EnumerationCapExceeded& e) {
    throw EnumerationCapExceeded(e.count(), e.cap(),
                                 std::string(e.what()) + "; use the classical upper bound (L-bound) instead");
  }

  std::vector<PiMaximum> maxima(family.rows.size());
  detail::parallel_for(family.rows.size(), cfg.worker_count(), [&](std::size_t i) {
    const auto matrix = detail::deterministic_matrix(channel, family.rows[i]);
    maxima[i] = maximize_over_pi(
        [&](const ProductDistribution& pi) { return information_through(pi.joint(), matrix, channel.output_count()); },
        s.parties, s.inputs, cfg);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < maxima.size(); ++i)
    if (maxima[i].value > maxima[best].value) best = i;
  CapacityResult result;
  result.value = maxima[best].value;
  result.kind = BoundKind::exact;
  result.resource = "L";
  result.argmax_pi = maxima[best].weights;
  result.argmax_encoder = "vertex:" + std::to_string(family.representative[best]);
  result.diagnostics = maxima[best].diagnostics;
  result.note = "classes=" + std::to_string(family.rows.size());
  return result;
}

/// Best deterministic-encoder sum-rate at a fixed message distribution.
inline CapacityResult best_deterministic_rate_at(const MacChannel& channel, const ProductDistribution& pi,
                                                 std::size_t cap = kDefaultVertexCap) {
  const auto family = detail::deterministic_family(channel, cap);
  const auto prior = pi.joint();
  CapacityResult result;
  result.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.rows.size(); ++i) {
    const double v = information_through(prior, detail::deterministic_matrix(channel, family.rows[i]), channel.output_count());
    if (v > result.value) {
      result.value = v;
      result.argmax_encoder = "vertex:" + std::to_string(family.representative[i]);
    }
  }
  result.kind = BoundKind::exact;
  result.resource = "L";
  result.argmax_pi = std::vector<double>(pi.weights().begin(), pi.weights().end());
  return result;
}

// ---------------------------------------------------------------------------
// Bounds

/// Win probability ceiling as a function of the message distribution.
using WinRule = std::function<double(const ProductDistribution&)>;

/// max_pi { H(M) + (f_L - f_W) * rule(pi) } - f_L.
inline CapacityResult resource_dependent_bound(const MacChannel& channel, const WinRule& max_win, const OptimizerConfig& cfg,
                                               std::string resource = "any") {
  const Scenario& s = channel.game().scenario();
  const double gap = channel.f_lose() - channel.f_win();
  const auto best = maximize_over_pi(
      [&](const ProductDistribution& pi) {
        return shannon_entropy(pi.joint()) + gap * max_win(pi) - channel.f_lose();
      },
      s.parties, s.inputs, cfg);
  CapacityResult result;
  result.value = best.value;
  result.kind = BoundKind::upper_bound;
  result.resource = std::move(resource);
  result.argmax_pi = best.weights;
  result.diagnostics = best.diagnostics;
  return result;
}

/// Constant win-probability ceiling over the resource class.
inline CapacityResult resource_dependent_bound(const MacChannel& channel, double max_win, const OptimizerConfig& cfg,
                                               std::string resource = "any") {
  if (!(max_win >= 0.0 && max_win <= 1.0)) throw std::invalid_argument("max win probability must lie in [0,1]");
  return resource_dependent_bound(channel, [max_win](const ProductDistribution&) { return max_win; }, cfg,
                                  std::move(resource));
}

/// Classical upper bound: a deterministic encoder maps at most
/// r_max = round(omega*_L * Delta) message tuples into the winning set, so
/// omega is at most the r_max largest pi(m) summed.
inline CapacityResult classical_upper_bound(const MacChannel& channel, double omega_local, const OptimizerConfig& cfg) {
  if (!(omega_local > 0.0 && omega_local <= 1.0)) throw std::invalid_argument("omega*_L must lie in (0,1]");
  const double delta = static_cast<double>(channel.output_count());
  const auto r_max = static_cast<std::size_t>(std::lround(omega_local * delta));
  auto result = resource_dependent_bound(
      channel, [r_max](const ProductDistribution& pi) { return top_mass(pi.joint(), r_max); }, cfg, "L");
  result.note = "r_max=" + std::to_string(r_max);
  return result;
}

/// omega*_L used by the classical bound: brute force, or the closed form for
/// MPP games too large to enumerate.
inline double classical_game_value_for_bound(const NonlocalGame& game, std::size_t cap = kDefaultVertexCap) {
  try {
    return bruteforce_classical_game_value(game, cap).value();
  } catch (const EnumerationCapExceeded&) {
    if (game.name().starts_with("mpp:")) return mpp_classical_value(game.players());
    throw;
  }
}

// ---------------------------------------------------------------------------
// Pseudo-telepathy and nonlocal boxes

inline constexpr double kPseudoTelepathyTolerance = 1e-10;
inline constexpr double kCrossCheckTolerance = 1e-9;

/// log Delta - f_W for a box that wins with certainty and has uniform local
/// outputs; refuses otherwise. Cross-checked against the direct sum-rate at
/// uniform pi.
inline CapacityResult pseudo_telepathy_capacity(const MacChannel& channel, const CorrelationBox& box, std::string resource) {
  const NonlocalGame& game = channel.game();
  if (!(box.scenario() == game.scenario())) {
    throw std::invalid_argument("box scenario " + box.scenario().to_string() + " does not match game " + game.name());
  }
  const auto encoder = e_star(box);
  const auto uniform = ProductDistribution::uniform(game.players(), game.scenario().inputs);
  const double omega = win_probability(uniform, encoder, game);
  if (std::abs(omega - 1.0) > kPseudoTelepathyTolerance) {
    throw std::domain_error("box " + box.label() + " wins " + game.name() + " with probability " + io::format_double(omega) +
                            ", not 1");
  }
  const double uniformity = output_uniformity_error(box);
  if (uniformity > kPseudoTelepathyTolerance) {
    throw std::domain_error("box " + box.label() + " has non-uniform local outputs (deviation " +
                            io::format_double(uniformity) + ")");
  }
  const double delta = static_cast<double>(channel.output_count());
  const double f_win = channel.retention() ? noise_entropy(channel.output_count(), channel.retention()->first) : channel.f_win();
  const double value = std::log2(delta) - f_win;
  const double direct = sum_rate(uniform, encoder, channel);
  if (std::abs(direct - value) > kCrossCheckTolerance) {
    throw std::logic_error("pseudo-telepathy capacity " + io::format_double(value) + " disagrees with direct sum-rate " +
                           io::format_double(direct));
  }
  CapacityResult result;
  result.value = value;
  result.kind = BoundKind::exact;
  result.resource = std::move(resource);
  result.argmax_pi = std::vector<double>(uniform.weights().begin(), uniform.weights().end());
  result.argmax_encoder = encoder.label();
  result.note = "direct=" + io::format_double(direct);
  return result;
}

/// Sum-rate of E* applied to `box`, maximised over pi.
inline CapacityResult box_rate(const MacChannel& channel, const CorrelationBox& box, const OptimizerConfig& cfg) {
  const Scenario& s = channel.game().scenario();
  if (!(box.scenario() == s)) {
    throw std::invalid_argument("box scenario " + box.scenario().to_string() + " does not match channel scenario " +
                                s.to_string());
  }
  const auto encoder = e_star(box);
  const auto matrix = effective_channel(encoder, channel);
  const auto best = maximize_over_pi(
      [&](const ProductDistribution& pi) { return information_through(pi.joint(), matrix, channel.output_count()); },
      s.parties, s.inputs, cfg);
  CapacityResult result;
  result.value = best.value;
  result.kind = BoundKind::lower_bound;
  result.argmax_pi = best.weights;
  result.argmax_encoder = encoder.label();
  result.diagnostics = best.diagnostics;
  return result;
}

inline CapacityResult quantum_lower_bound_chsh(const MacChannel& channel, const OptimizerConfig& cfg) {
  if (!(channel.game().scenario() == Scenario{2, 2, 2})) {
    throw std::invalid_argument("the Tsirelson-box lower bound needs a CHSH channel, got " + channel.game().name());
  }
  auto result = box_rate(channel, tsirelson_box(), cfg);
  result.resource = "Q";
  return result;
}

/// Max over the boxes listed in a CSV file of the E*-lifted sum-rate.
inline CapacityResult vertex_file_bound(const MacChannel& channel, const std::string& path, const OptimizerConfig& cfg,
                                        std::string resource = "vertex-file") {
  const auto boxes = load_box_file(path);
  if (boxes.empty()) throw std::invalid_argument("vertex file " + path + " lists no boxes");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!(boxes[i].scenario() == channel.game().scenario())) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " in " + path + " has scenario " +
                                  boxes[i].scenario().to_string() + ", channel needs " +
                                  channel.game().scenario().to_string());
    }
    const auto report = validate_box(boxes[i], ValidationMode::normalization);
    if (report.normalization_error > 1e-9 || report.negativity > 1e-12) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " in " + path + " is not a normalized distribution");
    }
  }
  std::vector<CapacityResult> rates(boxes.size());
  detail::parallel_for(boxes.size(), cfg.worker_count(), [&](std::size_t i) { rates[i] = box_rate(channel, boxes[i], cfg); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < rates.size(); ++i)
    if (rates[i].value > rates[best].value) best = i;
  CapacityResult result = rates[best];
  result.kind = BoundKind::upper_bound;
  result.resource = std::move(resource);
  result.argmax_encoder = "file-vertex:" + std::to_string(best);
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps

/// Perfect-strategy box shipped for a game, if any.
inline std::optional<CorrelationBox> builtin_perfect_box(const NonlocalGame& game, bool quantum) {
  if (game.name() == "chsh") return quantum ? std::nullopt : std::optional(pr_box());
  if (game.name() == "magic-square") return magic_square_box();
  if (game.name().starts_with("mpp:")) return mpp_box(game.players());
  return std::nullopt;
}

struct SweepRow {
  double eta = 0.0;
  std::string resource;
  CapacityResult result;
};

/// Per-eta capacities for a game's Type-I or Type-II channel family.
/// Resources: L-exact, L-bound, Q-lower, Q-exact, NS-exact, vertex-file:<path>.
inline std::vector<SweepRow> sweep(const NonlocalGame& game, ChannelType type, std::span<const double> etas,
                                   std::span<const std::string> resources, const OptimizerConfig& cfg) {
  std::optional<double> omega_local;
  std::vector<SweepRow> rows;
  for (double eta : etas) {
    const MacChannel channel = make_channel(game, type, eta);
    for (const auto& resource : resources) {
      CapacityResult result;
      if (resource == "L-exact") {
        result = classical_capacity_exact(channel, cfg);
      } else if (resource == "L-bound") {
        if (!omega_local) omega_local = classical_game_value_for_bound(game, cfg.vertex_cap);
        result = classical_upper_bound(channel, *omega_local, cfg);
      } else if (resource == "Q-lower") {
        result = quantum_lower_bound_chsh(channel, cfg);
      } else if (resource == "Q-exact" || resource == "NS-exact") {
        const bool quantum = resource == "Q-exact";
        const auto box = builtin_perfect_box(game, quantum);
        if (!box) throw std::invalid_argument(resource + " is not available for game " + game.name());
        result = pseudo_telepathy_capacity(channel, *box, quantum ? "Q" : "NS");
      } else if (resource.starts_with("vertex-file:")) {
        result = vertex_file_bound(channel, resource.substr(12), cfg);
      } else {
        throw std::invalid_argument("unknown resource '" + resource + "'");
      }
      rows.push_back(SweepRow{eta, resource, std::move(result)});
    }
  }
  return rows;
}

}  // namespace gamemac
