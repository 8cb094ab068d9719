#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gamemac/games.hpp"
#include "gamemac/io.hpp"
#include "gamemac/quantum.hpp"
#include "gamemac/scenario.hpp"

namespace gamemac {

/// Conditional distribution P(a_1..a_n | q_1..q_n) stored densely, one row per
/// packed question tuple.
class CorrelationBox {
 public:
  CorrelationBox(Scenario scenario, std::vector<double> table, std::string label = {})
      : scenario_(scenario), table_(std::move(table)), label_(std::move(label)) {
    scenario_.validate();
    const std::size_t expected = scenario_.input_tuples() * scenario_.output_tuples();
    if (table_.size() != expected) {
      throw std::invalid_argument("box table for scenario " + scenario_.to_string() + " needs " +
                                  std::to_string(expected) + " entries, got " + std::to_string(table_.size()));
    }
  }

  const Scenario& scenario() const { return scenario_; }
  const std::string& label() const { return label_; }
  std::span<const double> table() const { return table_; }

  double probability(std::size_t question, std::size_t answer) const {
    return table_[question * scenario_.output_tuples() + answer];
  }

  std::span<const double> row(std::size_t question) const {
    const std::size_t width = scenario_.output_tuples();
    return std::span<const double>(table_).subspan(question * width, width);
  }

  bool is_deterministic(double tolerance = 1e-12) const {
    return std::all_of(table_.begin(), table_.end(),
                       [&](double p) { return std::abs(p) < tolerance || std::abs(p - 1.0) < tolerance; });
  }

  /// Marginal of one party's answer for a question tuple.
  std::vector<double> output_marginal(std::size_t question, int party) const {
    std::vector<double> marginal(static_cast<std::size_t>(scenario_.outputs));
    const auto r = row(question);
    for (std::size_t a = 0; a < r.size(); ++a) {
      marginal[static_cast<std::size_t>(tuple_digit(a, scenario_.outputs, scenario_.parties, party))] += r[a];
    }
    return marginal;
  }

 private:
  Scenario scenario_;
  std::vector<double> table_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Local deterministic boxes

inline constexpr std::size_t kDefaultVertexCap = 10'000'000;

class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(std::size_t count, std::size_t cap, const std::string& what)
      : std::runtime_error(what), count_(count), cap_(cap) {}
  std::size_t count() const { return count_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t count_;
  std::size_t cap_;
};

/// Number of local deterministic boxes (D^d)^n, or SIZE_MAX if that overflows.
inline std::size_t local_vertex_count(const Scenario& scenario) {
  try {
    return checked_pow(scenario.local_functions(), scenario.parties);
  } catch (const std::overflow_error&) {
    return SIZE_MAX;
  }
}

/// answers[k][q] is party k's answer to question q. Vertex indices pack the
/// per-party strategies base D^d with party 0 most significant; a strategy
/// packs its answers base D with question 0 most significant.
inline std::vector<std::vector<int>> local_strategy(const Scenario& scenario, std::size_t vertex) {
  const std::size_t per_party = scenario.local_functions();
  std::vector<std::vector<int>> answers(static_cast<std::size_t>(scenario.parties));
  for (int k = scenario.parties - 1; k >= 0; --k) {
    const std::size_t strategy = vertex % per_party;
    vertex /= per_party;
    answers[static_cast<std::size_t>(k)] = unpack_tuple(strategy, scenario.outputs, scenario.inputs);
  }
  return answers;
}

/// Answer tuple (packed) a deterministic strategy gives to a question tuple.
inline std::size_t strategy_answer(const Scenario& scenario, const std::vector<std::vector<int>>& strategy,
                                   std::size_t question) {
  std::size_t answer = 0;
  for (int k = 0; k < scenario.parties; ++k) {
    const int q = tuple_digit(question, scenario.inputs, scenario.parties, k);
    answer = answer * static_cast<std::size_t>(scenario.outputs) +
             static_cast<std::size_t>(strategy[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)]);
  }
  return answer;
}

inline CorrelationBox local_deterministic_box(const Scenario& scenario, std::size_t vertex) {
  const auto strategy = local_strategy(scenario, vertex);
  const std::size_t width = scenario.output_tuples();
  std::vector<double> table(scenario.input_tuples() * width);
  for (std::size_t q = 0; q < scenario.input_tuples(); ++q) table[q * width + strategy_answer(scenario, strategy, q)] = 1.0;
  return CorrelationBox(scenario, std::move(table), "local:" + std::to_string(vertex));
}

/// Lazy view over all local deterministic boxes of a scenario.
class LocalVertexEnumerator {
 public:
  LocalVertexEnumerator(Scenario scenario, std::size_t count) : scenario_(scenario), count_(count) {}

  const Scenario& scenario() const { return scenario_; }
  std::size_t size() const { return count_; }
  CorrelationBox operator[](std::size_t vertex) const { return local_deterministic_box(scenario_, vertex); }

  template <typename Visitor>
  void for_each(Visitor&& visit) const {
    for (std::size_t v = 0; v < count_; ++v) visit(v, local_deterministic_box(scenario_, v));
  }

 private:
  Scenario scenario_;
  std::size_t count_;
};

/// Refuses when (D^d)^n exceeds `cap` rather than truncating.
inline LocalVertexEnumerator local_deterministic_boxes(const Scenario& scenario, std::size_t cap = kDefaultVertexCap) {
  scenario.validate();
  const std::size_t count = local_vertex_count(scenario);
  if (count > cap) {
    const std::string shown = count == SIZE_MAX ? std::string("more than 2^64") : std::to_string(count);
    throw EnumerationCapExceeded(count, cap,
                                 "scenario " + scenario.to_string() + " has " + shown +
                                     " local deterministic vertices, above the enumeration cap of " + std::to_string(cap));
  }
  return LocalVertexEnumerator(scenario, count);
}

// ---------------------------------------------------------------------------
// Nonlocal boxes

inline CorrelationBox pr_box() {
  const Scenario scenario{2, 2, 2};
  std::vector<double> table(16);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
          table[static_cast<std::size_t>((q1 * 2 + q2) * 4 + a1 * 2 + a2)] = ((a1 ^ a2) == (q1 & q2)) ? 0.5 : 0.0;
  return CorrelationBox(scenario, std::move(table), "pr");
}

/// Maximally entangled pair; player 1 measures sigma_z / sigma_x, player 2
/// measures (-sigma_z -/+ sigma_x)/sqrt2. Player 2's outcome label is flipped
/// (+1 -> 1) so that every question pair wins CHSH with cos^2(pi/8).
inline CorrelationBox tsirelson_box() {
  using namespace quantum;
  const double h = 1.0 / std::numbers::sqrt2;
  const StateVector phi_plus({h, 0.0, 0.0, h});
  const Matrix z = pauli_z();
  const Matrix x = pauli_x();
  const Matrix alice[2] = {z, x};
  const Matrix bob[2] = {Complex{-h} * z + Complex{-h} * x, Complex{-h} * z + Complex{h} * x};

  std::vector<double> table(16);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) {
      const auto joint = projective_binary_measurement(phi_plus, alice[q1], bob[q2]);
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2) {
          table[static_cast<std::size_t>((q1 * 2 + q2) * 4 + a1 * 2 + (1 - a2))] =
              std::max(0.0, joint[static_cast<std::size_t>(a1 * 2 + a2)]);
        }
    }
  return CorrelationBox(Scenario{2, 2, 2}, std::move(table), "tsirelson");
}

namespace magic_square {

/// Shared four-qubit state; player 1 holds qubits 0-1.
inline quantum::StateVector shared_state() {
  std::vector<quantum::Complex> amps(16);
  amps[0b0011] = 0.5;
  amps[0b0110] = -0.5;
  amps[0b1001] = -0.5;
  amps[0b1100] = 0.5;
  return quantum::StateVector(std::move(amps));
}

/// Player 1's unitary for row question `row`.
inline quantum::Matrix row_unitary(int row) {
  using quantum::Complex;
  using quantum::Matrix;
  const Complex i{0.0, 1.0};
  const double r2 = 1.0 / std::numbers::sqrt2;
  switch (row) {
    case 0:
      return Matrix({{i, 0, 0, 1}, {0, -i, 1, 0}, {0, i, 1, 0}, {1, 0, 0, i}}, r2);
    case 1:
      return Matrix({{i, 1, 1, i}, {-i, 1, -1, i}, {i, 1, -1, -i}, {-i, 1, 1, -i}}, 0.5);
    case 2:
      return Matrix({{-1, -1, -1, 1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {1, -1, -1, -1}}, 0.5);
    default:
      throw std::out_of_range("magic square row question must be 0..2");
  }
}

/// Player 2's unitary for column question `column`.
inline quantum::Matrix column_unitary(int column) {
  using quantum::Complex;
  using quantum::Matrix;
  const Complex i{0.0, 1.0};
  const double r2 = 1.0 / std::numbers::sqrt2;
  switch (column) {
    case 0:
      return Matrix({{i, -i, 1, 1}, {-i, -i, 1, -1}, {1, 1, -i, i}, {-i, i, 1, 1}}, 0.5);
    case 1:
      return Matrix({{-1, i, 1, i}, {1, i, 1, -i}, {1, -i, 1, i}, {-1, -i, 1, -i}}, 0.5);
    case 2:
      return Matrix({{1, 0, 0, 1}, {-1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, -1, 0}}, r2);
    default:
      throw std::out_of_range("magic square column question must be 0..2");
  }
}

/// Two measured bits (high bit -> a^0, low bit -> a^1) completed with a^2 so
/// that the packed answer has the requested parity.
inline int complete_answer(int measured, int parity_bit) {
  const int a0 = (measured >> 1) & 1;
  const int a1 = measured & 1;
  const int a2 = a0 ^ a1 ^ parity_bit;
  return a0 | (a1 << 1) | (a2 << 2);
}

}  // namespace magic_square

inline CorrelationBox magic_square_box() {
  using namespace quantum;
  const Scenario scenario{2, 3, 8};
  const StateVector psi = magic_square::shared_state();
  const int blocks[] = {2, 2};
  std::vector<double> table(scenario.input_tuples() * scenario.output_tuples());
  for (int q1 = 0; q1 < 3; ++q1)
    for (int q2 = 0; q2 < 3; ++q2) {
      StateVector evolved = apply_local_unitary(psi, magic_square::row_unitary(q1), 0);
      evolved = apply_local_unitary(evolved, magic_square::column_unitary(q2), 2);
      const OutcomeTable outcomes = measurement_distribution(evolved, blocks);
      const std::size_t question = static_cast<std::size_t>(q1 * 3 + q2);
      for (std::size_t joint = 0; joint < outcomes.probabilities.size(); ++joint) {
        const int a1 = magic_square::complete_answer(outcomes.player_outcome(joint, 0), 0);
        const int a2 = magic_square::complete_answer(outcomes.player_outcome(joint, 1), 1);
        table[question * 64 + static_cast<std::size_t>(a1 * 8 + a2)] += outcomes.probabilities[joint];
      }
    }
  return CorrelationBox(scenario, std::move(table), "magic-square");
}

/// GHZ protocol: each player applies |1> -> e^{i pi q/2}|1>, then a Hadamard,
/// then measures its qubit.
inline CorrelationBox mpp_box(int players) {
  using namespace quantum;
  if (players < 2) throw std::invalid_argument("mpp box needs at least 2 players, got " + std::to_string(players));
  const Scenario scenario{players, 2, 2};
  std::vector<Complex> ghz(std::size_t{1} << players);
  ghz.front() = 1.0 / std::numbers::sqrt2;
  ghz.back() = 1.0 / std::numbers::sqrt2;
  const StateVector initial(std::move(ghz));
  const std::vector<int> blocks(static_cast<std::size_t>(players), 1);
  const Matrix h = hadamard();

  const std::size_t width = scenario.output_tuples();
  std::vector<double> table(scenario.input_tuples() * width);
  for (std::size_t question = 0; question < scenario.input_tuples(); ++question) {
    StateVector state = initial;
    for (int k = 0; k < players; ++k) {
      const int q = tuple_digit(question, 2, players, k);
      state = apply_local_unitary(state, h * phase_gate(std::numbers::pi * q / 2.0), k);
    }
    const OutcomeTable outcomes = measurement_distribution(state, blocks);
    std::copy(outcomes.probabilities.begin(), outcomes.probabilities.end(), table.begin() + static_cast<std::ptrdiff_t>(question * width));
  }
  return CorrelationBox(scenario, std::move(table), "mpp:" + std::to_string(players));
}

// ---------------------------------------------------------------------------
// Validation

enum class ValidationMode { normalization, no_signaling };

struct BoxReport {
  double normalization_error = 0.0;  // max |row sum - 1|
  double negativity = 0.0;           // max(0, -min entry)
  double signaling = 0.0;            // only filled in no_signaling mode
};

/// Signaling is measured on every proper nonempty subset of parties: the
/// subset's answer marginal must not depend on the other parties' questions.
inline BoxReport validate_box(const CorrelationBox& box, ValidationMode mode = ValidationMode::no_signaling) {
  const Scenario& s = box.scenario();
  BoxReport report;
  for (std::size_t q = 0; q < s.input_tuples(); ++q) {
    double sum = 0.0;
    for (double p : box.row(q)) {
      sum += p;
      report.negativity = std::max(report.negativity, -p);
    }
    report.normalization_error = std::max(report.normalization_error, std::abs(sum - 1.0));
  }
  if (mode != ValidationMode::no_signaling) return report;

  const int n = s.parties;
  for (unsigned subset = 1; subset + 1 < (1u << n); ++subset) {
    std::vector<int> members;
    for (int k = 0; k < n; ++k)
      if (subset & (1u << k)) members.push_back(k);
    const std::size_t local_size = checked_pow(static_cast<std::size_t>(s.outputs), static_cast<int>(members.size()));
    // Reference marginal per subset-question assignment, taken at the first question tuple seen.
    std::vector<std::vector<double>> reference(
        checked_pow(static_cast<std::size_t>(s.inputs), static_cast<int>(members.size())));
    for (std::size_t q = 0; q < s.input_tuples(); ++q) {
      std::size_t local_question = 0;
      for (int k : members) local_question = local_question * static_cast<std::size_t>(s.inputs) +
                                             static_cast<std::size_t>(tuple_digit(q, s.inputs, n, k));
      std::vector<double> marginal(local_size);
      const auto r = box.row(q);
      for (std::size_t a = 0; a < r.size(); ++a) {
        std::size_t local_answer = 0;
        for (int k : members) local_answer = local_answer * static_cast<std::size_t>(s.outputs) +
                                             static_cast<std::size_t>(tuple_digit(a, s.outputs, n, k));
        marginal[local_answer] += r[a];
      }
      auto& ref = reference[local_question];
      if (ref.empty()) {
        ref = std::move(marginal);
        continue;
      }
      for (std::size_t i = 0; i < local_size; ++i) report.signaling = std::max(report.signaling, std::abs(ref[i] - marginal[i]));
    }
  }
  return report;
}

/// Largest deviation of any party's answer marginal from uniform over its
/// support (entries above `support_floor`), across all question tuples.
inline double output_uniformity_error(const CorrelationBox& box, double support_floor = 1e-12) {
  double worst = 0.0;
  for (std::size_t q = 0; q < box.scenario().input_tuples(); ++q)
    for (int k = 0; k < box.scenario().parties; ++k) {
      const auto marginal = box.output_marginal(q, k);
      const auto support = std::count_if(marginal.begin(), marginal.end(), [&](double p) { return p > support_floor; });
      if (support == 0) return 1.0;
      const double level = 1.0 / static_cast<double>(support);
      for (double p : marginal)
        if (p > support_floor) worst = std::max(worst, std::abs(p - level));
    }
  return worst;
}

/// Win probability of the box for each question tuple.
inline std::vector<double> win_probability_by_question(const CorrelationBox& box, const NonlocalGame& game) {
  if (!(box.scenario() == game.scenario())) {
    throw std::invalid_argument("box scenario " + box.scenario().to_string() + " does not match game '" + game.name() +
                                "' scenario " + game.scenario().to_string());
  }
  std::vector<double> wins(box.scenario().input_tuples());
  for (std::size_t q = 0; q < wins.size(); ++q) {
    const auto r = box.row(q);
    for (std::size_t a = 0; a < r.size(); ++a)
      if (r[a] != 0.0 && game.wins(q, a)) wins[q] += r[a];
  }
  return wins;
}

/// Win probability with uniformly distributed questions.
inline double win_probability(const CorrelationBox& box, const NonlocalGame& game) {
  const auto wins = win_probability_by_question(box, game);
  double total = 0.0;
  for (double w : wins) total += w;
  return total / static_cast<double>(wins.size());
}

// ---------------------------------------------------------------------------
// Encoders

/// P(x | m): messages are question tuples of the game scenario (n, d, D) and
/// channel inputs x pack per-sender symbols q_k * D + a_k base d*D.
class Encoder {
 public:
  Encoder(Scenario game_scenario, std::vector<double> table, bool deterministic, std::string label = {})
      : game_scenario_(game_scenario), table_(std::move(table)), deterministic_(deterministic), label_(std::move(label)) {
    game_scenario_.validate();
    if (table_.size() != messages() * inputs()) {
      throw std::invalid_argument("encoder table needs " + std::to_string(messages() * inputs()) + " entries, got " +
                                  std::to_string(table_.size()));
    }
  }

  const Scenario& game_scenario() const { return game_scenario_; }
  Scenario channel_scenario() const {
    return Scenario{game_scenario_.parties, game_scenario_.inputs, game_scenario_.inputs * game_scenario_.outputs};
  }
  std::size_t messages() const { return game_scenario_.input_tuples(); }
  std::size_t inputs() const { return channel_scenario().output_tuples(); }
  bool deterministic() const { return deterministic_; }
  const std::string& label() const { return label_; }

  double probability(std::size_t message, std::size_t input) const { return table_[message * inputs() + input]; }
  std::span<const double> row(std::size_t message) const {
    return std::span<const double>(table_).subspan(message * inputs(), inputs());
  }

  /// Vertex `vertex` of the local polytope of the (n, d, d*D) scenario.
  static Encoder deterministic_vertex(const Scenario& game_scenario, std::size_t vertex) {
    const Scenario channel{game_scenario.parties, game_scenario.inputs, game_scenario.inputs * game_scenario.outputs};
    const auto strategy = local_strategy(channel, vertex);
    const std::size_t width = channel.output_tuples();
    std::vector<double> table(channel.input_tuples() * width);
    for (std::size_t m = 0; m < channel.input_tuples(); ++m) table[m * width + strategy_answer(channel, strategy, m)] = 1.0;
    return Encoder(game_scenario, std::move(table), true, "vertex:" + std::to_string(vertex));
  }

  /// Convex combination of encoders over the same scenario.
  static Encoder mixture(std::span<const double> weights, std::span<const Encoder> parts) {
    if (weights.size() != parts.size() || parts.empty()) throw std::invalid_argument("mixture needs one weight per encoder");
    std::vector<double> table(parts.front().table_.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!(parts[i].game_scenario_ == parts.front().game_scenario_)) throw std::invalid_argument("mixture scenario mismatch");
      for (std::size_t j = 0; j < table.size(); ++j) table[j] += weights[i] * parts[i].table_[j];
    }
    const bool deterministic = std::all_of(table.begin(), table.end(), [](double p) {
      return std::abs(p) < 1e-12 || std::abs(p - 1.0) < 1e-12;
    });
    return Encoder(parts.front().game_scenario_, std::move(table), deterministic, "mixture");
  }

  double normalization_error() const {
    double worst = 0.0;
    for (std::size_t m = 0; m < messages(); ++m) {
      double sum = 0.0;
      for (double p : row(m)) sum += p;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
  }

 private:
  Scenario game_scenario_;
  std::vector<double> table_;
  bool deterministic_;
  std::string label_;
};

/// Channel input index for per-sender (question, answer) pairs given as packed tuples.
inline std::size_t channel_input_index(const Scenario& game_scenario, std::size_t question, std::size_t answer) {
  const int n = game_scenario.parties;
  const std::size_t symbols = static_cast<std::size_t>(game_scenario.inputs * game_scenario.outputs);
  std::size_t x = 0;
  for (int k = 0; k < n; ++k) {
    const int q = tuple_digit(question, game_scenario.inputs, n, k);
    const int a = tuple_digit(answer, game_scenario.outputs, n, k);
    x = x * symbols + static_cast<std::size_t>(q * game_scenario.outputs + a);
  }
  return x;
}

/// Inverse of channel_input_index: (packed question tuple, packed answer tuple).
inline std::pair<std::size_t, std::size_t> split_channel_input(const Scenario& game_scenario, std::size_t x) {
  const std::size_t symbols = static_cast<std::size_t>(game_scenario.inputs * game_scenario.outputs);
  const auto answers = static_cast<std::size_t>(game_scenario.outputs);
  std::size_t q = 0;
  std::size_t a = 0;
  std::size_t q_scale = 1;
  std::size_t a_scale = 1;
  for (int k = game_scenario.parties - 1; k >= 0; --k) {
    const std::size_t symbol = x % symbols;
    x /= symbols;
    q += symbol / answers * q_scale;
    a += symbol % answers * a_scale;
    q_scale *= static_cast<std::size_t>(game_scenario.inputs);
    a_scale *= answers;
  }
  return {q, a};
}

/// Plays the box with the messages as questions and feeds each sender's
/// (message, answer) pair into the channel.
inline Encoder e_star(const CorrelationBox& box) {
  const Scenario& s = box.scenario();
  const Scenario channel{s.parties, s.inputs, s.inputs * s.outputs};
  const std::size_t width = channel.output_tuples();
  std::vector<double> table(s.input_tuples() * width);
  for (std::size_t m = 0; m < s.input_tuples(); ++m) {
    const auto r = box.row(m);
    for (std::size_t a = 0; a < r.size(); ++a) table[m * width + channel_input_index(s, m, a)] = r[a];
  }
  return Encoder(s, std::move(table), box.is_deterministic(), "e*(" + box.label() + ")");
}

// ---------------------------------------------------------------------------
// CSV import / export
//
// A file holds one or more boxes. Each box starts with a line of three
// integers `n,d,D`, followed by rows `q_1,...,q_n,a_1,...,a_n,probability`.
// Entries not listed are zero. Blank lines and lines starting with '#' are
// ignored.

inline void write_box_csv(std::ostream& out, const CorrelationBox& box) {
  const Scenario& s = box.scenario();
  out << s.parties << ',' << s.inputs << ',' << s.outputs << '\n';
  std::vector<int> q(static_cast<std::size_t>(s.parties));
  std::vector<int> a(q.size());
  for (std::size_t qi = 0; qi < s.input_tuples(); ++qi) {
    unpack_tuple(qi, s.inputs, q);
    const auto r = box.row(qi);
    for (std::size_t ai = 0; ai < r.size(); ++ai) {
      if (r[ai] == 0.0) continue;
      unpack_tuple(ai, s.outputs, a);
      for (int v : q) out << v << ',';
      for (int v : a) out << v << ',';
      out << io::format_double(r[ai], 0) << '\n';
    }
  }
}

inline std::vector<CorrelationBox> read_box_csv(std::istream& in) {
  std::vector<CorrelationBox> boxes;
  Scenario current{};
  std::vector<double> table;
  bool open = false;
  const auto flush = [&] {
    if (open) boxes.emplace_back(current, std::move(table), "file:" + std::to_string(boxes.size()));
    open = false;
  };

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = io::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = io::split(view, ',');
    try {
      if (fields.size() == 3) {
        flush();
        current = Scenario{static_cast<int>(io::parse_integer(fields[0])), static_cast<int>(io::parse_integer(fields[1])),
                           static_cast<int>(io::parse_integer(fields[2]))};
        current.validate();
        table.assign(current.input_tuples() * current.output_tuples(), 0.0);
        open = true;
        continue;
      }
      if (!open) throw std::invalid_argument("entry before any 'n,d,D' header");
      const std::size_t n = static_cast<std::size_t>(current.parties);
      if (fields.size() != 2 * n + 1) {
        throw std::invalid_argument("expected " + std::to_string(2 * n + 1) + " fields, got " + std::to_string(fields.size()));
      }
      std::size_t q = 0;
      std::size_t a = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const long long qk = io::parse_integer(fields[k]);
        const long long ak = io::parse_integer(fields[n + k]);
        if (qk < 0 || qk >= current.inputs) throw std::invalid_argument("question out of range");
        if (ak < 0 || ak >= current.outputs) throw std::invalid_argument("answer out of range");
        q = q * static_cast<std::size_t>(current.inputs) + static_cast<std::size_t>(qk);
        a = a * static_cast<std::size_t>(current.outputs) + static_cast<std::size_t>(ak);
      }
      table[q * current.output_tuples() + a] = io::parse_double(fields[2 * n]);
    } catch (const std::exception& e) {
      throw std::invalid_argument("box CSV line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  flush();
  return boxes;
}

inline std::vector<CorrelationBox> load_box_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open box file '" + path + "'");
  return read_box_csv(in);
}

}  // namespace gamemac
