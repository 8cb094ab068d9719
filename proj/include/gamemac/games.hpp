#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gamemac/scenario.hpp"

namespace gamemac {

/// Total winning predicate over (questions, answers); both spans have one
/// entry per player.
using WinPredicate = std::function<bool(std::span<const int> questions, std::span<const int> answers)>;

/// A nonlocal game with uniform alphabets: every player gets one of d
/// questions and returns one of D answers. Immutable after construction.
///
/// The predicate is tabulated once over all d^n * D^n tuples when the table
/// fits in memory; beyond that it is evaluated on demand.
class NonlocalGame {
 public:
  static constexpr std::size_t kMaxTabulated = std::size_t{1} << 26;

  NonlocalGame(std::string name, Scenario scenario, WinPredicate predicate)
      : name_(std::move(name)), scenario_(scenario), predicate_(std::move(predicate)) {
    scenario_.validate();
    if (!predicate_) throw std::invalid_argument("game '" + name_ + "' has no winning predicate");
    const std::size_t questions = scenario_.input_tuples();
    const std::size_t answers = scenario_.output_tuples();
    if (questions <= kMaxTabulated / answers) {
      auto table = std::make_shared<std::vector<std::uint8_t>>(questions * answers);
      std::vector<int> q(static_cast<std::size_t>(scenario_.parties));
      std::vector<int> a(q.size());
      for (std::size_t qi = 0; qi < questions; ++qi) {
        unpack_tuple(qi, scenario_.inputs, q);
        for (std::size_t ai = 0; ai < answers; ++ai) {
          unpack_tuple(ai, scenario_.outputs, a);
          (*table)[qi * answers + ai] = predicate_(q, a) ? 1 : 0;
        }
      }
      table_ = std::move(table);
    }
  }

  const std::string& name() const { return name_; }
  const Scenario& scenario() const { return scenario_; }
  int players() const { return scenario_.parties; }

  bool wins(std::span<const int> questions, std::span<const int> answers) const {
    return predicate_(questions, answers);
  }

  /// Packed form: question and answer tuples as mixed-radix indices.
  bool wins(std::size_t question_index, std::size_t answer_index) const {
    if (table_) return (*table_)[question_index * scenario_.output_tuples() + answer_index] != 0;
    const auto q = unpack_tuple(question_index, scenario_.inputs, scenario_.parties);
    const auto a = unpack_tuple(answer_index, scenario_.outputs, scenario_.parties);
    return predicate_(q, a);
  }

  /// Number of winning answer tuples for a question tuple.
  std::size_t winning_answers(std::size_t question_index) const {
    std::size_t count = 0;
    for (std::size_t ai = 0; ai < scenario_.output_tuples(); ++ai) count += wins(question_index, ai) ? 1 : 0;
    return count;
  }

 private:
  std::string name_;
  Scenario scenario_;
  WinPredicate predicate_;
  std::shared_ptr<const std::vector<std::uint8_t>> table_;
};

/// CHSH: win iff a1 XOR a2 = q1 AND q2.
inline NonlocalGame chsh_game() {
  return NonlocalGame("chsh", Scenario{2, 2, 2}, [](std::span<const int> q, std::span<const int> a) {
    return (a[0] ^ a[1]) == (q[0] & q[1]);
  });
}

namespace magic_square {

inline int bit(int answer, int position) { return (answer >> position) & 1; }
inline int parity(int answer) { return bit(answer, 0) ^ bit(answer, 1) ^ bit(answer, 2); }

}  // namespace magic_square

/// Magic square: player 1 is asked a row, player 2 a column, each answers three
/// bits packed as bit j = a^j. Player 1's bits have even parity, player 2's odd,
/// and they agree on the shared cell: bit q2 of a1 equals bit q1 of a2.
inline NonlocalGame magic_square_game() {
  return NonlocalGame("magic-square", Scenario{2, 3, 8}, [](std::span<const int> q, std::span<const int> a) {
    using namespace magic_square;
    return parity(a[0]) == 0 && parity(a[1]) == 1 && bit(a[0], q[1]) == bit(a[1], q[0]);
  });
}

/// Multi-player parity game. Odd question parity always wins; otherwise the
/// answer parity must be 0 when the question sum is divisible by 4 and 1 else.
inline NonlocalGame mpp_game(int players) {
  if (players < 2) throw std::invalid_argument("mpp game needs at least 2 players, got " + std::to_string(players));
  return NonlocalGame("mpp:" + std::to_string(players), Scenario{players, 2, 2},
                      [](std::span<const int> q, std::span<const int> a) {
                        const int question_sum = std::accumulate(q.begin(), q.end(), 0);
                        if (question_sum % 2 == 1) return true;
                        int answer_parity = 0;
                        for (int bit : a) answer_parity ^= bit;
                        return answer_parity == (question_sum % 4 == 0 ? 0 : 1);
                      });
}

/// Resolves "chsh", "magic-square" or "mpp:<n>".
inline NonlocalGame game_by_name(std::string_view name) {
  if (name == "chsh") return chsh_game();
  if (name == "magic-square") return magic_square_game();
  if (name.starts_with("mpp:")) {
    const std::string_view digits = name.substr(4);
    int players = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), players);
    if (ec != std::errc{} || end != digits.data() + digits.size()) {
      throw std::invalid_argument("bad player count in game name '" + std::string(name) + "'");
    }
    return mpp_game(players);
  }
  throw std::invalid_argument("unknown game '" + std::string(name) + "' (expected chsh, magic-square or mpp:<n>)");
}

}  // namespace gamemac
