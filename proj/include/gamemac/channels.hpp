#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gamemac/correlations.hpp"
#include "gamemac/entropy.hpp"
#include "gamemac/games.hpp"
#include "gamemac/io.hpp"

namespace gamemac {

/// Output entropy (bits) of a `outputs`-ary depolarizing row that keeps the
/// input with probability `retention` and is uniform otherwise.
inline double noise_entropy(std::size_t outputs, double retention) {
  if (outputs < 2) throw std::invalid_argument("depolarizing noise needs at least 2 outputs");
  if (!(retention >= 0.0 && retention <= 1.0)) {
    throw std::invalid_argument("retention probability must lie in [0,1], got " + std::to_string(retention));
  }
  const double delta = static_cast<double>(outputs);
  const double peak = (1.0 + (delta - 1.0) * retention) / delta;
  const double rest = (1.0 - retention) / delta;
  return -xlog2x(peak) - (delta - 1.0) * xlog2x(rest);
}

enum class ChannelType { type_i = 1, type_ii = 2 };

/// Two-branch MAC built on a nonlocal game: rows indexed by channel inputs
/// x (per-sender (q_k, a_k) packed base d*D), columns by outputs y in
/// {0..d-1}^n packed base d.
class MacChannel {
 public:
  /// Raw constructor. f_W and f_L are read off the first winning and first
  /// losing row; use `constant_noise_check` to confirm they are constant.
  MacChannel(NonlocalGame game, std::vector<double> matrix, std::optional<std::pair<double, double>> retention = {})
      : game_(std::move(game)), matrix_(std::move(matrix)), retention_(retention) {
    const Scenario& s = game_.scenario();
    const std::size_t rows = input_count();
    if (matrix_.size() != rows * output_count()) {
      throw std::invalid_argument("channel matrix needs " + std::to_string(rows * output_count()) + " entries, got " +
                                  std::to_string(matrix_.size()));
    }
    winning_.resize(rows);
    question_.resize(rows);
    bool seen_win = false;
    bool seen_loss = false;
    for (std::size_t x = 0; x < rows; ++x) {
      const auto [q, a] = split_channel_input(s, x);
      question_[x] = q;
      winning_[x] = game_.wins(q, a) ? 1 : 0;
      if (winning_[x] && !seen_win) {
        f_win_ = shannon_entropy(row(x));
        seen_win = true;
      } else if (!winning_[x] && !seen_loss) {
        f_lose_ = shannon_entropy(row(x));
        seen_loss = true;
      }
    }
  }

  const NonlocalGame& game() const { return game_; }
  std::size_t input_count() const {
    const Scenario& s = game_.scenario();
    return checked_pow(static_cast<std::size_t>(s.inputs * s.outputs), s.parties);
  }
  /// Output alphabet size Delta = d^n.
  std::size_t output_count() const { return game_.scenario().input_tuples(); }

  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(matrix_).subspan(x * output_count(), output_count());
  }
  double probability(std::size_t x, std::size_t y) const { return matrix_[x * output_count() + y]; }

  bool input_wins(std::size_t x) const { return winning_[x] != 0; }
  /// Packed question tuple carried by channel input x.
  std::size_t input_question(std::size_t x) const { return question_[x]; }

  double f_win() const { return f_win_; }
  double f_lose() const { return f_lose_; }

  /// (eta_w, eta_l) for depolarizing channels.
  const std::optional<std::pair<double, double>>& retention() const { return retention_; }

 private:
  NonlocalGame game_;
  std::vector<double> matrix_;
  std::optional<std::pair<double, double>> retention_;
  std::vector<std::uint8_t> winning_;
  std::vector<std::size_t> question_;
  double f_win_ = 0.0;
  double f_lose_ = 0.0;
};

/// Output row of one branch as a function of the input's packed question tuple.
using BranchRule = std::function<std::vector<double>(std::size_t question)>;

namespace detail {

inline std::vector<double> branch_matrix(const NonlocalGame& game, const BranchRule& winning, const BranchRule& losing) {
  const Scenario& s = game.scenario();
  const std::size_t rows = checked_pow(static_cast<std::size_t>(s.inputs * s.outputs), s.parties);
  const std::size_t cols = s.input_tuples();
  std::vector<std::vector<double>> win_rows(cols);
  std::vector<std::vector<double>> lose_rows(cols);
  for (std::size_t q = 0; q < cols; ++q) {
    win_rows[q] = winning(q);
    lose_rows[q] = losing(q);
    if (win_rows[q].size() != cols || lose_rows[q].size() != cols) {
      throw std::invalid_argument("branch rows must have " + std::to_string(cols) + " entries");
    }
  }
  std::vector<double> matrix(rows * cols);
  for (std::size_t x = 0; x < rows; ++x) {
    const auto [q, a] = split_channel_input(s, x);
    const auto& source = game.wins(q, a) ? win_rows[q] : lose_rows[q];
    std::copy(source.begin(), source.end(), matrix.begin() + static_cast<std::ptrdiff_t>(x * cols));
  }
  return matrix;
}

}  // namespace detail

/// General two-branch channel. Requires f_W < f_L.
inline MacChannel two_branch_mac(const NonlocalGame& game, const BranchRule& winning, const BranchRule& losing) {
  MacChannel channel(game, detail::branch_matrix(game, winning, losing));
  if (!(channel.f_win() < channel.f_lose())) {
    throw std::invalid_argument("two-branch channel needs f_W < f_L, got f_W=" + std::to_string(channel.f_win()) +
                                " f_L=" + std::to_string(channel.f_lose()));
  }
  return channel;
}

/// Depolarizing row: y equals the question tuple with probability `retention`,
/// uniform otherwise.
inline std::vector<double> depolarizing_row(std::size_t outputs, std::size_t question, double retention) {
  std::vector<double> row(outputs, (1.0 - retention) / static_cast<double>(outputs));
  row[question] += retention;
  return row;
}

/// Depolarizing MAC with retention eta_w on winning inputs and eta_l on losing
/// ones. Requires 0 <= eta_l < eta_w <= 1.
inline MacChannel depolarizing_mac(const NonlocalGame& game, double eta_win, double eta_lose) {
  if (!(eta_win >= 0.0 && eta_win <= 1.0 && eta_lose >= 0.0 && eta_lose <= 1.0)) {
    throw std::invalid_argument("retention probabilities must lie in [0,1]");
  }
  if (!(eta_lose < eta_win)) {
    throw std::invalid_argument("depolarizing MAC needs eta_l < eta_w (got eta_w=" + std::to_string(eta_win) +
                                ", eta_l=" + std::to_string(eta_lose) + ")");
  }
  const std::size_t delta = game.scenario().input_tuples();
  auto matrix = detail::branch_matrix(
      game, [&](std::size_t q) { return depolarizing_row(delta, q, eta_win); },
      [&](std::size_t q) { return depolarizing_row(delta, q, eta_lose); });
  return MacChannel(game, std::move(matrix), std::make_pair(eta_win, eta_lose));
}

/// Noiseless on win, retention eta on loss. 0 <= eta < 1.
inline MacChannel type_i(const NonlocalGame& game, double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("Type-I channel needs 0 <= eta < 1, got " + std::to_string(eta));
  return depolarizing_mac(game, 1.0, eta);
}

/// Retention eta on win, fully noisy on loss. 0 < eta <= 1.
inline MacChannel type_ii(const NonlocalGame& game, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("Type-II channel needs 0 < eta <= 1, got " + std::to_string(eta));
  return depolarizing_mac(game, eta, 0.0);
}

inline MacChannel make_channel(const NonlocalGame& game, ChannelType type, double eta) {
  return type == ChannelType::type_i ? type_i(game, eta) : type_ii(game, eta);
}

struct NoiseCheck {
  double win_spread = 0.0;   // max |H(Y|X=x) - f_W| over winning x
  double lose_spread = 0.0;  // same for losing x
  double normalization_error = 0.0;
};

inline NoiseCheck constant_noise_check(const MacChannel& channel) {
  NoiseCheck check;
  for (std::size_t x = 0; x < channel.input_count(); ++x) {
    const auto r = channel.row(x);
    double sum = 0.0;
    for (double p : r) sum += p;
    check.normalization_error = std::max(check.normalization_error, std::abs(sum - 1.0));
    const double h = shannon_entropy(r);
    if (channel.input_wins(x)) {
      check.win_spread = std::max(check.win_spread, std::abs(h - channel.f_win()));
    } else {
      check.lose_spread = std::max(check.lose_spread, std::abs(h - channel.f_lose()));
    }
  }
  return check;
}

/// Debug export: `x-index,y-index,probability`, one line per nonzero entry.
inline void write_channel_csv(std::ostream& out, const MacChannel& channel) {
  out << "x-index,y-index,probability\n";
  for (std::size_t x = 0; x < channel.input_count(); ++x)
    for (std::size_t y = 0; y < channel.output_count(); ++y) {
      const double p = channel.probability(x, y);
      if (p != 0.0) out << x << ',' << y << ',' << io::format_double(p, 0) << '\n';
    }
}

}  // namespace gamemac
