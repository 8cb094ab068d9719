#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gamemac/channels.hpp"
#include "gamemac/correlations.hpp"
#include "gamemac/entropy.hpp"
#include "gamemac/games.hpp"

namespace gamemac {

/// Independent message distributions pi_k on {0..d-1}, one per sender.
class ProductDistribution {
 public:
  static constexpr double kTolerance = 1e-12;

  ProductDistribution(int senders, int symbols, std::vector<double> weights)
      : senders_(senders), symbols_(symbols), weights_(std::move(weights)) {
    if (senders < 1 || symbols < 1) throw std::invalid_argument("product distribution needs senders >= 1 and symbols >= 1");
    if (weights_.size() != static_cast<std::size_t>(senders) * static_cast<std::size_t>(symbols)) {
      throw std::invalid_argument("product distribution needs " + std::to_string(senders * symbols) + " weights");
    }
    for (int k = 0; k < senders_; ++k) {
      double sum = 0.0;
      for (double w : sender(k)) {
        if (!(w >= 0.0)) throw std::invalid_argument("message probabilities must be nonnegative");
        sum += w;
      }
      if (std::abs(sum - 1.0) > kTolerance) {
        throw std::invalid_argument("message distribution of sender " + std::to_string(k) + " sums to " + std::to_string(sum));
      }
    }
  }

  static ProductDistribution uniform(int senders, int symbols) {
    return ProductDistribution(senders, symbols,
                               std::vector<double>(static_cast<std::size_t>(senders * symbols), 1.0 / symbols));
  }

  int senders() const { return senders_; }
  int symbols() const { return symbols_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> sender(int k) const {
    return std::span<const double>(weights_).subspan(static_cast<std::size_t>(k * symbols_), static_cast<std::size_t>(symbols_));
  }

  /// pi(m) = prod_k pi_k(m_k) over packed message tuples (sender 0 most significant).
  std::vector<double> joint() const {
    std::vector<double> out{1.0};
    for (int k = 0; k < senders_; ++k) {
      std::vector<double> next;
      next.reserve(out.size() * static_cast<std::size_t>(symbols_));
      for (double prefix : out)
        for (double w : sender(k)) next.push_back(prefix * w);
      out = std::move(next);
    }
    return out;
  }

 private:
  int senders_;
  int symbols_;
  std::vector<double> weights_;
};

/// Dense joint probability array with one axis per random variable.
class JointDistribution {
 public:
  static constexpr double kMassTolerance = 1e-11;

  JointDistribution(std::vector<std::size_t> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    const std::size_t size = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
    if (size != data_.size()) throw std::invalid_argument("joint distribution shape does not match data size");
    double total = 0.0;
    for (double p : data_) {
      if (p < -1e-15) throw std::invalid_argument("joint distribution has a negative entry");
      total += p;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw std::invalid_argument("joint distribution has total mass " + std::to_string(total));
    }
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::span<const double> data() const { return data_; }

  /// Marginal over `axes` (in the given order), flattened row-major.
  std::vector<double> marginal(std::span<const std::size_t> axes) const {
    for (std::size_t axis : axes)
      if (axis >= shape_.size()) throw std::out_of_range("axis " + std::to_string(axis) + " out of range");
    std::size_t size = 1;
    for (std::size_t axis : axes) size *= shape_[axis];
    std::vector<double> out(size);
    std::vector<std::size_t> index(shape_.size());
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t a = shape_.size(); a-- > 0;) {
        index[a] = rest % shape_[a];
        rest /= shape_[a];
      }
      std::size_t target = 0;
      for (std::size_t axis : axes) target = target * shape_[axis] + index[axis];
      out[target] += data_[flat];
    }
    return out;
  }

  double entropy(std::span<const std::size_t> axes) const {
    if (axes.empty()) return 0.0;
    return shannon_entropy(marginal(axes));
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

namespace detail {
inline std::vector<std::size_t> join_axes(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}
}  // namespace detail

/// I(A;B) = H(A) + H(B) - H(A,B), bits.
inline double mutual_information(const JointDistribution& joint, std::span<const std::size_t> a,
                                 std::span<const std::size_t> b) {
  return joint.entropy(a) + joint.entropy(b) - joint.entropy(detail::join_axes(a, b));
}

/// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), bits.
inline double conditional_mutual_information(const JointDistribution& joint, std::span<const std::size_t> a,
                                             std::span<const std::size_t> b, std::span<const std::size_t> c) {
  const auto ac = detail::join_axes(a, c);
  const auto bc = detail::join_axes(b, c);
  const auto abc = detail::join_axes(detail::join_axes(a, b), c);
  return joint.entropy(ac) + joint.entropy(bc) - joint.entropy(abc) - joint.entropy(c);
}

/// Axes of the composed (M, X, Y) joint.
inline constexpr std::size_t kMessageAxis = 0;
inline constexpr std::size_t kInputAxis = 1;
inline constexpr std::size_t kOutputAxis = 2;

namespace detail {
inline void check_compatible(const ProductDistribution& pi, const Encoder& encoder, const MacChannel& channel) {
  const Scenario& s = encoder.game_scenario();
  if (!(s == channel.game().scenario())) {
    throw std::invalid_argument("encoder scenario " + s.to_string() + " does not match channel game scenario " +
                                channel.game().scenario().to_string());
  }
  if (pi.senders() != s.parties || pi.symbols() != s.inputs) {
    throw std::invalid_argument("message distribution is over " + std::to_string(pi.senders()) + " senders x " +
                                std::to_string(pi.symbols()) + " symbols, scenario needs " + s.to_string());
  }
}
}  // namespace detail

/// p(m, x, y) = pi(m) enc(x|m) ch(y|x).
inline JointDistribution compose(const ProductDistribution& pi, const Encoder& encoder, const MacChannel& channel) {
  detail::check_compatible(pi, encoder, channel);
  const auto prior = pi.joint();
  const std::size_t messages = encoder.messages();
  const std::size_t inputs = encoder.inputs();
  const std::size_t outputs = channel.output_count();
  std::vector<double> data(messages * inputs * outputs);
  for (std::size_t m = 0; m < messages; ++m) {
    const auto enc_row = encoder.row(m);
    for (std::size_t x = 0; x < inputs; ++x) {
      const double pmx = prior[m] * enc_row[x];
      if (pmx == 0.0) continue;
      const auto ch_row = channel.row(x);
      for (std::size_t y = 0; y < outputs; ++y) data[(m * inputs + x) * outputs + y] = pmx * ch_row[y];
    }
  }
  return JointDistribution({messages, inputs, outputs}, std::move(data));
}

/// I(U;V) for a prior over U and a row-stochastic matrix P(v|u).
inline double information_through(std::span<const double> prior, std::span<const double> matrix, std::size_t outputs) {
  std::vector<double> output(outputs);
  double conditional = 0.0;
  for (std::size_t u = 0; u < prior.size(); ++u) {
    if (prior[u] == 0.0) continue;
    const auto row = matrix.subspan(u * outputs, outputs);
    for (std::size_t v = 0; v < outputs; ++v) output[v] += prior[u] * row[v];
    conditional += prior[u] * shannon_entropy(row);
  }
  return shannon_entropy(output) - conditional;
}

/// P(y | m) of the encoder followed by the channel, Delta x Delta row-major.
inline std::vector<double> effective_channel(const Encoder& encoder, const MacChannel& channel) {
  const std::size_t outputs = channel.output_count();
  std::vector<double> matrix(encoder.messages() * outputs);
  for (std::size_t m = 0; m < encoder.messages(); ++m) {
    const auto enc_row = encoder.row(m);
    for (std::size_t x = 0; x < enc_row.size(); ++x) {
      if (enc_row[x] == 0.0) continue;
      const auto ch_row = channel.row(x);
      for (std::size_t y = 0; y < outputs; ++y) matrix[m * outputs + y] += enc_row[x] * ch_row[y];
    }
  }
  return matrix;
}

/// Channel input distribution p(x) = sum_m pi(m) enc(x|m).
inline std::vector<double> input_distribution(const ProductDistribution& pi, const Encoder& encoder) {
  const auto prior = pi.joint();
  std::vector<double> px(encoder.inputs());
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (prior[m] == 0.0) continue;
    const auto row = encoder.row(m);
    for (std::size_t x = 0; x < px.size(); ++x) px[x] += prior[m] * row[x];
  }
  return px;
}

/// Sum-rate I(M;Y) with identity decoding.
inline double sum_rate(const ProductDistribution& pi, const Encoder& encoder, const MacChannel& channel) {
  detail::check_compatible(pi, encoder, channel);
  return information_through(pi.joint(), effective_channel(encoder, channel), channel.output_count());
}

/// I(X;Y) of the composed chain.
inline double input_output_information(const ProductDistribution& pi, const Encoder& encoder, const MacChannel& channel) {
  detail::check_compatible(pi, encoder, channel);
  const auto px = input_distribution(pi, encoder);
  std::vector<double> output(channel.output_count());
  double conditional = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    const auto row = channel.row(x);
    for (std::size_t y = 0; y < output.size(); ++y) output[y] += px[x] * row[y];
    conditional += px[x] * shannon_entropy(row);
  }
  return shannon_entropy(output) - conditional;
}

/// Output distribution p(y).
inline std::vector<double> output_distribution(const ProductDistribution& pi, const Encoder& encoder,
                                               const MacChannel& channel) {
  detail::check_compatible(pi, encoder, channel);
  const auto px = input_distribution(pi, encoder);
  std::vector<double> output(channel.output_count());
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    const auto row = channel.row(x);
    for (std::size_t y = 0; y < output.size(); ++y) output[y] += px[x] * row[y];
  }
  return output;
}

/// omega = sum over winning channel inputs of p(x).
inline double win_probability(const ProductDistribution& pi, const Encoder& encoder, const NonlocalGame& game) {
  if (!(encoder.game_scenario() == game.scenario())) throw std::invalid_argument("encoder does not match game scenario");
  const auto px = input_distribution(pi, encoder);
  double omega = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    const auto [q, a] = split_channel_input(game.scenario(), x);
    if (game.wins(q, a)) omega += px[x];
  }
  return omega;
}

/// H(Y) - f_L + omega (f_L - f_W): the mutual information I(X;Y) expressed
/// through the win probability on two-branch constant-noise channels.
inline double win_weighted_rate(const ProductDistribution& pi, const Encoder& encoder, const MacChannel& channel) {
  const double h_y = shannon_entropy(output_distribution(pi, encoder, channel));
  const double omega = win_probability(pi, encoder, channel.game());
  return h_y - channel.f_lose() + omega * (channel.f_lose() - channel.f_win());
}

/// log2(Delta) - f_W: ceiling on every sum-rate of the channel.
inline double rate_ceiling(const MacChannel& channel) {
  return std::log2(static_cast<double>(channel.output_count())) - channel.f_win();
}

}  // namespace gamemac
