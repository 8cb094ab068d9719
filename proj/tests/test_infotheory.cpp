#include <gtest/gtest.h>

#include <cmath>

#include "gamemac/infotheory.hpp"
#include "gamemac/sampling.hpp"

using namespace gamemac;

namespace {

constexpr std::size_t M[] = {kMessageAxis};
constexpr std::size_t X[] = {kInputAxis};
constexpr std::size_t Y[] = {kOutputAxis};

/// Deterministic encoder that sends each sender's message with answer 0.
Encoder identity_question_encoder(const Scenario& s) {
  const std::size_t width = checked_pow(static_cast<std::size_t>(s.inputs * s.outputs), s.parties);
  std::vector<double> table(s.input_tuples() * width);
  for (std::size_t m = 0; m < s.input_tuples(); ++m) table[m * width + channel_input_index(s, m, 0)] = 1.0;
  return Encoder(s, std::move(table), true, "identity");
}

}  // namespace

TEST(ProductDistribution, JointAndValidation) {
  const ProductDistribution pi(2, 2, {0.25, 0.75, 0.5, 0.5});
  const auto joint = pi.joint();
  EXPECT_DOUBLE_EQ(joint[0], 0.125);
  EXPECT_DOUBLE_EQ(joint[3], 0.375);
  EXPECT_THROW(ProductDistribution(2, 2, {0.5, 0.6, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(ProductDistribution(2, 2, {-0.5, 1.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(ProductDistribution(2, 2, {1.0}), std::invalid_argument);
}

TEST(Entropy, Basics) {
  const double uniform[] = {0.25, 0.25, 0.25, 0.25};
  EXPECT_DOUBLE_EQ(shannon_entropy(uniform), 2.0);
  const double point[] = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(shannon_entropy(point), 0.0);
}

TEST(JointDistribution, IndependentAxesHaveZeroInformation) {
  std::vector<double> data;
  for (double a : {0.3, 0.7})
    for (double b : {0.1, 0.2, 0.7}) data.push_back(a * b);
  const JointDistribution joint({2, 3}, data);
  const std::size_t A[] = {0};
  const std::size_t B[] = {1};
  EXPECT_NEAR(mutual_information(joint, A, B), 0.0, 1e-15);
  EXPECT_NEAR(joint.marginal(B)[2], 0.7, 1e-15);
  EXPECT_THROW(JointDistribution({2, 2}, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(JointDistribution({2, 2}, {1.0}), std::invalid_argument);
}

TEST(Compose, IdentityEncoderOnNoiselessBranch) {
  const auto game = chsh_game();
  const auto ch = type_i(game, 0.0);
  const auto enc = identity_question_encoder(game.scenario());
  const auto pi = ProductDistribution::uniform(2, 2);
  const auto joint = compose(pi, enc, ch);
  double total = 0.0;
  for (double p : joint.data()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
  const auto prior = joint.marginal(M);
  for (double p : prior) EXPECT_NEAR(p, 0.25, 1e-15);
  // Answers (0,0) win every question except (1,1).
  const std::size_t MY[] = {kMessageAxis, kOutputAxis};
  const auto my = joint.marginal(MY);
  for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(my[m * 4 + m], 0.25, 1e-15);
  EXPECT_NEAR(my[3 * 4 + 3], 0.25 * 0.25, 1e-15);
}

TEST(Compose, RejectsMismatchedDimensions) {
  const auto ch = type_i(chsh_game(), 0.5);
  EXPECT_THROW(compose(ProductDistribution::uniform(2, 3), e_star(pr_box()), ch), std::invalid_argument);
  EXPECT_THROW(compose(ProductDistribution::uniform(3, 2), e_star(mpp_box(3)), ch), std::invalid_argument);
}

TEST(SumRate, PrBoxOnTypeTwo) {
  const auto game = chsh_game();
  for (double eta : {0.2, 0.6, 1.0}) {
    const auto rate = sum_rate(ProductDistribution::uniform(2, 2), e_star(pr_box()), type_ii(game, eta));
    EXPECT_NEAR(rate, 2.0 - noise_entropy(4, eta), 1e-12) << eta;
  }
}

TEST(SumRate, MagicSquareBoxOnTypeOne) {
  const auto rate = sum_rate(ProductDistribution::uniform(2, 3), e_star(magic_square_box()), type_i(magic_square_game(), 0.3));
  EXPECT_NEAR(rate, std::log2(9.0), 1e-10);
}

TEST(WinProbability, Boxes) {
  sampling::Rng rng(7);
  const auto pi = sampling::random_product_distribution(rng, 2, 2);
  EXPECT_NEAR(win_probability(pi, e_star(pr_box()), chsh_game()), 1.0, 1e-12);
  EXPECT_NEAR(win_probability(ProductDistribution::uniform(3, 2), e_star(mpp_box(3)), mpp_game(3)), 1.0, 1e-10);
}

TEST(WinProbability, LiftedLocalBoxesReachThreeQuarters) {
  // Encoders that send the message as the question and answer locally.
  const auto game = chsh_game();
  const auto pi = ProductDistribution::uniform(2, 2);
  double best = 0.0;
  for (std::size_t v = 0; v < 16; ++v)
    best = std::max(best, win_probability(pi, e_star(local_deterministic_box(game.scenario(), v)), game));
  EXPECT_DOUBLE_EQ(best, 0.75);
}

TEST(WinProbability, FreeQuestionEncodersCanAlwaysWin) {
  // A deterministic encoder may ignore the message and send a winning input.
  const auto game = chsh_game();
  const auto pi = ProductDistribution::uniform(2, 2);
  double best = 0.0;
  for (std::size_t v = 0; v < 256; ++v) best = std::max(best, win_probability(pi, Encoder::deterministic_vertex(game.scenario(), v), game));
  EXPECT_DOUBLE_EQ(best, 1.0);
  EXPECT_DOUBLE_EQ(win_probability(pi, Encoder::deterministic_vertex(game.scenario(), 0), game), 1.0);
}

TEST(WinWeightedRate, MatchesJointInformation) {
  sampling::Rng rng(11);
  const auto game = chsh_game();
  for (int t = 0; t < 50; ++t) {
    const auto pi = sampling::random_product_distribution(rng, 2, 2);
    const auto enc = sampling::random_encoder(rng, game.scenario(), nullptr);
    const auto ch = type_i(game, 0.37);
    const auto joint = compose(pi, enc, ch);
    EXPECT_NEAR(win_weighted_rate(pi, enc, ch), mutual_information(joint, X, Y), 1e-10);
  }
}

TEST(WinWeightedRate, PerfectWinAndUniformOutputsHitCeiling) {
  const auto ch = type_ii(chsh_game(), 0.8);
  EXPECT_NEAR(win_weighted_rate(ProductDistribution::uniform(2, 2), e_star(pr_box()), ch), rate_ceiling(ch), 1e-12);
}

TEST(WinWeightedRate, EqualBranchesIgnoreOmega) {
  // eta_w -> eta_l: both branches have the same entropy, so the omega term vanishes.
  const auto ch = depolarizing_mac(chsh_game(), 0.5 + 1e-12, 0.5);
  sampling::Rng rng(3);
  const auto pi = sampling::random_product_distribution(rng, 2, 2);
  const auto enc = sampling::random_encoder(rng, Scenario{2, 2, 2}, nullptr);
  const double h_y = shannon_entropy(output_distribution(pi, enc, ch));
  EXPECT_NEAR(win_weighted_rate(pi, enc, ch), h_y - noise_entropy(4, 0.5), 1e-9);
}

TEST(Identities, RandomTriples) {
  sampling::Rng rng(2024);
  for (const auto& game : {chsh_game(), mpp_game(3)}) {
    const auto box = game.name() == "chsh" ? pr_box() : mpp_box(3);
    for (int t = 0; t < 100; ++t) {
      const auto& s = game.scenario();
      const auto pi = sampling::random_product_distribution(rng, s.parties, s.inputs);
      const auto ch = sampling::random_depolarizing_channel(rng, game);
      const auto enc = sampling::random_encoder(rng, s, t % 2 ? &box : nullptr);
      const auto joint = compose(pi, enc, ch);
      const double ixy = mutual_information(joint, X, Y);
      const double imy = mutual_information(joint, M, Y);
      EXPECT_NEAR(ixy, imy + conditional_mutual_information(joint, X, Y, M), 1e-10);
      EXPECT_LE(imy, ixy + 1e-12);
      EXPECT_LE(ixy, rate_ceiling(ch) + 1e-9);
      EXPECT_NEAR(sum_rate(pi, enc, ch), imy, 1e-10);
      EXPECT_NEAR(input_output_information(pi, enc, ch), ixy, 1e-10);

      const auto det = sampling::random_deterministic_encoder(rng, s);
      const auto dj = compose(pi, det, ch);
      EXPECT_NEAR(mutual_information(dj, M, Y), mutual_information(dj, X, Y), 1e-10);
    }
  }
}
