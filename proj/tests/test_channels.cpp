#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gamemac/channels.hpp"

using namespace gamemac;

TEST(NoiseEntropy, Limits) {
  EXPECT_NEAR(noise_entropy(4, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(noise_entropy(4, 0.0), 2.0, 1e-15);
  EXPECT_NEAR(noise_entropy(9, 0.0), std::log2(9.0), 1e-15);
  // Delta = 2, eta = 0.5: p = 3/4, r = 1/4.
  EXPECT_NEAR(noise_entropy(2, 0.5), -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25)), 1e-15);
  EXPECT_THROW(noise_entropy(4, 1.5), std::invalid_argument);
  EXPECT_THROW(noise_entropy(1, 0.5), std::invalid_argument);
}

TEST(NoiseEntropy, DecreasesInRetention) {
  double previous = noise_entropy(8, 0.0);
  for (int i = 1; i <= 20; ++i) {
    const double h = noise_entropy(8, i / 20.0);
    EXPECT_LT(h, previous);
    previous = h;
  }
}

TEST(Depolarizing, RowsAndBranches) {
  const auto game = chsh_game();
  const auto ch = depolarizing_mac(game, 0.9, 0.3);
  EXPECT_EQ(ch.input_count(), 16u);
  EXPECT_EQ(ch.output_count(), 4u);
  for (std::size_t x = 0; x < ch.input_count(); ++x) {
    const double eta = ch.input_wins(x) ? 0.9 : 0.3;
    for (std::size_t y = 0; y < 4; ++y) {
      const double expected = eta * (y == ch.input_question(x) ? 1.0 : 0.0) + (1.0 - eta) / 4.0;
      EXPECT_NEAR(ch.probability(x, y), expected, 1e-15);
    }
  }
  EXPECT_NEAR(ch.f_win(), noise_entropy(4, 0.9), 1e-14);
  EXPECT_NEAR(ch.f_lose(), noise_entropy(4, 0.3), 1e-14);
  const auto check = constant_noise_check(ch);
  EXPECT_LT(check.win_spread, 1e-14);
  EXPECT_LT(check.lose_spread, 1e-14);
  EXPECT_LT(check.normalization_error, 1e-15);
}

TEST(Depolarizing, Preconditions) {
  const auto game = chsh_game();
  EXPECT_THROW(depolarizing_mac(game, 0.3, 0.3), std::invalid_argument);
  EXPECT_THROW(depolarizing_mac(game, 0.3, 0.5), std::invalid_argument);
  EXPECT_THROW(depolarizing_mac(game, 1.2, 0.5), std::invalid_argument);
  EXPECT_THROW(type_i(game, 1.0), std::invalid_argument);
  EXPECT_THROW(type_ii(game, 0.0), std::invalid_argument);
}

TEST(TypeChannels, Parameters) {
  const auto game = magic_square_game();
  const auto one = type_i(game, 0.4);
  EXPECT_EQ(one.retention()->first, 1.0);
  EXPECT_EQ(one.retention()->second, 0.4);
  EXPECT_NEAR(one.f_win(), 0.0, 1e-15);
  const auto two = type_ii(game, 0.4);
  EXPECT_NEAR(two.f_lose(), std::log2(9.0), 1e-14);
  EXPECT_EQ(make_channel(game, ChannelType::type_i, 0.4).retention(), one.retention());
}

TEST(TypeChannels, NoiselessWinningRowCopiesQuestion) {
  const auto ch = type_i(mpp_game(3), 0.2);
  for (std::size_t x = 0; x < ch.input_count(); ++x)
    if (ch.input_wins(x)) {
      EXPECT_EQ(ch.probability(x, ch.input_question(x)), 1.0);
    }
}

TEST(TwoBranch, RequiresWinBranchToBeLessNoisy) {
  const auto game = chsh_game();
  const BranchRule clean = [](std::size_t q) { return depolarizing_row(4, q, 1.0); };
  const BranchRule noisy = [](std::size_t q) { return depolarizing_row(4, q, 0.0); };
  EXPECT_NO_THROW(two_branch_mac(game, clean, noisy));
  EXPECT_THROW(two_branch_mac(game, noisy, clean), std::invalid_argument);
}

TEST(ChannelCsv, NonzeroEntriesOnly) {
  std::ostringstream out;
  write_channel_csv(out, type_i(chsh_game(), 0.0));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("x-index,y-index,probability\n", 0), 0u);
  EXPECT_NE(text.find("\n0,0,1\n"), std::string::npos);
  EXPECT_NE(text.find(",0.25\n"), std::string::npos);
}
