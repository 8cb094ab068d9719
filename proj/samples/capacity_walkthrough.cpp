// Computes a few capacities of the CHSH and magic-square channels.
#include <cstdio>

#include "gamemac/capacity.hpp"

int main() {
  using namespace gamemac;
  OptimizerConfig cfg;

  const auto chsh = chsh_game();
  const auto noisy = type_ii(chsh, 0.9);
  const auto classical = classical_capacity_exact(noisy, cfg);
  const auto quantum = quantum_lower_bound_chsh(noisy, cfg);
  const auto nonlocal = pseudo_telepathy_capacity(noisy, pr_box(), "NS");
  std::printf("CHSH, Type-II, eta = 0.9\n");
  std::printf("  classical (exact)      %.4f  [%s]\n", classical.value, classical.diagnostic().c_str());
  std::printf("  Tsirelson box (lower)  %.4f\n", quantum.value);
  std::printf("  PR box (exact)         %.4f\n", nonlocal.value);

  const auto ms = magic_square_game();
  const auto ms_channel = type_i(ms, 0.5);
  const double omega = bruteforce_classical_game_value(ms).value();
  std::printf("magic square, Type-I, eta = 0.5\n");
  std::printf("  classical upper bound  %.4f (omega_L = %.4f)\n", classical_upper_bound(ms_channel, omega, cfg).value, omega);
  std::printf("  quantum (exact)        %.4f\n", pseudo_telepathy_capacity(ms_channel, magic_square_box(), "Q").value);
  return 0;
}
