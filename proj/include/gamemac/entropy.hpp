#pragma once

#include <cmath>
#include <span>

namespace gamemac {

/// x * log2(x) with 0 log 0 = 0.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/// Shannon entropy in bits of a probability vector.
inline double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(v);
  return h;
}

}  // namespace gamemac
