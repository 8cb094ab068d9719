#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamemac {

/// Integer power for alphabet sizes. Throws on overflow of std::size_t.
inline std::size_t checked_pow(std::size_t base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > SIZE_MAX / base) {
      throw std::overflow_error("alphabet size overflows std::size_t");
    }
    result *= base;
  }
  return result;
}

/// Mixed-radix packing of a tuple of digits in [0, radix). The first entry of
/// the tuple is the most significant digit, so party 1 owns the high-order
/// part of every packed index.
inline std::size_t pack_tuple(std::span<const int> digits, int radix) {
  std::size_t index = 0;
  for (int digit : digits) {
    index = index * static_cast<std::size_t>(radix) + static_cast<std::size_t>(digit);
  }
  return index;
}

inline void unpack_tuple(std::size_t index, int radix, std::span<int> digits) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    digits[k] = static_cast<int>(index % static_cast<std::size_t>(radix));
    index /= static_cast<std::size_t>(radix);
  }
}

inline std::vector<int> unpack_tuple(std::size_t index, int radix, int count) {
  std::vector<int> digits(static_cast<std::size_t>(count));
  unpack_tuple(index, radix, digits);
  return digits;
}

/// Digit of party `party` (0-based, 0 = most significant) in a packed tuple.
inline int tuple_digit(std::size_t index, int radix, int count, int party) {
  for (int k = count - 1; k > party; --k) index /= static_cast<std::size_t>(radix);
  return static_cast<int>(index % static_cast<std::size_t>(radix));
}

/// An (n, d, D) Bell scenario: `parties` players, each with `inputs` possible
/// questions and `outputs` possible answers.
struct Scenario {
  int parties = 0;
  int inputs = 0;
  int outputs = 0;

  std::size_t input_tuples() const { return checked_pow(static_cast<std::size_t>(inputs), parties); }
  std::size_t output_tuples() const { return checked_pow(static_cast<std::size_t>(outputs), parties); }

  /// Per-party local strategy count D^d.
  std::size_t local_functions() const { return checked_pow(static_cast<std::size_t>(outputs), inputs); }

  void validate() const {
    if (parties < 2) throw std::invalid_argument("scenario needs at least 2 parties, got " + std::to_string(parties));
    if (inputs < 2) throw std::invalid_argument("scenario needs at least 2 inputs, got " + std::to_string(inputs));
    if (outputs < 2) throw std::invalid_argument("scenario needs at least 2 outputs, got " + std::to_string(outputs));
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;

  std::string to_string() const {
    return "(" + std::to_string(parties) + "," + std::to_string(inputs) + "," + std::to_string(outputs) + ")";
  }
};

}  // namespace gamemac
