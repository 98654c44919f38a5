#pragma once

// Deterministic pseudo-random source for property tests and generated
// examples. SplitMix64 core; identical output on every platform.

#include "forge/scalar.hpp"

#include <cstdint>

namespace forge {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_index(std::uint64_t bound) { return bound ? next() % bound : 0; }

  // Small integer in [-3, 3], biased toward 0 and ±1.
  long small_int() {
    static const long table[] = {0, 0, 0, 1, 1, -1, -1, 2, -2, 3, -3};
    return table[next() % (sizeof(table) / sizeof(table[0]))];
  }

  // Small rational with denominator in {1, 2, 3}.
  Rational small_rational() {
    long num = small_int();
    long den = 1 + static_cast<long>(next_index(3));
    return Rational(num) / Rational(den);
  }

  // Small Gaussian rational; mostly real, sometimes with an imaginary part.
  Scalar small_scalar() {
    Rational re = small_rational();
    Rational im = (next_index(3) == 0) ? small_rational() : Rational(0);
    return Scalar{re, im};
  }

  // Nonzero variant (retries; terminates because small_int hits ±1 often).
  Scalar small_scalar_nonzero() {
    for (;;) {
      Scalar s = small_scalar();
      if (!s.is_zero()) return s;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace forge
