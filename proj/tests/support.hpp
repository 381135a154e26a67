// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "nhssh/bignum.hpp"
#include "nhssh/matrix.hpp"

namespace nhssh::test {

inline BigReal tol(long exponent, Precision p) { return pow10(exponent, p); }

inline BigReal num(const char* text, Precision p) { return BigReal::parse(text, p); }

inline BigComplex cnum(const char* re, const char* im, Precision p) { return BigComplex(num(re, p), num(im, p)); }

/// Entries uniform in [-1, 1] + i[-1, 1], reproducible from the seed.
inline BigMatrix random_matrix(std::size_t n, Precision p, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  const BigReal scale(1000000, p);
  BigMatrix m(n, n, p);
  for (auto& e : m.entries()) e = BigComplex(BigReal(dist(rng), p) / scale, BigReal(dist(rng), p) / scale);
  return m;
}

/// Random matrix plus n on the diagonal: comfortably well conditioned.
inline BigMatrix well_conditioned(std::size_t n, Precision p, unsigned seed) {
  BigMatrix m = random_matrix(n, p, seed);
  for (std::size_t i = 0; i < n; ++i) m(i, i).re += BigReal(static_cast<long>(n), p);
  return m;
}

}  // namespace nhssh::test
