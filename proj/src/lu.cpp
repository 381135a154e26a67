// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>
#include <string>
#include <utility>

#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

BigReal pivot_threshold(const BigMatrix& m, const LinalgOptions& opts) {
  const Precision p = m.precision();
  BigReal scale = max_norm(m);
  if (scale.is_zero()) scale = BigReal(1, p);
  return pow10(-static_cast<long>(p.digits) + opts.singular_margin_digits, p) * scale;
}

}  // namespace

LuFactors lu_factor(const BigMatrix& m, const LinalgOptions& opts) {
  if (!m.square()) throw std::invalid_argument("lu_factor: matrix not square");
  const std::size_t n = m.rows();
  const BigReal threshold = pivot_threshold(m, opts);
  LuFactors f{m, std::vector<std::size_t>(n)};
  BigMatrix& a = f.lu;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    BigReal best_mag = abs1(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      BigReal mag = abs1(a(i, k));
      if (mag > best_mag) {
        best_mag = std::move(mag);
        best = i;
      }
    }
    f.pivots[k] = best;
    if (abs(a(best, k)) < threshold) {
      throw SingularMatrix("pivot " + to_string(abs(a(best, k)), 6) + " at step " + std::to_string(k) +
                           " is below 10^(-P+" + std::to_string(opts.singular_margin_digits) +
                           ")*max|M|; raise the working precision");
    }
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
    }
    const BigComplex pivot_inv = BigComplex(BigReal(1, m.precision())) / a(k, k);
    const auto last = static_cast<long>(n);
#pragma omp parallel
    {
      Scratch s(m.precision());
      BigComplex factor(m.precision());
#pragma omp for schedule(static)
      for (long i = static_cast<long>(k) + 1; i < last; ++i) {
        const auto row = static_cast<std::size_t>(i);
        if (a(row, k).is_zero()) continue;
        mul_to(factor, a(row, k), pivot_inv, s);
        assign(a(row, k), factor);
        for (std::size_t j = k + 1; j < n; ++j) sub_mul(a(row, j), factor, a(k, j), s);
      }
    }
  }
  return f;
}

std::vector<BigComplex> lu_solve(const LuFactors& f, std::vector<BigComplex> x) {
  const BigMatrix& a = f.lu;
  const std::size_t n = a.rows();
  if (x.size() != n) throw std::invalid_argument("lu_solve: size mismatch");
  Scratch s(a.precision());
  for (std::size_t k = 0; k < n; ++k) {
    if (f.pivots[k] != k) std::swap(x[k], x[f.pivots[k]]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) sub_mul(x[i], a(i, j), x[j], s);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) sub_mul(x[ii], a(ii, j), x[j], s);
    x[ii] = x[ii] / a(ii, ii);
  }
  return x;
}

InverseResult lu_invert(const BigMatrix& m, const LinalgOptions& opts) {
  const LuFactors f = lu_factor(m, opts);
  const std::size_t n = m.rows();
  const Precision p = m.precision();
  BigMatrix inv(n, n, p);
  const auto cols = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long jj = 0; jj < cols; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    std::vector<BigComplex> e(n, BigComplex(p));
    e[j].re = BigReal(1, p);
    auto col = lu_solve(f, std::move(e));
    for (std::size_t i = 0; i < n; ++i) assign(inv(i, j), col[i]);
  }
  BigMatrix check = m * inv;
  for (std::size_t i = 0; i < n; ++i) check(i, i).re -= BigReal(1, p);
  return InverseResult{std::move(inv), max_norm(check)};
}

}  // namespace nhssh
