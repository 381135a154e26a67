// SPDX-License-Identifier: Apache-2.0
#include "nhssh/correlation.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <string>

#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

BigReal half(Precision p) {
  BigReal h(1, p);
  mpfr_div_2si(h.get(), h.get(), 1, MPFR_RNDN);
  return h;
}

// 2 xi = atan(|eta| / (iu)); the argument -i|eta|/u is pure imaginary.
BigComplex two_xi(const ModelParams& params, const BigReal& abs_eta) {
  const Precision p = params.precision;
  if (params.u.is_zero()) return BigComplex(pi(p) * half(p));
  return catan(BigComplex(BigReal(p), -(abs_eta / params.u)));
}

}  // namespace

SymbolG eigenvector_symbol(const ModelParams& params, const BigReal& k) {
  const Precision p = params.precision;
  const BigMatrix h = bloch_matrix(params, k);
  const EigenDecomposition dec = [&] {
    try {
      return eig_general(h);
    } catch (const NumericalError& e) {
      throw DefectivePoint("Bloch matrix at k = " + to_string(k, 12) + " is not diagonalizable: " + e.what());
    }
  }();
  const BigReal cap = pow10(p.digits / 4, p);
  if (dec.condition_estimate > cap) {
    throw DefectivePoint("Bloch eigenvectors at k = " + to_string(k, 12) + " are collinear (condition " +
                         to_string(dec.condition_estimate, 4) + ")");
  }
  // eigenvalues are sorted by real part: index 0 is the lower band
  const BigMatrix& v = dec.right_eigenvectors;
  const BigMatrix& vinv = dec.inverse_eigenvectors;
  BigMatrix g(2, 2, p);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) g(a, b) = vinv(0, a) * v(b, 0);
  const BigComplex e = eta(params, k);
  return SymbolG{k, std::move(g), e, two_xi(params, abs(e)) * half(p)};
}

SymbolG symbol(const ModelParams& params, const BigReal& k, const SymbolOptions& opts) {
  const Precision p = params.precision;
  const BigComplex e = eta(params, k);
  const BigReal abs_e = abs(e);
  const BigComplex angle = two_xi(params, abs_e);
  const BigComplex c = ccos(angle);
  const BigComplex s = csin(angle);
  const BigComplex phase = conj(e) / abs_e;
  const BigReal h = half(p);
  const BigComplex one(BigReal(1, p));

  BigMatrix g(2, 2, p);
  g(0, 0) = (one - c) * h;
  g(0, 1) = -(phase * s) * h;
  g(1, 0) = -(s / phase) * h;
  g(1, 1) = (one + c) * h;
  SymbolG out{k, std::move(g), e, angle * h};

  if (opts.cross_check) {
    const SymbolG ref = eigenvector_symbol(params, k);
    const BigReal scale = max(BigReal(1, p), max_norm(ref.entries));
    const BigReal diff = max_abs_diff(out.entries, ref.entries);
    if (diff > pow10(-(p.digits / 2), p) * scale) {
      throw BranchInconsistency("closed-form symbol disagrees with the eigenvector construction at k = " +
                                to_string(k, 12) + " by " + to_string(diff, 4));
    }
  }
  return out;
}

std::vector<SymbolG> symbols_on_grid(const ModelParams& params, const SymbolOptions& opts) {
  const std::vector<BigReal> grid = momentum_grid(params);
  const Precision p = params.precision;
  std::vector<SymbolG> out(grid.size(), SymbolG{BigReal(p), BigMatrix(2, 2, p), BigComplex(p), BigComplex(p)});
  const auto n = static_cast<long>(grid.size());
  // exceptions cannot cross the parallel region; keep the first one by grid index
  std::vector<std::exception_ptr> errors(grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long m = 0; m < n; ++m) {
    try {
      out[static_cast<std::size_t>(m)] = symbol(params, grid[static_cast<std::size_t>(m)], opts);
    } catch (...) {
      errors[static_cast<std::size_t>(m)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace kernels {

namespace {

// acc[4 (d - d_min) + 2a + b] += e^{-ikd} G_ab for each symbol in [first, last)
void accumulate(const std::vector<SymbolG>& symbols, std::size_t first, std::size_t last, int d_min, int d_max,
                std::vector<BigComplex>& acc) {
  if (first >= last) return;
  const Precision p = symbols.front().entries.precision();
  Scratch s(p);
  BigComplex phase(p), next(p);
  for (std::size_t m = first; m < last; ++m) {
    const BigReal& k = symbols[m].k;
    const BigComplex step(cos(k), -sin(k));  // e^{-ik}
    const BigReal start = k * BigReal(d_min, p);
    phase = BigComplex(cos(start), -sin(start));
    const BigMatrix& g = symbols[m].entries;
    for (int d = d_min; d <= d_max; ++d) {
      const std::size_t base = 4 * static_cast<std::size_t>(d - d_min);
      add_mul(acc[base + 0], phase, g(0, 0), s);
      add_mul(acc[base + 1], phase, g(0, 1), s);
      add_mul(acc[base + 2], phase, g(1, 0), s);
      add_mul(acc[base + 3], phase, g(1, 1), s);
      mul_to(next, phase, step, s);
      std::swap(phase, next);
    }
  }
}

void divide_by_cells(std::vector<BigComplex>& acc, std::size_t cells) {
  if (acc.empty()) return;
  const BigReal n(static_cast<long>(cells), acc.front().precision());
  for (auto& e : acc) e = e / n;
}

}  // namespace

std::vector<BigComplex> momentum_sum_serial(const std::vector<SymbolG>& symbols, int d_min, int d_max) {
  if (symbols.empty()) throw std::invalid_argument("momentum_sum: empty grid");
  const Precision p = symbols.front().entries.precision();
  std::vector<BigComplex> acc(4 * static_cast<std::size_t>(d_max - d_min + 1), BigComplex(p));
  accumulate(symbols, 0, symbols.size(), d_min, d_max, acc);
  divide_by_cells(acc, symbols.size());
  return acc;
}

std::vector<BigComplex> momentum_sum_parallel(const std::vector<SymbolG>& symbols, int d_min, int d_max,
                                              int chunks) {
  if (symbols.empty()) throw std::invalid_argument("momentum_sum: empty grid");
  const Precision p = symbols.front().entries.precision();
  const std::size_t width = 4 * static_cast<std::size_t>(d_max - d_min + 1);
  const std::size_t n = symbols.size();
  const auto count = static_cast<std::size_t>(std::clamp<long>(chunks, 1, static_cast<long>(n)));
  std::vector<std::vector<BigComplex>> partial(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < static_cast<long>(count); ++c) {
    const auto ci = static_cast<std::size_t>(c);
    partial[ci].assign(width, BigComplex(p));
    accumulate(symbols, ci * n / count, (ci + 1) * n / count, d_min, d_max, partial[ci]);
  }
  std::vector<BigComplex> acc = std::move(partial[0]);
  for (std::size_t c = 1; c < count; ++c)
    for (std::size_t i = 0; i < width; ++i) acc[i] += partial[c][i];
  divide_by_cells(acc, n);
  return acc;
}

}  // namespace kernels

namespace {

// Fills an (2 cells) x (2 cells) matrix from blocks B_{j-l}, offsets starting at d_min.
BigMatrix assemble(const std::vector<BigComplex>& blocks, int cells, int d_min, Precision p) {
  const auto size = static_cast<std::size_t>(2 * cells);
  BigMatrix m(size, size, p);
  for (int j = 0; j < cells; ++j) {
    for (int l = 0; l < cells; ++l) {
      const std::size_t base = 4 * static_cast<std::size_t>(j - l - d_min);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          assign(m(2 * static_cast<std::size_t>(j) + a, 2 * static_cast<std::size_t>(l) + b), blocks[base + 2 * a + b]);
    }
  }
  return m;
}

}  // namespace

CorrelationMatrix build_correlation(const ModelParams& params, const CorrelationOptions& opts) {
  validate(params, false);
  require_ground_state(params);
  const int cells = params.cells();
  const std::vector<SymbolG> symbols = symbols_on_grid(params, opts.symbol);
  const auto blocks = kernels::momentum_sum_parallel(symbols, -(cells - 1), cells - 1, opts.chunks);
  return CorrelationMatrix{assemble(blocks, cells, -(cells - 1), params.precision), params, false};
}

CorrelationMatrix build_restricted_correlation(const ModelParams& params, const CorrelationOptions& opts) {
  validate(params, true);
  require_ground_state(params);
  const int cells = params.ell / 2;
  const std::vector<SymbolG> symbols = symbols_on_grid(params, opts.symbol);
  const auto blocks = kernels::momentum_sum_parallel(symbols, -(cells - 1), cells - 1, opts.chunks);
  return CorrelationMatrix{assemble(blocks, cells, -(cells - 1), params.precision), params, true};
}

CorrelationMatrix restrict(const CorrelationMatrix& c, int ell) {
  if (ell <= 0 || ell % 2 != 0 || static_cast<std::size_t>(ell) > c.matrix.rows()) {
    throw ConfigError("restrict: ell must be even and within the matrix, got " + std::to_string(ell));
  }
  const auto n = static_cast<std::size_t>(ell);
  ModelParams params = c.params;
  params.ell = ell;
  return CorrelationMatrix{c.matrix.block(0, 0, n, n), std::move(params), true};
}

}  // namespace nhssh
