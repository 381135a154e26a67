// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include "doctest.h"
#include "nhssh/correlation.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"
#include "support.hpp"

using namespace nhssh;
using nhssh::test::tol;

namespace {

ModelParams make(const char* u, const char* v, const char* w, const char* delta, int L, int ell, int digits = 60) {
  return ModelParams::from_strings(u, v, w, delta, L, ell, Precision{digits});
}

}  // namespace

TEST_CASE("symbol is a rank-one projector with unit trace") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 16, 4);
  const Precision p = m.precision;
  for (const auto& k : momentum_grid(m)) {
    const SymbolG g = symbol(m, k);
    CHECK(abs(trace(g.entries) - BigComplex(BigReal(1, p))) < tol(-30, p));
    CHECK(max_abs_diff(g.entries * g.entries, g.entries) < tol(-30, p));
  }
}

TEST_CASE("closed-form symbol matches the eigenvector construction") {
  const ModelParams gapped = make("1", "1", "5", "0", 8, 4);
  const Precision p = gapped.precision;
  for (int i = 0; i < 50; ++i) {
    const BigReal k = BigReal(2 * i + 1, p) * pi(p) / BigReal(50, p);
    SymbolOptions o;
    o.cross_check = false;
    CHECK(max_abs_diff(symbol(gapped, k, o).entries, eigenvector_symbol(gapped, k).entries) < tol(-30, p));
  }
  const ModelParams critical = make("0.5", "1", "1.5", "1e-3", 40, 4);
  for (const auto& k : momentum_grid(critical)) {
    SymbolOptions o;
    o.cross_check = false;
    CHECK(max_abs_diff(symbol(critical, k, o).entries, eigenvector_symbol(critical, k).entries) < tol(-30, p));
  }
}

TEST_CASE("Hermitian limit: symbol is the lower band projector") {
  const ModelParams m = make("0", "1", "2", "0", 8, 4);
  const Precision p = m.precision;
  const BigReal k = BigReal(1, p) / BigReal(3, p);
  const SymbolG g = symbol(m, k);
  // G_ab = <c+_a c_b> is the transpose of the lower-band projector P: H P = E_- P, P Hermitian
  const BigMatrix h = bloch_matrix(m, k);
  const BigReal e = band_energy(m, k).re;
  const BigMatrix proj = transpose(g.entries);
  BigMatrix hp = h * proj;
  BigMatrix ep = proj;
  ep *= -e;
  CHECK(max_abs_diff(hp, ep) < tol(-50, p));
  CHECK(max_abs_diff(adjoint(g.entries), g.entries) < tol(-50, p));
}

TEST_CASE("full correlation matrix: trace and Hermitian projector") {
  const ModelParams m = make("0", "1", "2", "0", 20, 4);
  const Precision p = m.precision;
  const CorrelationMatrix c = build_correlation(m);
  CHECK(abs(trace(c.matrix) - BigComplex(BigReal(10, p))) < tol(-40, p));
  CHECK(max_abs_diff(c.matrix * c.matrix, c.matrix) < tol(-40, p));

  const ModelParams crit = make("0.5", "1", "1.5", "1e-3", 20, 4);
  CHECK(abs(trace(build_correlation(crit).matrix) - BigComplex(BigReal(10, p))) < tol(-40, p));
}

TEST_CASE("restricted build equals restricting the full matrix") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 24, 8);
  const Precision p = m.precision;
  const CorrelationMatrix full = build_correlation(m);
  const CorrelationMatrix direct = build_restricted_correlation(m);
  CHECK(direct.restricted);
  CHECK(max_abs_diff(restrict(full, 8).matrix, direct.matrix) < tol(-40, p));
  CHECK(max_abs_diff(restrict(full, 24).matrix, full.matrix).is_zero());
  CHECK(abs(trace(direct.matrix) - BigComplex(BigReal(4, p))) < tol(-40, p));
}

TEST_CASE("momentum sum kernels: serial oracle and thread-count independence") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 64, 8);
  const Precision p = m.precision;
  const auto symbols = symbols_on_grid(m);
  const auto serial = kernels::momentum_sum_serial(symbols, -3, 3);
  CHECK(kernels::momentum_sum_parallel(symbols, -3, 3, 1) == serial);
  omp_set_num_threads(1);
  const auto one = kernels::momentum_sum_parallel(symbols, -3, 3, 8);
  omp_set_num_threads(4);
  const auto four = kernels::momentum_sum_parallel(symbols, -3, 3, 8);
  omp_set_num_threads(omp_get_num_procs());
  CHECK(one == four);
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(abs(one[i] - serial[i]) < tol(-55, p));
}

TEST_CASE("critical occupations lie outside [0, 1]") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-7", 2000, 20, 120);
  const Precision p = m.precision;
  const auto nu = eigenvalues(build_restricted_correlation(m).matrix);
  for (const auto& v : nu) {
    CHECK(abs(v.im) < tol(-30, p));
    CHECK((v.re < BigReal(0, p) || v.re > BigReal(1, p)));
  }
}
