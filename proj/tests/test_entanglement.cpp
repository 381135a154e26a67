// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nhssh/correlation.hpp"
#include "nhssh/entanglement.hpp"
#include "nhssh/errors.hpp"
#include "support.hpp"

using namespace nhssh;
using nhssh::test::tol;

namespace {

ModelParams make(const char* u, const char* v, const char* w, const char* delta, int L, int ell, int digits) {
  return ModelParams::from_strings(u, v, w, delta, L, ell, Precision{digits});
}

BigComplex real(long num, long den, Precision p) { return BigComplex(BigReal(num, p) / BigReal(den, p)); }

}  // namespace

TEST_CASE("single mode at half filling has a vanishing kernel") {
  const ModelParams m = make("0", "1", "2", "0", 8, 2, 50);
  const Precision p = m.precision;
  BigMatrix c(1, 1, p);
  c(0, 0) = real(1, 2, p);
  const EntanglementKernel k = eh_kernel(CorrelationMatrix{c, m, true});
  CHECK(abs(k.kA(0, 0)) < tol(-45, p));
  const Entropies e = entropies({real(1, 2, p)}, {2});
  CHECK(abs(e.von_neumann - BigComplex(log(BigReal(2, p)))) < tol(-45, p));
  CHECK(abs(e.renyi[0] - BigComplex(log(BigReal(2, p)))) < tol(-45, p));
}

TEST_CASE("single-particle energies on the negative axis") {
  const Precision p{50};
  const BigComplex a = single_particle_energy(BigComplex(BigReal(2, p)), BranchRule::PrincipalUpper);
  CHECK(abs(a - BigComplex(-log(BigReal(2, p)), pi(p))) < tol(-45, p));
  const BigComplex b = single_particle_energy(BigComplex(BigReal(-1, p)), BranchRule::PrincipalUpper);
  CHECK(abs(b - BigComplex(log(BigReal(2, p)), pi(p))) < tol(-45, p));
}

TEST_CASE("entropies reject occupations at 0 or 1") {
  const Precision p{40};
  CHECK_THROWS_AS(entropies({BigComplex(BigReal(1, p))}, {}), DomainError);
  CHECK_THROWS_AS(entropies({real(1, 2, p)}, {1}), std::invalid_argument);
}

TEST_CASE("Gaussian many-body spectrum of one mode nu = 2") {
  const Precision p{40};
  const auto s = gaussian_many_body_spectrum({BigComplex(BigReal(2, p))});
  REQUIRE(s.size() == 2);
  CHECK(abs(s[0] - BigComplex(BigReal(-1, p))) < tol(-35, p));  // empty: 1 - nu
  CHECK(abs(s[1] - BigComplex(BigReal(2, p))) < tol(-35, p));   // occupied: nu
}

TEST_CASE("Hermitian limit: kernel is Hermitian, spectrum real, entropy positive") {
  const ModelParams m = make("0", "1", "1.5", "0", 200, 16, 80);
  const Precision p = m.precision;
  const CorrelationMatrix c = build_restricted_correlation(m);
  const EntanglementKernel k = eh_kernel(c);
  CHECK(max_abs_diff(adjoint(k.kA), k.kA) < tol(-40, p));
  CHECK(k.residual < tol(-40, p));
  const SpectralData s = spectra(c, k);
  for (const auto& e : s.eps) CHECK(abs(e.im) < tol(-40, p));
  const Entropies en = entropies(s.nu, {2});
  CHECK(en.von_neumann.re > BigReal(0, p));
  CHECK(abs(en.von_neumann.im) < tol(-40, p));
  CHECK(en.renyi[0].re <= en.von_neumann.re);
  const ChargeSectorAnalysis cs = charge_sector_signs(s, 12);
  for (const auto& sec : cs.sectors) CHECK(sec.negative == 0);
}

TEST_CASE("critical kernel: Im eps = pi, pairing, sign rule") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-4", 400, 20, 150);
  const Precision p = m.precision;
  const CorrelationMatrix c = build_restricted_correlation(m);
  const EntanglementKernel k = eh_kernel(c);
  CHECK(k.residual_computed);
  CHECK(k.residual * max(BigReal(1, p), k.m_norm) < tol(-75, p));
  // the independent check: exp of the transposed kernel rebuilds C_A^-1 - I
  BigMatrix target = lu_invert(c.matrix).inverse;
  for (std::size_t i = 0; i < target.rows(); ++i) target(i, i).re -= BigReal(1, p);
  CHECK(max_abs_diff(matrix_exp(transpose(k.kA)), target) < tol(-75, p));

  const SpectralData s = spectra(c, k);
  CHECK(s.pairing_checked);
  for (const auto& e : s.eps) CHECK(abs(e.im - pi(p)) < tol(-60, p));
  const ChargeSectorAnalysis cs = charge_sector_signs(s, 12);
  CHECK(cs.mean_charge_integer);
  CHECK(cs.rule_consistent);
  for (const auto& sec : cs.sectors) {
    CHECK(sec.complex == 0);
    CHECK(sec.rule_holds);
  }
}

TEST_CASE("charge sectors of a hand-built spectrum") {
  const Precision p{40};
  std::vector<BigComplex> nu{BigComplex(BigReal(2, p)), BigComplex(BigReal(-1, p))};
  std::vector<BigComplex> eps;
  for (const auto& v : nu) eps.push_back(single_particle_energy(v, BranchRule::PrincipalUpper));
  const SpectralData s{nu, eps, BranchRule::PrincipalUpper, BigReal(p), BigReal(p), false};
  const ChargeSectorAnalysis cs = charge_sector_signs(s, 2);
  // products: q=0 (1-2)(1+1) = -2, q=1 {2*2, (-1)(-1)} = {4, 1}, q=2 2*(-1) = -2
  REQUIRE(cs.sectors.size() == 3);
  CHECK(cs.sectors[0].negative == 1);
  CHECK(cs.sectors[1].positive == 2);
  CHECK(cs.sectors[2].negative == 1);
  CHECK(cs.mean_charge_integer);
  CHECK(cs.rule_consistent);
}
