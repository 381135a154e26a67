// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nhssh/correlation.hpp"
#include "nhssh/edoracle.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"
#include "support.hpp"

using namespace nhssh;
using nhssh::test::tol;

namespace {

ModelParams make(const char* u, const char* v, const char* w, const char* delta, int L, int ell, int digits = 40) {
  return ModelParams::from_strings(u, v, w, delta, L, ell, Precision{digits});
}

const OracleReport& find(const std::vector<OracleReport>& r, const std::string& name) {
  for (const auto& x : r)
    if (x.quantity == name) return x;
  throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST_CASE("fermion operators anticommute") {
  const Precision p{30};
  const int L = 4;
  std::vector<BigMatrix> c;
  for (int j = 0; j < L; ++j) c.push_back(annihilation_operator(L, j, p));
  const BigMatrix id = BigMatrix::identity(16, p);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const BigMatrix cd = adjoint(c[j]);
      const BigMatrix anti = c[i] * cd + cd * c[i];
      if (i == j) CHECK(max_abs_diff(anti, id).is_zero());
      else CHECK(max_norm(anti).is_zero());
      CHECK(max_norm(c[i] * c[j] + c[j] * c[i]).is_zero());
    }
  }
}

TEST_CASE("two sites: one-particle energies are +-|eta(0)|") {
  const ModelParams m = make("0", "1", "2", "0", 2, 2);
  const Precision p = m.precision;
  const FockOperator h = many_body_hamiltonian(m);
  const auto e = eigenvalues(h.sectors[1].block);
  CHECK(abs(e[0] - BigComplex(BigReal(-3, p))) < tol(-35, p));
  CHECK(abs(e[1] - BigComplex(BigReal(3, p))) < tol(-35, p));
}

TEST_CASE("Hamiltonian conserves the particle number") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 6, 2);
  const BigMatrix h = many_body_hamiltonian(m).to_dense();
  const BigMatrix q = number_operator(6, m.precision);
  CHECK(max_norm(h * q - q * h).is_zero());
}

TEST_CASE("PT-unbroken spectrum is real and the ground state is the filled lower band") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 8, 4, 60);
  const Precision p = m.precision;
  const GroundState gs = left_right_ground(many_body_hamiltonian(m));
  for (const auto& e : gs.spectrum) CHECK(abs(e.im) < tol(-30, p));
  BigReal filled(p);
  for (const auto& k : momentum_grid(m)) filled -= band_energy(m, k).re;
  CHECK(abs(gs.energy.re - filled) < tol(-30, p));
  CHECK(gs.charge == 4);
  BigComplex dot(p);
  for (std::size_t i = 0; i < gs.right.size(); ++i) dot += gs.left[i] * gs.right[i];
  CHECK(abs(dot - BigComplex(BigReal(1, p))) < tol(-50, p));
  CHECK(gs.residual < tol(-30, p));
}

TEST_CASE("Hermitian limit: left state is the conjugate of the right state") {
  const ModelParams m = make("0", "1", "2", "0", 6, 2);
  const Precision p = m.precision;
  const GroundState gs = left_right_ground(many_body_hamiltonian(m));
  const BigReal n2 = vector_norm(gs.right) * vector_norm(gs.right);
  for (std::size_t i = 0; i < gs.right.size(); ++i) CHECK(abs(gs.left[i] - conj(gs.right[i]) / n2) < tol(-30, p));
  const BigMatrix rho = reduced_density_matrix(gs, 6, 2);
  CHECK(max_abs_diff(adjoint(rho), rho) < tol(-30, p));
}

TEST_CASE("partial trace edge cases") {
  const ModelParams m = make("1", "1", "5", "0", 6, 2);
  const Precision p = m.precision;
  const GroundState gs = left_right_ground(many_body_hamiltonian(m));
  const BigMatrix full = reduced_density_matrix(gs, 6, 6);
  CHECK(abs(trace(full) - BigComplex(BigReal(1, p))) < tol(-30, p));
  const BigMatrix none = reduced_density_matrix(gs, 6, 0);
  REQUIRE(none.rows() == 1);
  CHECK(abs(none(0, 0) - BigComplex(BigReal(1, p))) < tol(-30, p));
  CHECK(abs(trace(reduced_density_matrix(gs, 6, 4)) - BigComplex(BigReal(1, p))) < tol(-30, p));
}

TEST_CASE("ED correlation equals the Gaussian correlation matrix") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-3", 8, 4, 60);
  const GroundState gs = left_right_ground(many_body_hamiltonian(m));
  CHECK(max_abs_diff(ed_correlation(gs, 8), build_correlation(m).matrix) < tol(-30, m.precision));
}

TEST_CASE("oracle suite: Hermitian, critical, gapped") {
  SUBCASE("u = 0, all discrepancies below 10^-(P/2)") {
    const ModelParams m = make("0", "1", "2", "0", 8, 4);
    const auto r = compare_all(m, 4);
    for (const auto& name : {"correlation", "rho_spectrum", "entropy"}) {
      CHECK(find(r, name).discrepancy < tol(-20, m.precision));
    }
    CHECK(find(r, "sector_signs").pass);
    CHECK_FALSE(find(r, "sign_rule").applicable);
  }
  SUBCASE("critical, delta = 1e-3: every comparison passes and the sign rule applies") {
    const ModelParams m = make("0.5", "1", "1.5", "1e-3", 8, 4, 60);
    const auto r = compare_all(m, 4);
    for (const auto& x : r) CHECK_MESSAGE(x.pass, x.quantity);
    CHECK(find(r, "sign_rule").applicable);
    CHECK(find(r, "correlation").discrepancy < tol(-30, m.precision));
  }
  SUBCASE("gapped, L = 10") {
    const ModelParams m = make("1", "1", "5", "0", 10, 4);
    const auto r = compare_all(m, 4);
    CHECK(find(r, "rho_spectrum").discrepancy < tol(-10, m.precision));
    for (const auto& x : r) CHECK_MESSAGE(x.pass, x.quantity);
  }
}

TEST_CASE("oracle guards") {
  CHECK_THROWS_AS(many_body_hamiltonian(make("0", "1", "2", "0", 14, 4)), SizeError);
  CHECK_THROWS_AS(compare_all(make("0", "1", "2", "0", 8, 8), 8), SizeError);
  // PT-broken: the +-i modes at k = pi can both be filled or both be empty, giving two real
  // states at the lowest real part in different charge sectors
  CHECK_THROWS_AS(left_right_ground(many_body_hamiltonian(make("1", "1", "1.5", "0", 4, 2))), DegenerateGround);
}
