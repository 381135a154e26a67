// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "nhssh/bignum.hpp"
#include "nhssh/errors.hpp"
#include "support.hpp"

using namespace nhssh;
using nhssh::test::num;
using nhssh::test::tol;

namespace {
// 60 digits of pi and e, for checking the library constants independently
constexpr const char* kPi = "3.14159265358979323846264338327950288419716939937510582097494";
constexpr const char* kE = "2.71828182845904523536028747135266249775724709369995957496697";
}  // namespace

TEST_CASE("constants agree with published digits") {
  const Precision p{80};
  CHECK(abs(pi(p) - num(kPi, p)) < tol(-58, p));
  CHECK(abs(exp(BigReal(1, p)) - num(kE, p)) < tol(-58, p));
}

TEST_CASE("precision is carried by the value, not global state") {
  const BigReal a(1, Precision{50});
  const BigReal b(1, Precision{200});
  CHECK((a + b).precision().digits >= 200);
  CHECK(Precision::from_bits(Precision{123}.bits()).digits == 123);
}

TEST_CASE("parse accepts decimal literals and rejects junk") {
  const Precision p{40};
  CHECK(num("-2e-7", p) == -(BigReal(2, p) / pow10(7, p)));
  CHECK(num("1.5", p) == BigReal(3, p) / BigReal(2, p));
  CHECK_THROWS_AS(BigReal::parse("1.5x", p), DomainError);
  CHECK_THROWS_AS(BigReal::parse("", p), DomainError);
}

TEST_CASE("to_string is scientific and deterministic") {
  const Precision p{40};
  CHECK(to_string(BigReal(0, p), 10) == "0");
  CHECK(to_string(num("-0.000123", p), 5) == "-1.23e-4");
  CHECK(to_string(BigReal(2, p), 5) == "2.0e0");
}

TEST_CASE("clog branch conventions") {
  const Precision p{60};
  const BigComplex one(BigReal(1, p));
  const BigComplex minus_one(BigReal(-1, p));
  CHECK(clog(one).re.is_zero());
  CHECK(clog(one).im.is_zero());
  const BigComplex up = clog(minus_one, BranchRule::PrincipalUpper);
  CHECK(abs(up.im - pi(p)) < tol(-55, p));
  const BigComplex down = clog(minus_one, BranchRule::PrincipalLower);
  CHECK(abs(down.im + pi(p)) < tol(-55, p));
  // a rounding-level imaginary part still lands on the chosen side within the cut tolerance
  const BigComplex nearly(BigReal(-1, p), -tol(-50, p));
  CHECK(clog(nearly, BranchRule::PrincipalUpper, tol(-40, p)).im.sign() > 0);
  CHECK(clog(nearly, BranchRule::PrincipalUpper).im.sign() < 0);
  const BigComplex e2(exp(BigReal(2, p)));
  CHECK(abs(clog(e2).re - BigReal(2, p)) < tol(-55, p));
  CHECK_THROWS_AS(clog(BigComplex(p)), DomainError);
}

TEST_CASE("csqrt, catan basics") {
  const Precision p{50};
  CHECK(abs(csqrt(BigComplex(BigReal(4, p))) - BigComplex(BigReal(2, p))) < tol(-45, p));
  const BigComplex r = csqrt(BigComplex(BigReal(-9, p)));
  CHECK(abs(r.im - BigReal(3, p)) < tol(-45, p));
  CHECK(r.re.is_zero());
  CHECK(catan(BigComplex(p)).is_zero());
  // tan(atan z) = z on a generic point
  const BigComplex z = test::cnum("0.3", "-0.7", p);
  const BigComplex a = catan(z);
  CHECK(abs(csin(a) / ccos(a) - z) < tol(-45, p));
  CHECK_THROWS_AS(catan(BigComplex(BigReal(p), BigReal(1, p))), DomainError);
}

TEST_CASE("cexp(clog z) round trip on 100 random points") {
  const Precision p{100};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  BigReal worst(p);
  for (int i = 0; i < 100; ++i) {
    const BigComplex z(BigReal(dist(rng), p) / BigReal(1000, p), BigReal(dist(rng), p) / BigReal(1000, p));
    worst = max(worst, abs(cexp(clog(z)) - z) / abs(z));
  }
  CHECK(worst < tol(-90, p));
}

TEST_CASE("fused kernels match the plain operators") {
  const Precision p{60};
  const BigComplex a = test::cnum("1.25", "-3.5", p);
  const BigComplex b = test::cnum("-0.75", "2", p);
  Scratch s(p);
  BigComplex acc = test::cnum("0.5", "0.5", p);
  const BigComplex start = acc;
  add_mul(acc, a, b, s);
  CHECK(acc == start + a * b);
  sub_mul(acc, a, b, s);
  CHECK(abs(acc - start) < tol(-55, p));
  BigComplex c(p);
  add_conj_mul(c, a, b, s);
  CHECK(c == conj(a) * b);
  BigComplex out(p);
  mul_to(out, a, b, s);
  CHECK(out == a * b);
}
