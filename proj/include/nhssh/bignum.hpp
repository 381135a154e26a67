// SPDX-License-Identifier: Apache-2.0
//
// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries its own working precision; binary operations produce a
// result at the larger of the two operand precisions, so precision is never
// silently lowered. Rounding is always to-nearest. There is no global
// precision state: the precision is passed explicitly at construction.
#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nhssh {

/// Working precision expressed in decimal digits.
struct Precision {
  int digits = 500;

  /// Guard bits added on top of ceil(digits * log2(10)).
  static constexpr int kGuardBits = 32;

  mpfr_prec_t bits() const;
  static Precision from_bits(mpfr_prec_t bits);

  friend bool operator==(const Precision&, const Precision&) = default;
};

class BigReal {
 public:
  explicit BigReal(Precision p);
  BigReal(long value, Precision p);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  /// Exact conversion from a double (doubles are dyadic rationals).
  static BigReal from_double(double value, Precision p);
  /// Parses a decimal literal such as "1.5", "-2e-7" at precision p.
  /// Throws DomainError when the whole string is not a number.
  static BigReal parse(std::string_view text, Precision p);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  Precision precision() const { return Precision::from_bits(bits()); }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(value_, MPFR_RNDN); }
  /// Decimal exponent e with |x| in [10^(e-1), 10^e); zero maps to a huge negative value.
  long decimal_exponent() const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
/// Natural log; DomainError for x <= 0.
BigReal log(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal pi(Precision p);
/// 10^exponent at precision p.
BigReal pow10(long exponent, Precision p);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);

/// Scientific notation with `significant` digits, e.g. "-1.2345e-7". Deterministic.
std::string to_string(const BigReal& x, int significant);
std::ostream& operator<<(std::ostream& os, const BigReal& x);

/// Branch conventions for multivalued complex functions.
///
/// PrincipalUpper: arg in (-pi, pi]; points on the negative real axis (either
/// sign of zero, or within the cut tolerance) get arg = +pi.
/// PrincipalLower: arg in [-pi, pi); the same points get arg = -pi.
enum class BranchRule { PrincipalUpper, PrincipalLower };

std::string_view to_string(BranchRule rule);

class BigComplex {
 public:
  BigReal re;
  BigReal im;

  explicit BigComplex(Precision p) : re(p), im(p) {}
  BigComplex(BigReal real, BigReal imag);
  /// Purely real value.
  explicit BigComplex(BigReal real);

  Precision precision() const { return re.precision(); }
  mpfr_prec_t bits() const { return re.bits(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator*=(const BigReal& rhs);
  BigComplex& operator/=(const BigComplex& rhs);

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator*(const BigComplex& a, const BigReal& b);
  friend BigComplex operator*(const BigReal& a, const BigComplex& b);
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator/(const BigComplex& a, const BigReal& b);
  friend BigComplex operator-(const BigComplex& a);

  friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re == b.re && a.im == b.im; }
};

BigComplex conj(const BigComplex& z);
/// |z|^2
BigReal norm(const BigComplex& z);
BigReal abs(const BigComplex& z);
/// |re| + |im|, the cheap magnitude used for pivoting and deflation tests.
BigReal abs1(const BigComplex& z);
/// Argument under the given branch rule; DomainError at z = 0.
BigReal arg(const BigComplex& z, BranchRule rule);

/// log|z| + i arg(z). DomainError at z = 0.
BigComplex clog(const BigComplex& z, BranchRule rule = BranchRule::PrincipalUpper);
/// As above, but points with re < 0 and |im| <= cut_tolerance * |re| are treated
/// as lying on the negative real axis, so the rule decides their side of the cut.
BigComplex clog(const BigComplex& z, BranchRule rule, const BigReal& cut_tolerance);
/// Principal square root: Re >= 0, and +i sqrt|x| on the negative real axis.
BigComplex csqrt(const BigComplex& z);
BigComplex cexp(const BigComplex& z);
/// atan(z) = (1/2i) log((1+iz)/(1-iz)) with the PrincipalUpper log.
/// DomainError at the poles z = +-i.
BigComplex catan(const BigComplex& z);
BigComplex ccos(const BigComplex& z);
BigComplex csin(const BigComplex& z);

std::string to_string(const BigComplex& z, int significant);
std::ostream& operator<<(std::ostream& os, const BigComplex& z);

/// Temporaries for allocation-free fused complex kernels.
struct Scratch {
  explicit Scratch(Precision p) : t0(p), t1(p) {}
  BigReal t0;
  BigReal t1;
};

/// out = a * b (out must not alias a or b).
void mul_to(BigComplex& out, const BigComplex& a, const BigComplex& b, Scratch& s);
/// acc += a * b
void add_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s);
/// acc -= a * b
void sub_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s);
/// acc += conj(a) * b
void add_conj_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s);
/// acc += r * b for real r
void add_real_mul(BigComplex& acc, const BigReal& r, const BigComplex& b, Scratch& s);
/// Copies the value of src into dst without changing dst's precision.
void assign(BigComplex& dst, const BigComplex& src);

}  // namespace nhssh
