// SPDX-License-Identifier: Apache-2.0
#include "nhssh/bignum.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nhssh/errors.hpp"

namespace nhssh {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;
constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

mpfr_prec_t max_bits(const BigReal& a, const BigReal& b) { return std::max(a.bits(), b.bits()); }

BigReal at_bits(mpfr_prec_t bits) {
  BigReal r(Precision::from_bits(bits));
  if (r.bits() != bits) mpfr_set_prec(r.get(), bits);
  return r;
}

}  // namespace

mpfr_prec_t Precision::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + kGuardBits;
}

Precision Precision::from_bits(mpfr_prec_t bits) {
  const double d = static_cast<double>(bits - kGuardBits) / kLog2Of10;
  int digits = static_cast<int>(std::floor(d));
  // round-trip guard against floating noise in the division
  while (Precision{digits + 1}.bits() <= bits) ++digits;
  while (digits > 1 && Precision{digits}.bits() > bits) --digits;
  return Precision{std::max(digits, 1)};
}

// ---------------------------------------------------------------- BigReal

BigReal::BigReal(Precision p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, Precision p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_si(value_, value, kRnd);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(value_, other.bits());
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    if (bits() != other.bits()) mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, kRnd);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::from_double(double value, Precision p) {
  BigReal r(p);
  mpfr_set_d(r.value_, value, kRnd);
  return r;
}

BigReal BigReal::parse(std::string_view text, Precision p) {
  std::string buf(text);
  buf.erase(std::remove_if(buf.begin(), buf.end(), [](unsigned char c) { return std::isspace(c); }), buf.end());
  if (buf.empty()) throw DomainError("empty numeric literal");
  BigReal r(p);
  char* end = nullptr;
  mpfr_strtofr(r.value_, buf.c_str(), &end, 10, kRnd);
  if (end == nullptr || *end != '\0' || end == buf.c_str()) {
    throw DomainError("not a decimal number: '" + std::string(text) + "'");
  }
  return r;
}

long BigReal::decimal_exponent() const {
  if (is_zero()) return -(1L << 40);
  long e = 0;
  mpfr_get_d_2exp(&e, value_, kRnd);
  // |x| in [2^(e-1), 2^e)
  return static_cast<long>(std::ceil(static_cast<double>(e) / kLog2Of10));
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  if (rhs.bits() > bits()) mpfr_prec_round(value_, rhs.bits(), kRnd);
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}
BigReal& BigReal::operator-=(const BigReal& rhs) {
  if (rhs.bits() > bits()) mpfr_prec_round(value_, rhs.bits(), kRnd);
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}
BigReal& BigReal::operator*=(const BigReal& rhs) {
  if (rhs.bits() > bits()) mpfr_prec_round(value_, rhs.bits(), kRnd);
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}
BigReal& BigReal::operator/=(const BigReal& rhs) {
  if (rhs.bits() > bits()) mpfr_prec_round(value_, rhs.bits(), kRnd);
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r = at_bits(max_bits(a, b));
  mpfr_add(r.get(), a.get(), b.get(), kRnd);
  return r;
}
BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r = at_bits(max_bits(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), kRnd);
  return r;
}
BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r = at_bits(max_bits(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), kRnd);
  return r;
}
BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r = at_bits(max_bits(a, b));
  mpfr_div(r.get(), a.get(), b.get(), kRnd);
  return r;
}
BigReal operator-(const BigReal& a) {
  BigReal r(a);
  mpfr_neg(r.get(), r.get(), kRnd);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.get(), b.get());
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal abs(const BigReal& x) {
  BigReal r(x);
  mpfr_abs(r.get(), r.get(), kRnd);
  return r;
}

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw DomainError("sqrt of a negative real");
  BigReal r = at_bits(x.bits());
  mpfr_sqrt(r.get(), x.get(), kRnd);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r = at_bits(x.bits());
  mpfr_exp(r.get(), x.get(), kRnd);
  return r;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive real");
  BigReal r = at_bits(x.bits());
  mpfr_log(r.get(), x.get(), kRnd);
  return r;
}

BigReal cos(const BigReal& x) {
  BigReal r = at_bits(x.bits());
  mpfr_cos(r.get(), x.get(), kRnd);
  return r;
}

BigReal sin(const BigReal& x) {
  BigReal r = at_bits(x.bits());
  mpfr_sin(r.get(), x.get(), kRnd);
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r = at_bits(max_bits(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), kRnd);
  return r;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal r = at_bits(max_bits(x, y));
  mpfr_hypot(r.get(), x.get(), y.get(), kRnd);
  return r;
}

BigReal pi(Precision p) {
  BigReal r(p);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

BigReal pow10(long exponent, Precision p) {
  BigReal r(p);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(std::labs(exponent)), kRnd);
  if (exponent < 0) mpfr_ui_div(r.get(), 1, r.get(), kRnd);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

std::string to_string(const BigReal& x, int significant) {
  if (mpfr_nan_p(x.get())) return "nan";
  if (mpfr_inf_p(x.get())) return x.sign() > 0 ? "inf" : "-inf";
  if (x.is_zero()) return "0";
  significant = std::max(significant, 2);
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), x.get(), kRnd);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string out;
  if (digits.front() == '-') {
    out.push_back('-');
    digits.erase(digits.begin());
  }
  // trim trailing zeros but keep at least one fractional digit
  while (digits.size() > 2 && digits.back() == '0') digits.pop_back();
  out.push_back(digits[0]);
  out.push_back('.');
  out.append(digits.begin() + 1, digits.end());
  if (digits.size() == 1) out.push_back('0');
  out.push_back('e');
  out += std::to_string(static_cast<long>(exp10) - 1);
  return out;
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) {
  const auto prec = os.precision();
  return os << to_string(x, static_cast<int>(std::max<std::streamsize>(prec, 6)));
}

std::string_view to_string(BranchRule rule) {
  switch (rule) {
    case BranchRule::PrincipalUpper:
      return "PrincipalUpper";
    case BranchRule::PrincipalLower:
      return "PrincipalLower";
  }
  return "?";
}

// ------------------------------------------------------------- BigComplex

BigComplex::BigComplex(BigReal real, BigReal imag) : re(std::move(real)), im(std::move(imag)) {
  if (re.bits() < im.bits()) mpfr_prec_round(re.get(), im.bits(), kRnd);
  if (im.bits() < re.bits()) mpfr_prec_round(im.get(), re.bits(), kRnd);
}

BigComplex::BigComplex(BigReal real) : re(std::move(real)), im(re.precision()) {}

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  *this = *this * rhs;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigReal& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& rhs) {
  *this = *this / rhs;
  return *this;
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  const mpfr_prec_t bits = std::max(a.bits(), b.bits());
  BigComplex r(Precision::from_bits(bits));
  mpfr_prec_round(r.re.get(), bits, kRnd);
  mpfr_prec_round(r.im.get(), bits, kRnd);
  mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), kRnd);
  return r;
}

BigComplex operator*(const BigComplex& a, const BigReal& b) { return {a.re * b, a.im * b}; }
BigComplex operator*(const BigReal& a, const BigComplex& b) { return {a * b.re, a * b.im}; }

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  if (b.is_zero()) throw DomainError("complex division by zero");
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (abs(b.re) >= abs(b.im)) {
    const BigReal ratio = b.im / b.re;
    const BigReal denom = b.re + b.im * ratio;
    return {(a.re + a.im * ratio) / denom, (a.im - a.re * ratio) / denom};
  }
  const BigReal ratio = b.re / b.im;
  const BigReal denom = b.re * ratio + b.im;
  return {(a.re * ratio + a.im) / denom, (a.im * ratio - a.re) / denom};
}

BigComplex operator/(const BigComplex& a, const BigReal& b) { return {a.re / b, a.im / b}; }

BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }

BigComplex conj(const BigComplex& z) { return {z.re, -z.im}; }

BigReal norm(const BigComplex& z) {
  BigReal r(z.precision());
  mpfr_prec_round(r.get(), z.bits(), kRnd);
  mpfr_fmma(r.get(), z.re.get(), z.re.get(), z.im.get(), z.im.get(), kRnd);
  return r;
}

BigReal abs(const BigComplex& z) { return hypot(z.re, z.im); }

BigReal abs1(const BigComplex& z) {
  BigReal r(z.precision());
  mpfr_prec_round(r.get(), z.bits(), kRnd);
  mpfr_abs(r.get(), z.re.get(), kRnd);
  if (mpfr_sgn(z.im.get()) >= 0) {
    mpfr_add(r.get(), r.get(), z.im.get(), kRnd);
  } else {
    mpfr_sub(r.get(), r.get(), z.im.get(), kRnd);
  }
  return r;
}

namespace {

bool on_negative_axis(const BigComplex& z, const BigReal* cut_tolerance) {
  if (z.re.sign() >= 0) return false;
  if (z.im.is_zero()) return true;
  if (cut_tolerance == nullptr) return false;
  return abs(z.im) <= *cut_tolerance * abs(z.re);
}

BigComplex clog_impl(const BigComplex& z, BranchRule rule, const BigReal* cut_tolerance) {
  if (z.is_zero()) throw DomainError("clog(0)");
  BigReal modulus = abs(z);
  BigReal re = log(modulus);
  if (on_negative_axis(z, cut_tolerance)) {
    BigReal im = pi(z.precision());
    mpfr_prec_round(im.get(), z.bits(), kRnd);
    if (rule == BranchRule::PrincipalLower) im = -im;
    return {std::move(re), std::move(im)};
  }
  return {std::move(re), atan2(z.im, z.re)};
}

}  // namespace

BigReal arg(const BigComplex& z, BranchRule rule) {
  if (z.is_zero()) throw DomainError("arg(0)");
  if (on_negative_axis(z, nullptr)) {
    BigReal p = pi(z.precision());
    mpfr_prec_round(p.get(), z.bits(), kRnd);
    return rule == BranchRule::PrincipalUpper ? p : -p;
  }
  return atan2(z.im, z.re);
}

BigComplex clog(const BigComplex& z, BranchRule rule) { return clog_impl(z, rule, nullptr); }

BigComplex clog(const BigComplex& z, BranchRule rule, const BigReal& cut_tolerance) {
  return clog_impl(z, rule, &cut_tolerance);
}

BigComplex csqrt(const BigComplex& z) {
  const Precision p = z.precision();
  if (z.is_zero()) return BigComplex(p);
  const BigReal modulus = abs(z);
  const BigReal two(2, p);
  if (z.re.sign() >= 0) {
    BigReal t = sqrt((modulus + z.re) / two);
    BigReal im = z.im / (two * t);
    return {std::move(t), std::move(im)};
  }
  BigReal t = sqrt((modulus - z.re) / two);
  BigReal re = abs(z.im) / (two * t);
  if (z.im.sign() < 0) t = -t;
  return {std::move(re), std::move(t)};
}

BigComplex cexp(const BigComplex& z) {
  const BigReal scale = exp(z.re);
  BigReal s(z.precision()), c(z.precision());
  mpfr_prec_round(s.get(), z.bits(), kRnd);
  mpfr_prec_round(c.get(), z.bits(), kRnd);
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), kRnd);
  return {scale * c, scale * s};
}

BigComplex catan(const BigComplex& z) {
  const Precision p = z.precision();
  const BigComplex one(BigReal(1, p));
  const BigComplex iz(-z.im, z.re);
  const BigComplex numer = one + iz;
  const BigComplex denom = one - iz;
  if (numer.is_zero() || denom.is_zero()) throw DomainError("catan pole at z = +-i");
  const BigComplex l = clog(numer / denom, BranchRule::PrincipalUpper);
  // (1/2i) * l = (l.im - i l.re) / 2
  const BigReal two(2, p);
  return {l.im / two, -l.re / two};
}

BigComplex ccos(const BigComplex& z) {
  const BigComplex iz(-z.im, z.re);
  const BigComplex a = cexp(iz);
  const BigComplex b = cexp(-iz);
  const BigReal two(2, z.precision());
  return (a + b) / two;
}

BigComplex csin(const BigComplex& z) {
  const BigComplex iz(-z.im, z.re);
  const BigComplex d = cexp(iz) - cexp(-iz);
  const BigReal two(2, z.precision());
  // d / (2i) = (d.im - i d.re) / 2
  return {d.im / two, -d.re / two};
}

std::string to_string(const BigComplex& z, int significant) {
  return "(" + to_string(z.re, significant) + ", " + to_string(z.im, significant) + ")";
}

std::ostream& operator<<(std::ostream& os, const BigComplex& z) {
  const auto prec = os.precision();
  return os << to_string(z, static_cast<int>(std::max<std::streamsize>(prec, 6)));
}

// ------------------------------------------------------------ fused kernels

void mul_to(BigComplex& out, const BigComplex& a, const BigComplex& b, Scratch& s) {
  mpfr_mul(s.t0.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_sub(out.re.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_mul(s.t0.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.re.get(), kRnd);
  mpfr_add(out.im.get(), s.t0.get(), s.t1.get(), kRnd);
}

void add_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s) {
  mpfr_mul(s.t0.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_sub(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_add(acc.re.get(), acc.re.get(), s.t0.get(), kRnd);
  mpfr_mul(s.t0.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.re.get(), kRnd);
  mpfr_add(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_add(acc.im.get(), acc.im.get(), s.t0.get(), kRnd);
}

void sub_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s) {
  mpfr_mul(s.t0.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_sub(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_sub(acc.re.get(), acc.re.get(), s.t0.get(), kRnd);
  mpfr_mul(s.t0.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.re.get(), kRnd);
  mpfr_add(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_sub(acc.im.get(), acc.im.get(), s.t0.get(), kRnd);
}

void add_conj_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, Scratch& s) {
  // (ar - i ai)(br + i bi) = (ar br + ai bi) + i (ar bi - ai br)
  mpfr_mul(s.t0.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_add(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_add(acc.re.get(), acc.re.get(), s.t0.get(), kRnd);
  mpfr_mul(s.t0.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_mul(s.t1.get(), a.im.get(), b.re.get(), kRnd);
  mpfr_sub(s.t0.get(), s.t0.get(), s.t1.get(), kRnd);
  mpfr_add(acc.im.get(), acc.im.get(), s.t0.get(), kRnd);
}

void add_real_mul(BigComplex& acc, const BigReal& r, const BigComplex& b, Scratch& s) {
  mpfr_mul(s.t0.get(), r.get(), b.re.get(), kRnd);
  mpfr_add(acc.re.get(), acc.re.get(), s.t0.get(), kRnd);
  mpfr_mul(s.t0.get(), r.get(), b.im.get(), kRnd);
  mpfr_add(acc.im.get(), acc.im.get(), s.t0.get(), kRnd);
}

void assign(BigComplex& dst, const BigComplex& src) {
  mpfr_set(dst.re.get(), src.re.get(), kRnd);
  mpfr_set(dst.im.get(), src.im.get(), kRnd);
}

}  // namespace nhssh
