// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

struct ExpPlan {
  long scaling = 0;   // A is divided by 2^scaling
  int degree = 0;     // Taylor polynomial degree m
  int block = 1;      // Paterson-Stockmeyer block size q
  long cost = 0;      // matrix products
};

// log2 of the tail bound theta^(m+1)/(m+1)! / (1 - theta/(m+2)), theta < 1.
double log2_tail(double log2_theta, int m) {
  const double theta = std::exp2(log2_theta);
  const double head = (m + 1) * log2_theta - std::lgamma(m + 2.0) / std::log(2.0);
  return head - std::log2(1.0 - theta / (m + 2));
}

ExpPlan plan_exp(const BigReal& norm, mpfr_prec_t bits) {
  ExpPlan best;
  best.cost = std::numeric_limits<long>::max();
  if (norm.is_zero()) return ExpPlan{0, 0, 1, 0};
  long e = 0;
  const double mant = mpfr_get_d_2exp(&e, norm.get(), MPFR_RNDN);  // norm = mant 2^e, mant in [0.5, 1)
  const double log2_norm = std::log2(mant) + static_cast<double>(e);
  const long base = std::max<long>(0, e);
  for (long extra = 1; extra <= 64; ++extra) {
    const long s = base + extra;
    const double log2_theta = log2_norm - static_cast<double>(s);
    int m = 1;
    while (log2_tail(log2_theta, m) > -static_cast<double>(bits)) ++m;
    const int q = std::max(1, static_cast<int>(std::ceil(std::sqrt(m + 1.0))));
    const long blocks = (m + q) / q;
    const long cost = s + (q - 1) + (blocks - 1);
    if (cost < best.cost) best = ExpPlan{s, m, q, cost};
  }
  return best;
}

}  // namespace

BigMatrix matrix_exp(const BigMatrix& m) {
  if (!m.square()) throw std::invalid_argument("matrix_exp: matrix not square");
  const std::size_t n = m.rows();
  const Precision p = m.precision();
  const ExpPlan plan = plan_exp(one_norm(m), p.bits());
  if (plan.degree == 0) return BigMatrix::identity(n, p);

  BigMatrix a = m;
  for (auto& e : a.entries()) {
    mpfr_div_2si(e.re.get(), e.re.get(), plan.scaling, MPFR_RNDN);
    mpfr_div_2si(e.im.get(), e.im.get(), plan.scaling, MPFR_RNDN);
  }

  // powers[i] = A^i, i = 0..q
  std::vector<BigMatrix> powers;
  powers.push_back(BigMatrix::identity(n, p));
  powers.push_back(a);
  for (int i = 2; i <= plan.block; ++i) powers.push_back(powers.back() * a);

  std::vector<BigReal> coeff;
  coeff.emplace_back(1, p);
  for (int i = 1; i <= plan.degree; ++i) coeff.push_back(coeff.back() / BigReal(i, p));

  const int q = plan.block;
  const int blocks = (plan.degree + q) / q;
  auto block_poly = [&](int j) {
    BigMatrix b(n, n, p);
    Scratch s(p);
    for (int i = 0; i < q; ++i) {
      const int idx = j * q + i;
      if (idx > plan.degree) break;
      for (std::size_t e = 0; e < b.entries().size(); ++e) add_real_mul(b.entries()[e], coeff[idx], powers[i].entries()[e], s);
    }
    return b;
  };

  BigMatrix result = block_poly(blocks - 1);
  for (int j = blocks - 2; j >= 0; --j) {
    result = result * powers[q];
    result += block_poly(j);
  }
  for (long k = 0; k < plan.scaling; ++k) result = result * result;
  return result;
}

MatrixLogResult matrix_log(EigenDecomposition dec, BranchRule branch, const LinalgOptions& opts) {
  const std::size_t n = dec.eigenvalues.size();
  const Precision p = dec.right_eigenvectors.precision();
  const long cap_exp = static_cast<long>(std::ceil(p.digits * opts.condition_cap_fraction));
  if (dec.condition_estimate > pow10(cap_exp, p)) {
    throw NearDefective("eigenvector condition estimate " + to_string(dec.condition_estimate, 6) +
                        " exceeds 10^" + std::to_string(cap_exp) +
                        "; the matrix is close to defective (raise the twist or the precision)");
  }
  const BigReal cut = pow10(-static_cast<long>(std::ceil(p.digits * opts.cut_fraction)), p);
  std::vector<BigComplex> logs;
  logs.reserve(n);
  BigReal roundtrip(p);
  for (const auto& lambda : dec.eigenvalues) {
    BigComplex l = clog(lambda, branch, cut);
    const BigReal r = abs(cexp(l) - lambda) / abs(lambda);
    if (r > roundtrip) roundtrip = r;
    logs.push_back(std::move(l));
  }

  const BigMatrix& v = dec.right_eigenvectors;
  BigMatrix scaled(n, n, p);
  {
    Scratch s(p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mul_to(scaled(i, j), v(i, j), logs[j], s);
  }
  BigMatrix log = scaled * dec.inverse_eigenvectors;
  return MatrixLogResult{std::move(log), std::move(dec), std::move(logs), std::move(roundtrip)};
}

MatrixLogResult matrix_log(const BigMatrix& m, BranchRule branch, const LinalgOptions& opts) {
  return matrix_log(eig_general(m, opts), branch, opts);
}

}  // namespace nhssh
