// SPDX-License-Identifier: Apache-2.0
#include "nhssh/matrix.hpp"

#include <stdexcept>

#include "nhssh/parallel.hpp"

namespace nhssh {

BigMatrix::BigMatrix(std::size_t rows, std::size_t cols, Precision p)
    : rows_(rows), cols_(cols), precision_(p), entries_(rows * cols, BigComplex(p)) {}

BigMatrix BigMatrix::identity(std::size_t n, Precision p) {
  BigMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m(i, i).re = BigReal(1, p);
  return m;
}

BigMatrix BigMatrix::diagonal(const std::vector<BigComplex>& diag) {
  if (diag.empty()) throw std::invalid_argument("diagonal: empty");
  BigMatrix m(diag.size(), diag.size(), diag.front().precision());
  for (std::size_t i = 0; i < diag.size(); ++i) assign(m(i, i), diag[i]);
  return m;
}

BigMatrix BigMatrix::block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const {
  if (row0 + rows > rows_ || col0 + cols > cols_) throw std::out_of_range("block outside matrix");
  BigMatrix out(rows, cols, precision_);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) assign(out(i, j), (*this)(row0 + i, col0 + j));
  return out;
}

BigMatrix& BigMatrix::operator+=(const BigMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("shape mismatch in +=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

BigMatrix& BigMatrix::operator-=(const BigMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("shape mismatch in -=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

BigMatrix& BigMatrix::operator*=(const BigReal& s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

BigMatrix operator+(const BigMatrix& a, const BigMatrix& b) {
  BigMatrix r(a);
  r += b;
  return r;
}

BigMatrix operator-(const BigMatrix& a, const BigMatrix& b) {
  BigMatrix r(a);
  r -= b;
  return r;
}

BigMatrix operator*(const BigMatrix& a, const BigMatrix& b) { return kernels::matmul_parallel(a, b); }

BigMatrix transpose(const BigMatrix& a) {
  BigMatrix t(a.cols(), a.rows(), a.precision());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) assign(t(j, i), a(i, j));
  return t;
}

BigMatrix adjoint(const BigMatrix& a) {
  BigMatrix t = transpose(a);
  for (auto& e : t.entries()) mpfr_neg(e.im.get(), e.im.get(), MPFR_RNDN);
  return t;
}

BigReal max_norm(const BigMatrix& a) {
  BigReal best(a.precision());
  for (const auto& e : a.entries()) {
    BigReal m = abs(e);
    if (m > best) best = std::move(m);
  }
  return best;
}

BigReal one_norm(const BigMatrix& a) {
  BigReal best(a.precision());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    BigReal s(a.precision());
    for (std::size_t i = 0; i < a.rows(); ++i) s += abs(a(i, j));
    if (s > best) best = std::move(s);
  }
  return best;
}

BigReal frobenius_norm(const BigMatrix& a) {
  BigReal s(a.precision());
  for (const auto& e : a.entries()) s += norm(e);
  return sqrt(s);
}

BigReal max_abs_diff(const BigMatrix& a, const BigMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch in max_abs_diff");
  BigReal best(a.precision());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    BigReal m = abs(a.entries()[k] - b.entries()[k]);
    if (m > best) best = std::move(m);
  }
  return best;
}

BigComplex trace(const BigMatrix& a) {
  BigComplex t(a.precision());
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

std::vector<BigComplex> apply(const BigMatrix& a, const std::vector<BigComplex>& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("apply: size mismatch");
  std::vector<BigComplex> y(a.rows(), BigComplex(a.precision()));
  Scratch s(a.precision());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) add_mul(y[i], a(i, j), x[j], s);
  return y;
}

BigReal vector_norm(const std::vector<BigComplex>& x) {
  if (x.empty()) throw std::invalid_argument("vector_norm: empty");
  BigReal s(x.front().precision());
  for (const auto& e : x) s += norm(e);
  return sqrt(s);
}

namespace kernels {

namespace {

void check_shapes(const BigMatrix& a, const BigMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
}

// One row of the product; entry (i, j) accumulates k = 0..n-1 in order.
void product_row(const BigMatrix& a, const BigMatrix& b, BigMatrix& c, std::size_t i, Scratch& s) {
  const std::size_t n = a.cols();
  for (std::size_t k = 0; k < n; ++k) {
    const BigComplex& aik = a(i, k);
    if (aik.is_zero()) continue;
    for (std::size_t j = 0; j < b.cols(); ++j) add_mul(c(i, j), aik, b(k, j), s);
  }
}

}  // namespace

BigMatrix matmul_serial(const BigMatrix& a, const BigMatrix& b) {
  check_shapes(a, b);
  BigMatrix c(a.rows(), b.cols(), a.precision());
  Scratch s(a.precision());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero()) continue;
        add_mul(c(i, j), a(i, k), b(k, j), s);
      }
    }
  }
  return c;
}

BigMatrix matmul_parallel(const BigMatrix& a, const BigMatrix& b) {
  check_shapes(a, b);
  BigMatrix c(a.rows(), b.cols(), a.precision());
  const auto rows = static_cast<long>(a.rows());
#pragma omp parallel
  {
    Scratch s(a.precision());
#pragma omp for schedule(dynamic, 1)
    for (long i = 0; i < rows; ++i) product_row(a, b, c, static_cast<std::size_t>(i), s);
  }
  return c;
}

}  // namespace kernels

}  // namespace nhssh
