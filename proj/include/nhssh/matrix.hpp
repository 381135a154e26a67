// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "nhssh/bignum.hpp"

namespace nhssh {

/// Dense row-major complex matrix; every entry shares one precision.
class BigMatrix {
 public:
  BigMatrix(std::size_t rows, std::size_t cols, Precision p);

  static BigMatrix identity(std::size_t n, Precision p);
  static BigMatrix diagonal(const std::vector<BigComplex>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  Precision precision() const { return precision_; }

  BigComplex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const BigComplex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::vector<BigComplex>& entries() { return entries_; }
  const std::vector<BigComplex>& entries() const { return entries_; }

  /// Sub-block of the given shape starting at (row0, col0).
  BigMatrix block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const;

  BigMatrix& operator+=(const BigMatrix& rhs);
  BigMatrix& operator-=(const BigMatrix& rhs);
  BigMatrix& operator*=(const BigReal& s);

 private:
  std::size_t rows_;
  std::size_t cols_;
  Precision precision_;
  std::vector<BigComplex> entries_;
};

BigMatrix operator+(const BigMatrix& a, const BigMatrix& b);
BigMatrix operator-(const BigMatrix& a, const BigMatrix& b);
/// Parallel product (OpenMP over rows of the result).
BigMatrix operator*(const BigMatrix& a, const BigMatrix& b);

BigMatrix transpose(const BigMatrix& a);
BigMatrix adjoint(const BigMatrix& a);

/// max_ij |a_ij| (modulus)
BigReal max_norm(const BigMatrix& a);
/// max_j sum_i |a_ij|
BigReal one_norm(const BigMatrix& a);
BigReal frobenius_norm(const BigMatrix& a);
/// max_ij |a_ij - b_ij|
BigReal max_abs_diff(const BigMatrix& a, const BigMatrix& b);
BigComplex trace(const BigMatrix& a);

/// y = A x
std::vector<BigComplex> apply(const BigMatrix& a, const std::vector<BigComplex>& x);
BigReal vector_norm(const std::vector<BigComplex>& x);

namespace kernels {

/// Reference triple loop, single threaded. Kept as the oracle for the parallel kernel.
BigMatrix matmul_serial(const BigMatrix& a, const BigMatrix& b);
/// Row-parallel product; results are bit-identical to matmul_serial because every
/// entry is accumulated in the same order regardless of thread count.
BigMatrix matmul_parallel(const BigMatrix& a, const BigMatrix& b);

}  // namespace kernels

}  // namespace nhssh
