// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra at arbitrary precision.
//
// The eigensolver follows the classical route: diagonal balancing by powers of
// two, Householder reduction to upper Hessenberg form, single-shift implicit QR
// with Wilkinson shifts and deflation for the eigenvalues, and inverse
// iteration on the Hessenberg matrix for the eigenvectors.
#pragma once

#include <cstddef>
#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/matrix.hpp"

namespace nhssh {

/// Tunables surfaced in run manifests. Thresholds scale with the working precision P.
struct LinalgOptions {
  /// NoConvergence after sweep_factor * n QR iterations in total.
  int sweep_factor = 100;
  /// NearDefective when cond(V) > 10^(P * condition_cap_fraction).
  double condition_cap_fraction = 0.25;
  /// SingularMatrix when a pivot is below 10^(-P + singular_margin_digits) * max|M_ij|.
  int singular_margin_digits = 20;
  /// Eigenvalues with re < 0 and |im| <= 10^(-P * cut_fraction) |re| sit on the log cut.
  double cut_fraction = 0.25;
  bool balance = true;
};

// ------------------------------------------------------------------ LU

struct LuFactors {
  BigMatrix lu;                     // unit-lower L below the diagonal, U on and above
  std::vector<std::size_t> pivots;  // row swapped with row k at step k
};

/// Partial-pivoting LU. Throws SingularMatrix on a pivot below the relative threshold.
LuFactors lu_factor(const BigMatrix& m, const LinalgOptions& opts = {});
std::vector<BigComplex> lu_solve(const LuFactors& f, std::vector<BigComplex> rhs);

struct InverseResult {
  BigMatrix inverse;
  /// max_ij |(M M^-1 - I)_ij|
  BigReal residual;
};

InverseResult lu_invert(const BigMatrix& m, const LinalgOptions& opts = {});

// ---------------------------------------------------------- eigenvalues

struct EigenDecomposition {
  /// Sorted by ascending real part, ties by ascending imaginary part.
  std::vector<BigComplex> eigenvalues;
  /// Column j is the unit-norm right eigenvector of eigenvalues[j].
  BigMatrix right_eigenvectors;
  BigMatrix inverse_eigenvectors;
  /// ||M v_j - lambda_j v_j|| / ||v_j|| per pair.
  std::vector<BigReal> residuals;
  BigReal residual_bound;
  /// ||V||_1 ||V^-1||_1
  BigReal condition_estimate;
  int qr_iterations = 0;
};

EigenDecomposition eig_general(const BigMatrix& m, const LinalgOptions& opts = {});

/// Eigenvalues only (no eigenvectors), same ordering as eig_general.
std::vector<BigComplex> eigenvalues(const BigMatrix& m, const LinalgOptions& opts = {});

/// Lexicographic (re, im) ordering used for every reported spectrum.
bool spectrum_less(const BigComplex& a, const BigComplex& b);
void sort_spectrum(std::vector<BigComplex>& values);

// ------------------------------------------------------ matrix functions

struct MatrixLogResult {
  BigMatrix log;
  EigenDecomposition decomposition;
  /// clog(lambda_j) in the order of decomposition.eigenvalues.
  std::vector<BigComplex> log_eigenvalues;
  /// max_j |cexp(clog(lambda_j)) - lambda_j| / |lambda_j|
  BigReal roundtrip_residual;
};

/// log M = V diag(clog(lambda_j)) V^-1. Throws NearDefective when cond(V) exceeds the cap.
MatrixLogResult matrix_log(const BigMatrix& m, BranchRule branch, const LinalgOptions& opts = {});
MatrixLogResult matrix_log(EigenDecomposition decomposition, BranchRule branch, const LinalgOptions& opts = {});

/// Taylor series with scaling and squaring (Paterson-Stockmeyer evaluation);
/// truncation chosen so the tail bound is below 2^-bits < 10^-P.
BigMatrix matrix_exp(const BigMatrix& m);

/// Lower-level pieces, exposed for tests.
namespace detail {

struct Hessenberg {
  BigMatrix h;
  /// Householder vectors v_k (acting on rows k+1..n-1) and their scale 2/||v_k||^2.
  std::vector<std::vector<BigComplex>> reflectors;
  std::vector<BigReal> scales;
};

/// Scales rows/columns by powers of two; returns the diagonal D with B = D^-1 M D.
std::vector<long> balance(BigMatrix& m);
Hessenberg hessenberg(BigMatrix m);
/// Eigenvalues of an upper Hessenberg matrix; h is overwritten.
std::vector<BigComplex> hessenberg_qr(BigMatrix h, int sweep_factor, int* iterations = nullptr);

}  // namespace detail

}  // namespace nhssh
