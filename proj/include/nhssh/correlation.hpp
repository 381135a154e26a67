// SPDX-License-Identifier: Apache-2.0
//
// Two-point function C_ij = <L| c+_i c_j |R> of the left-right ground state,
// assembled from its 2x2 momentum-space symbol G(k):
//
//   C_{2j+a, 2l+b} = (1/N) sum_k e^{-ik(j-l)} G(k)_ab.
#pragma once

#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/matrix.hpp"
#include "nhssh/model.hpp"

namespace nhssh {

struct SymbolG {
  BigReal k;
  BigMatrix entries;  // 2x2
  BigComplex eta;
  /// xi_k itself (half of the angle 2 xi_k).
  BigComplex xi;
};

struct SymbolOptions {
  /// Compare the closed form against eigenvector_symbol and throw on disagreement.
  bool cross_check = true;
};

/// Closed form (1/2)[[1 - cos 2xi, -s sin 2xi], [-sin 2xi / s, 1 + cos 2xi]] with
/// 2 xi = atan(|eta| / (iu)) and s = conj(eta)/|eta|, the square root of conj(eta)/eta
/// that matches the lower-band projector. u = 0 uses the limit 2 xi = pi/2.
/// Throws BranchInconsistency when the eigenvector construction disagrees.
SymbolG symbol(const ModelParams& params, const BigReal& k, const SymbolOptions& opts = {});

/// G_ab = l_a r_b from the lower-band right eigenvector r of the Bloch matrix and the
/// matching left eigenvector l (a row of V^-1, so l.r = 1). Bands are ordered by real
/// part. Throws DefectivePoint when the eigenvectors are numerically collinear.
SymbolG eigenvector_symbol(const ModelParams& params, const BigReal& k);

struct CorrelationMatrix {
  BigMatrix matrix;
  ModelParams params;
  bool restricted = false;
};

struct CorrelationOptions {
  SymbolOptions symbol;
  /// The k grid is cut into this many contiguous chunks; partial sums are combined in
  /// chunk order, so the result does not depend on the number of threads.
  int chunks = 32;
};

/// Full L x L matrix.
CorrelationMatrix build_correlation(const ModelParams& params, const CorrelationOptions& opts = {});

/// ell x ell block on sites 0 .. ell-1, computed without forming the full matrix.
CorrelationMatrix build_restricted_correlation(const ModelParams& params, const CorrelationOptions& opts = {});

/// Top-left ell x ell block.
CorrelationMatrix restrict(const CorrelationMatrix& c, int ell);

/// Blocks B_d = (1/N) sum_k e^{-ikd} G(k) for d = d_min .. d_max, laid out as
/// 4 consecutive entries (00, 01, 10, 11) per offset.
namespace kernels {

std::vector<BigComplex> momentum_sum_serial(const std::vector<SymbolG>& symbols, int d_min, int d_max);
std::vector<BigComplex> momentum_sum_parallel(const std::vector<SymbolG>& symbols, int d_min, int d_max, int chunks);

}  // namespace kernels

/// Symbols on the full momentum grid (parallel over k).
std::vector<SymbolG> symbols_on_grid(const ModelParams& params, const SymbolOptions& opts = {});

}  // namespace nhssh
