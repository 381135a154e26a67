// SPDX-License-Identifier: Apache-2.0
//
// Brute-force many-body reference for small chains. Basis states are bit strings
// (bit j = occupation of site j); c_j carries the Jordan-Wigner sign
// (-1)^(number of occupied sites < j). The Hamiltonian conserves the particle number,
// so it is stored as dense blocks, one per charge sector.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/matrix.hpp"
#include "nhssh/model.hpp"

namespace nhssh {

inline constexpr int kMaxEdSites = 12;

struct FockSector {
  int charge = 0;
  /// basis states of this sector in increasing order
  std::vector<std::uint32_t> states;
  BigMatrix block;
};

struct FockOperator {
  int L = 0;
  std::vector<FockSector> sectors;  // indexed by charge 0..L

  /// Dense 2^L matrix (for small L only).
  BigMatrix to_dense() const;
};

/// SizeError for L > 12.
FockOperator many_body_hamiltonian(const ModelParams& params);

/// Dense matrix of c_j on L sites.
BigMatrix annihilation_operator(int L, int j, Precision p);

/// Total particle number as a dense diagonal matrix.
BigMatrix number_operator(int L, Precision p);

struct GroundState {
  BigComplex energy;
  int charge = 0;
  /// nonzero amplitudes live in one sector; indices into FockSector::states
  std::vector<std::uint32_t> states;
  std::vector<BigComplex> right;
  std::vector<BigComplex> left;
  /// smallest |E - E_gs| over the rest of the spectrum
  BigReal gap;
  /// max(||(H - E) r||, ||(H^T - E) l||)
  BigReal residual;
  /// every many-body eigenvalue, sorted
  std::vector<BigComplex> spectrum;
};

/// Right and left eigenvectors at the eigenvalue with minimal real part, normalized so
/// that l.r = 1. ComplexSpectrum if that eigenvalue is not real to 10^-(P/4);
/// DegenerateGround if the gap is below 10^-(P/4).
GroundState left_right_ground(const FockOperator& h);

/// rho_A[a, a'] = sum_b r_{a + 2^ell b} l_{a' + 2^ell b}, sites 0..ell-1 kept.
BigMatrix reduced_density_matrix(const GroundState& gs, int L, int ell);

/// <L| c+_i c_j |R> for all i, j.
BigMatrix ed_correlation(const GroundState& gs, int L);

struct OracleReport {
  std::string quantity;
  std::vector<std::string> gaussian;
  std::vector<std::string> ed;
  BigReal discrepancy;
  BigReal threshold;
  bool pass = false;
  /// false when the comparison does not apply to these parameters (pass is then true)
  bool applicable = true;
};

/// Correlation entries, rho_A spectrum, entropy and charge-sector signs, Gaussian vs ED,
/// plus the (-1)^(q - <Q_A>) sign rule, which only applies when every occupation nu is
/// real and outside [0, 1]. Requires L <= 12 and ell <= 6.
std::vector<OracleReport> compare_all(const ModelParams& params, int ell);

}  // namespace nhssh
