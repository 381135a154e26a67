// SPDX-License-Identifier: Apache-2.0
//
// Gaussian entanglement Hamiltonian rho_A = exp(-sum c+_i k_ij c_j) / Z with
// k^A = log[(C_A^-1 - I)^T], its spectra, entropies and charge-sector signs.
#pragma once

#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/correlation.hpp"
#include "nhssh/linalg.hpp"
#include "nhssh/matrix.hpp"

namespace nhssh {

struct KernelOptions {
  LinalgOptions linalg;
  /// Compute ||exp((k^A)^T) - (C_A^-1 - I)||; the matrix exponential is the costly part.
  bool exp_check = true;
};

struct EntanglementKernel {
  BigMatrix kA;
  BranchRule branch = BranchRule::PrincipalUpper;
  ModelParams params;
  /// ||exp((k^A)^T) - M||_max / max(1, ||M||_max) with M = C_A^-1 - I; zero when not computed.
  BigReal residual;
  bool residual_computed = false;
  /// ||C_A C_A^-1 - I||_max
  BigReal inverse_residual;
  /// cond(V) of the eigenvectors of M
  BigReal condition;
  /// max_j ||M v_j - lambda_j v_j||
  BigReal eigen_residual;
  /// ||M||_max
  BigReal m_norm;
  /// Eigenvalues of M = C_A^-1 - I, sorted.
  std::vector<BigComplex> m_eigenvalues;
};

/// Throws SingularMatrix / NearDefective from the underlying linear algebra.
EntanglementKernel eh_kernel(const CorrelationMatrix& ca, BranchRule branch = BranchRule::PrincipalUpper,
                             const KernelOptions& opts = {});

struct SpectralData {
  /// Eigenvalues of C_A, sorted by (re, im).
  std::vector<BigComplex> nu;
  /// Eigenvalues of k^A, sorted by (re, im).
  std::vector<BigComplex> eps;
  BranchRule branch = BranchRule::PrincipalUpper;
  /// max over matched pairs of |eps - clog((1 - nu)/nu)| and the largest tolerance used.
  BigReal pairing_error;
  BigReal pairing_tolerance;
  bool pairing_checked = false;
};

/// Tolerance for matching eps_j against clog(lambda_j): the eigenvalue lambda_j of M
/// carries an absolute error of order 10^-P ||M||, i.e. a relative error ||M|| / |lambda_j|
/// in units of 10^-P. Returns max(10^-(P/2), 10^-(P-20) ||M|| / |lambda|).
BigReal pairing_tolerance(const BigComplex& lambda, const BigReal& m_norm, Precision p);

/// Throws PairingMismatch when eps and clog((1 - nu)/nu) differ as multisets.
SpectralData spectra(const CorrelationMatrix& ca, const EntanglementKernel& kernel,
                     const LinalgOptions& opts = {});

/// clog((1 - nu)/nu) with the cut tolerance used throughout: negative reals map to +i pi
/// under PrincipalUpper even when rounding leaves a tiny imaginary part.
BigComplex single_particle_energy(const BigComplex& nu, BranchRule branch);

struct Entropies {
  BigComplex von_neumann;
  /// S^(n) for each requested order, same order as requested.
  std::vector<int> orders;
  std::vector<BigComplex> renyi;
};

/// DomainError when some nu is 0 or 1 to working precision.
Entropies entropies(const std::vector<BigComplex>& nu, const std::vector<int>& orders,
                    BranchRule branch = BranchRule::PrincipalUpper);

/// All 2^n many-body eigenvalues prod_j [n_j nu_j + (1 - n_j)(1 - nu_j)], indexed by the
/// occupation bit pattern.
std::vector<BigComplex> gaussian_many_body_spectrum(const std::vector<BigComplex>& nu);

struct ChargeSectorReport {
  int q = 0;
  int positive = 0;
  int negative = 0;
  /// eigenvalues with |Im| above 10^-(P/4) |lambda| have no sign
  int complex = 0;
  /// (-1)^(q - <Q_A>) when <Q_A> is an integer, else 0.
  int rule_sign = 0;
  /// every real eigenvalue in the sector has rule_sign
  bool rule_holds = false;
  /// (-1)^(q - b) with b = number of retained-or-discarded modes with real nu > 1
  int parity_sign = 0;
  bool parity_holds = false;
};

struct ChargeSectorAnalysis {
  std::vector<ChargeSectorReport> sectors;
  BigReal mean_charge;
  /// <Q_A> is an integer within 10^-(P/4)
  bool mean_charge_integer = false;
  int modes_above_one = 0;
  int retained_modes = 0;
  /// sum over discarded modes of |minor factor| / |dominant factor|
  BigReal truncation_bound;
  /// true when every sector satisfies the (-1)^(q - <Q_A>) rule
  bool rule_consistent = false;
};

/// Enumerates the 2^max_modes products of the modes with smallest |Re eps|; the other
/// modes are frozen at their dominant factor. max_modes <= 20.
ChargeSectorAnalysis charge_sector_signs(const SpectralData& spectra, int max_modes);

}  // namespace nhssh
