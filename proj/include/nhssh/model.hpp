// SPDX-License-Identifier: Apache-2.0
//
// The non-Hermitian SSH chain on L = 2N sites:
//
//   H = sum_j ( -w c+_{2j} c_{2j+1} - v c+_{2j-1} c_{2j} + h.c. )
//       + iu sum_j ( n_{2j} - n_{2j+1} ),     c_{j+L} = e^{i delta} c_j.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/matrix.hpp"

namespace nhssh {

struct ModelParams {
  BigReal u;
  BigReal v;
  BigReal w;
  BigReal delta;
  int L = 0;
  int ell = 0;
  Precision precision;

  /// Physics constants are decimal strings parsed at precision p.
  static ModelParams from_strings(std::string_view u, std::string_view v, std::string_view w, std::string_view delta,
                                  int L, int ell, Precision p);

  int cells() const { return L / 2; }
};

/// ConfigError unless u >= 0, v, w > 0, 0 <= delta < 2 pi, L even and >= 2.
/// With check_subsystem, also requires ell even and 0 < ell <= L.
void validate(const ModelParams& params, bool check_subsystem = true);

enum class Phase { PTBrokenComplex, PTUnbrokenTopological, PTUnbrokenTrivial, CriticalPlus, CriticalMinus };

std::string_view to_string(Phase phase);
bool is_critical(Phase phase);

/// Compares w - v against +-u with a relative tolerance of 10^-(P-10).
Phase classify_phase(const ModelParams& params);

/// [[iu, eta], [conj(eta), -iu]] with eta = -w - v e^{-ik}.
BigMatrix bloch_matrix(const ModelParams& params, const BigReal& k);

/// eta_k = -w - v e^{-ik}
BigComplex eta(const ModelParams& params, const BigReal& k);

/// Single-particle energy E_k = sqrt(|eta_k|^2 - u^2) (principal root); bands are +-E_k.
BigComplex band_energy(const ModelParams& params, const BigReal& k);

struct CriticalDispersion {
  BigReal upper;
  BigReal lower;
};

/// +-sqrt(2 v w (1 + cos k)). PhaseError unless the parameters are critical.
CriticalDispersion dispersion_critical(const ModelParams& params, const BigReal& k);

/// sqrt(v w)
BigReal speed_of_sound(const ModelParams& params);

/// k_m = (2 pi m + delta) / N, m = 0 .. N-1.
std::vector<BigReal> momentum_grid(const ModelParams& params);

/// PhaseError for critical parameters with delta = 0 (the Bloch matrix at k = pi is a
/// Jordan block) and for the PT-broken phase, which has no real ground state.
void require_ground_state(const ModelParams& params);

}  // namespace nhssh
