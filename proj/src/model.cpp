// SPDX-License-Identifier: Apache-2.0
#include "nhssh/model.hpp"

#include <string>

#include "nhssh/errors.hpp"

namespace nhssh {

ModelParams ModelParams::from_strings(std::string_view u, std::string_view v, std::string_view w,
                                      std::string_view delta, int L, int ell, Precision p) {
  auto field = [&](std::string_view name, std::string_view text) {
    try {
      return BigReal::parse(text, p);
    } catch (const DomainError&) {
      throw ConfigError("parameter " + std::string(name) + ": '" + std::string(text) + "' is not a decimal number");
    }
  };
  return ModelParams{field("u", u), field("v", v), field("w", w), field("delta", delta), L, ell, p};
}

void validate(const ModelParams& params, bool check_subsystem) {
  const Precision p = params.precision;
  if (params.u.sign() < 0) throw ConfigError("u must be >= 0");
  if (params.v.sign() <= 0) throw ConfigError("v must be > 0");
  if (params.w.sign() <= 0) throw ConfigError("w must be > 0");
  BigReal two_pi = pi(p);
  mpfr_mul_2si(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
  if (params.delta.sign() < 0 || params.delta >= two_pi) throw ConfigError("delta must lie in [0, 2 pi)");
  if (params.L < 2 || params.L % 2 != 0) throw ConfigError("L must be even and >= 2, got " + std::to_string(params.L));
  if (!check_subsystem) return;
  if (params.ell % 2 != 0) {
    throw ConfigError("ell must be even (whole unit cells), got " + std::to_string(params.ell));
  }
  if (params.ell <= 0 || params.ell > params.L) {
    throw ConfigError("ell must satisfy 0 < ell <= L, got ell=" + std::to_string(params.ell) +
                      " L=" + std::to_string(params.L));
  }
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::PTBrokenComplex: return "PTBrokenComplex";
    case Phase::PTUnbrokenTopological: return "PTUnbrokenTopological";
    case Phase::PTUnbrokenTrivial: return "PTUnbrokenTrivial";
    case Phase::CriticalPlus: return "CriticalPlus";
    case Phase::CriticalMinus: return "CriticalMinus";
  }
  return "?";
}

bool is_critical(Phase phase) { return phase == Phase::CriticalPlus || phase == Phase::CriticalMinus; }

Phase classify_phase(const ModelParams& params) {
  const Precision p = params.precision;
  const BigReal scale = max(params.u, max(params.v, params.w));
  const BigReal tol = pow10(-(p.digits - 10), p) * scale;
  const BigReal d = params.w - params.v;
  if (abs(d - params.u) <= tol) return Phase::CriticalPlus;
  if (abs(d + params.u) <= tol) return Phase::CriticalMinus;
  if (d > params.u) return Phase::PTUnbrokenTrivial;
  if (d < -params.u) return Phase::PTUnbrokenTopological;
  return Phase::PTBrokenComplex;
}

BigComplex eta(const ModelParams& params, const BigReal& k) {
  // -w - v (cos k - i sin k)
  return BigComplex(-params.w - params.v * cos(k), params.v * sin(k));
}

BigMatrix bloch_matrix(const ModelParams& params, const BigReal& k) {
  const Precision p = params.precision;
  BigMatrix h(2, 2, p);
  const BigComplex e = eta(params, k);
  h(0, 0) = BigComplex(BigReal(p), params.u);
  h(0, 1) = e;
  h(1, 0) = conj(e);
  h(1, 1) = BigComplex(BigReal(p), -params.u);
  return h;
}

BigComplex band_energy(const ModelParams& params, const BigReal& k) {
  return csqrt(BigComplex(norm(eta(params, k)) - params.u * params.u));
}

CriticalDispersion dispersion_critical(const ModelParams& params, const BigReal& k) {
  if (!is_critical(classify_phase(params))) {
    throw PhaseError("dispersion_critical requires w - v = +-u, got phase " +
                     std::string(to_string(classify_phase(params))));
  }
  const Precision p = params.precision;
  BigReal r = BigReal(2, p) * params.v * params.w * (BigReal(1, p) + cos(k));
  if (r.sign() < 0) r = BigReal(p);  // 1 + cos k rounds below zero only at k = pi
  r = sqrt(r);
  return {r, -r};
}

BigReal speed_of_sound(const ModelParams& params) { return sqrt(params.v * params.w); }

std::vector<BigReal> momentum_grid(const ModelParams& params) {
  const Precision p = params.precision;
  const int n = params.cells();
  BigReal two_pi = pi(p);
  mpfr_mul_2si(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
  const BigReal cells(n, p);
  std::vector<BigReal> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) grid.push_back((two_pi * BigReal(m, p) + params.delta) / cells);
  return grid;
}

void require_ground_state(const ModelParams& params) {
  const Phase phase = classify_phase(params);
  if (phase == Phase::PTBrokenComplex) {
    throw PhaseError("parameters are in the PT-broken phase (|w - v| < u): the spectrum is complex and the "
                     "left-right ground state is undefined");
  }
  if (is_critical(phase) && params.delta.is_zero()) {
    throw PhaseError("critical parameters need a nonzero twist delta: at k = pi the Bloch matrix is a Jordan "
                     "block and the ground state is not defined on the untwisted grid");
  }
}

}  // namespace nhssh
