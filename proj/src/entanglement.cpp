// SPDX-License-Identifier: Apache-2.0
#include "nhssh/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nhssh/errors.hpp"

namespace nhssh {

namespace {

BigReal cut_tolerance(Precision p) { return pow10(-(p.digits / 4), p); }

// sign of a value that should be real; 0 when it is not real to within 10^-(P/4) |z|
int real_sign(const BigComplex& z) {
  const Precision p = z.precision();
  if (abs(z.im) > cut_tolerance(p) * abs(z)) return 0;
  return z.re.sign() > 0 ? 1 : (z.re.sign() < 0 ? -1 : 0);
}

bool is_real(const BigComplex& z) {
  return abs(z.im) <= cut_tolerance(z.precision()) * max(BigReal(1, z.precision()), abs(z));
}

}  // namespace

EntanglementKernel eh_kernel(const CorrelationMatrix& ca, BranchRule branch, const KernelOptions& opts) {
  const BigMatrix& c = ca.matrix;
  const Precision p = c.precision();
  const std::size_t n = c.rows();
  InverseResult inv = lu_invert(c, opts.linalg);
  BigMatrix m = std::move(inv.inverse);
  for (std::size_t i = 0; i < n; ++i) m(i, i).re -= BigReal(1, p);

  MatrixLogResult log = matrix_log(m, branch, opts.linalg);
  EntanglementKernel out{transpose(log.log),
                         branch,
                         ca.params,
                         BigReal(p),
                         false,
                         std::move(inv.residual),
                         log.decomposition.condition_estimate,
                         log.decomposition.residual_bound,
                         max_norm(m),
                         log.decomposition.eigenvalues};
  if (opts.exp_check) {
    const BigMatrix e = matrix_exp(log.log);
    out.residual = max_abs_diff(e, m) / max(BigReal(1, p), out.m_norm);
    out.residual_computed = true;
  }
  return out;
}

BigComplex single_particle_energy(const BigComplex& nu, BranchRule branch) {
  const Precision p = nu.precision();
  const BigComplex one(BigReal(1, p));
  return clog((one - nu) / nu, branch, cut_tolerance(p));
}

BigReal pairing_tolerance(const BigComplex& lambda, const BigReal& m_norm, Precision p) {
  const BigReal floor = pow10(-(p.digits / 2), p);
  const BigReal rel = pow10(-(p.digits - 20), p) * m_norm / abs(lambda);
  return max(floor, rel);
}

SpectralData spectra(const CorrelationMatrix& ca, const EntanglementKernel& kernel, const LinalgOptions& opts) {
  const Precision p = ca.matrix.precision();
  SpectralData out{eigenvalues(ca.matrix, opts), eigenvalues(kernel.kA, opts), kernel.branch, BigReal(p), BigReal(p),
                   true};
  const BigComplex one(BigReal(1, p));
  std::vector<bool> used(out.eps.size(), false);
  for (const auto& nu : out.nu) {
    const BigComplex lambda = (one - nu) / nu;
    const BigComplex predicted = single_particle_energy(nu, kernel.branch);
    const BigReal tol = pairing_tolerance(lambda, kernel.m_norm, p);
    std::size_t best = out.eps.size();
    BigReal best_err(p);
    for (std::size_t j = 0; j < out.eps.size(); ++j) {
      if (used[j]) continue;
      BigReal err = abs(out.eps[j] - predicted);
      if (best == out.eps.size() || err < best_err) {
        best = j;
        best_err = std::move(err);
      }
    }
    if (best == out.eps.size()) throw PairingMismatch("spectra: eps and nu have different sizes");
    used[best] = true;
    if (best_err > out.pairing_error) out.pairing_error = best_err;
    if (tol > out.pairing_tolerance) out.pairing_tolerance = tol;
    if (best_err > tol) {
      throw PairingMismatch("eigenvalue " + to_string(out.eps[best], 12) + " of k^A does not match clog((1-nu)/nu) = " +
                            to_string(predicted, 12) + " for nu = " + to_string(nu, 12) + " (error " +
                            to_string(best_err, 4) + ", tolerance " + to_string(tol, 4) + ")");
    }
  }
  return out;
}

Entropies entropies(const std::vector<BigComplex>& nu, const std::vector<int>& orders, BranchRule branch) {
  if (nu.empty()) throw std::invalid_argument("entropies: no modes");
  const Precision p = nu.front().precision();
  const BigComplex one(BigReal(1, p));
  const BigReal zero_tol = pow10(-(p.digits - 10), p);
  const BigReal cut = cut_tolerance(p);
  for (int n : orders) {
    if (n < 2) throw std::invalid_argument("entropies: Renyi order must be an integer >= 2, got " + std::to_string(n));
  }

  Entropies out{BigComplex(p), orders, std::vector<BigComplex>(orders.size(), BigComplex(p))};
  for (const auto& a : nu) {
    const BigComplex b = one - a;
    if (abs(a) < zero_tol || abs(b) < zero_tol) {
      throw DomainError("entropies: correlation eigenvalue " + to_string(a, 12) + " is 0 or 1 to working precision");
    }
    out.von_neumann -= a * clog(a, branch, cut) + b * clog(b, branch, cut);
    for (std::size_t o = 0; o < orders.size(); ++o) {
      BigComplex an = a, bn = b;
      for (int i = 1; i < orders[o]; ++i) {
        an *= a;
        bn *= b;
      }
      out.renyi[o] += clog(an + bn, branch, cut);
    }
  }
  for (std::size_t o = 0; o < orders.size(); ++o) out.renyi[o] = out.renyi[o] / BigComplex(BigReal(1 - orders[o], p));
  return out;
}

std::vector<BigComplex> gaussian_many_body_spectrum(const std::vector<BigComplex>& nu) {
  if (nu.empty() || nu.size() > 24) throw std::invalid_argument("gaussian_many_body_spectrum: 1..24 modes");
  const Precision p = nu.front().precision();
  const BigComplex one(BigReal(1, p));
  const std::size_t count = std::size_t{1} << nu.size();
  std::vector<BigComplex> out(count, one);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t j = 0; j < nu.size(); ++j) out[s] *= ((s >> j) & 1U) ? nu[j] : one - nu[j];
  }
  return out;
}

ChargeSectorAnalysis charge_sector_signs(const SpectralData& spectra, int max_modes) {
  if (max_modes < 0 || max_modes > 20) throw std::invalid_argument("charge_sector_signs: max_modes must be in [0, 20]");
  const std::vector<BigComplex>& nu = spectra.nu;
  const std::size_t n = nu.size();
  if (n == 0) throw std::invalid_argument("charge_sector_signs: no modes");
  const Precision p = nu.front().precision();
  const BigComplex one(BigReal(1, p));

  // dominant modes first: smallest |Re eps|
  std::vector<BigReal> weight;
  weight.reserve(n);
  for (const auto& a : nu) weight.push_back(abs(single_particle_energy(a, spectra.branch).re));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });
  const std::size_t retained = std::min<std::size_t>(static_cast<std::size_t>(max_modes), n);

  ChargeSectorAnalysis out{{}, BigReal(p), false, 0, static_cast<int>(retained), BigReal(p), false};
  for (const auto& a : nu) {
    out.mean_charge += a.re;
    if (is_real(a) && a.re > BigReal(1, p)) ++out.modes_above_one;
  }
  const BigReal rounded(std::lround(out.mean_charge.to_double()), p);
  out.mean_charge_integer = abs(out.mean_charge - rounded) <= cut_tolerance(p) * BigReal(static_cast<long>(n), p);
  const long mean_int = rounded.to_long();

  // frozen modes
  BigComplex frozen = one;
  int q_frozen = 0;
  for (std::size_t i = retained; i < n; ++i) {
    const BigComplex& a = nu[order[i]];
    const BigComplex b = one - a;
    if (abs(a) >= abs(b)) {
      frozen *= a;
      ++q_frozen;
      out.truncation_bound += abs(b) / abs(a);
    } else {
      frozen *= b;
      out.truncation_bound += abs(a) / abs(b);
    }
  }

  const int sectors = static_cast<int>(retained) + 1;
  out.sectors.resize(static_cast<std::size_t>(sectors));
  for (int s = 0; s < sectors; ++s) {
    ChargeSectorReport& r = out.sectors[static_cast<std::size_t>(s)];
    r.q = q_frozen + s;
    r.rule_sign = out.mean_charge_integer ? (((r.q - mean_int) % 2 == 0) ? 1 : -1) : 0;
    r.parity_sign = ((r.q - out.modes_above_one) % 2 == 0) ? 1 : -1;
  }

  // depth-first enumeration with prefix products
  std::vector<BigComplex> prefix(retained + 1, frozen);
  const std::size_t leaves = std::size_t{1} << retained;
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    // recompute the prefix from the highest bit that changed
    std::size_t level = 0;
    if (leaf != 0) {
      const std::size_t changed = leaf ^ (leaf - 1);
      level = retained - static_cast<std::size_t>(std::bit_width(changed));
    }
    for (std::size_t d = level; d < retained; ++d) {
      const std::size_t bit = retained - 1 - d;
      const BigComplex& a = nu[order[d]];
      prefix[d + 1] = ((leaf >> bit) & 1U) ? prefix[d] * a : prefix[d] * (one - a);
    }
    const int occupied = std::popcount(leaf);
    ChargeSectorReport& r = out.sectors[static_cast<std::size_t>(occupied)];
    const int sign = real_sign(prefix[retained]);
    if (sign == 0) {
      ++r.complex;
    } else if (sign > 0) {
      ++r.positive;
    } else {
      ++r.negative;
    }
  }
  out.rule_consistent = out.mean_charge_integer;
  for (auto& r : out.sectors) {
    const bool any_real = r.positive + r.negative > 0;
    r.rule_holds = r.rule_sign != 0 && any_real && (r.rule_sign > 0 ? r.negative == 0 : r.positive == 0);
    r.parity_holds = any_real && (r.parity_sign > 0 ? r.negative == 0 : r.positive == 0);
    if (!r.rule_holds) out.rule_consistent = false;
  }
  return out;
}

}  // namespace nhssh
