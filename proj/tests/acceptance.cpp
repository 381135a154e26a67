// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Runs every criterion at its pinned parameters and prints one
// PASS/FAIL line per criterion; the exit code is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nhssh/analysis.hpp"
#include "nhssh/correlation.hpp"
#include "nhssh/edoracle.hpp"
#include "nhssh/entanglement.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"
#include "nhssh/model.hpp"

using namespace nhssh;

namespace {

// pinned thresholds
constexpr int kDigits = 500;
constexpr int kEdDigits = 200;
constexpr int kL = 2000;
constexpr double kCentralCharge = -2.0;
constexpr double kCentralChargeTol = 0.1;
constexpr double kImPiTol = 1e-6;
constexpr double kRealityThreshold = 1e-2;
constexpr double kRealityFraction = 0.9;
constexpr double kEndpointWindow = 0.1;
constexpr double kEndpointTol = 0.05;
constexpr double kCollapseTol = 0.02;
constexpr double kDiagTol = 0.02;
constexpr double kProfileTol = 0.03;
constexpr double kTriangleWindow = 0.2;
constexpr double kTriangleTol = 0.05;
constexpr double kLocalityEdge = 0.2;
constexpr double kLocalityTol = 1e-3;

const Precision kP{kDigits};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<std::pair<int, Outcome>> results;

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string(e.kind()) + ": " + e.what()};
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d: %s  %s  [%s] (%.0f s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              seconds_since(start));
  std::fflush(stdout);
  results.emplace_back(id, o);
}

std::string sci(const BigReal& x) { return to_string(x, 4); }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(5);
  s << x;
  return s.str();
}

ModelParams critical(int ell) { return ModelParams::from_strings("0.5", "1", "1.5", "1e-7", kL, ell, kP); }

ModelParams gapped(const char* u, const char* v, const char* w, int ell) {
  return ModelParams::from_strings(u, v, w, "0", kL, ell, kP);
}

struct Run {
  CorrelationMatrix c;
  EntanglementKernel k;
};

std::map<std::string, Run> runs;

// Every kernel goes through here, so the exp round trip is recorded for each one.
const Run& run(const std::string& name, const ModelParams& params) {
  auto it = runs.find(name);
  if (it != runs.end()) return it->second;
  const auto start = std::chrono::steady_clock::now();
  CorrelationMatrix c = build_restricted_correlation(params);
  EntanglementKernel k = eh_kernel(c);
  std::printf("  computed %s (ell=%d) in %.0f s\n", name.c_str(), params.ell, seconds_since(start));
  std::fflush(stdout);
  return runs.emplace(name, Run{std::move(c), std::move(k)}).first->second;
}

BigReal absolute_exp_residual(const EntanglementKernel& k) {
  return k.residual * max(BigReal(1, k.m_norm.precision()), k.m_norm);
}

}  // namespace

int main() {
  std::printf("acceptance: P = %d, L = %d\n", kDigits, kL);
  std::fflush(stdout);

  report(1, "critical central charge", [] {
    std::vector<EntropySample> samples;
    for (int ell : {20, 40, 60, 80, 100}) {
      const CorrelationMatrix c = build_restricted_correlation(critical(ell));
      const Entropies e = entropies(eigenvalues(c.matrix), {});
      samples.push_back({ell, e.von_neumann.re});
    }
    const FitResult f = central_charge_fit(samples, kL);
    const double c = f.slope.to_double();
    return Outcome{std::abs(c - kCentralCharge) < kCentralChargeTol, "c = " + to_string(f.slope, 8)};
  });

  report(2, "spectrum imaginary part at ell = 120", [] {
    const Run& r = run("critical120", critical(120));
    const SpectralData s = spectra(r.c, r.k);
    BigReal dev(kP);
    for (const auto& e : s.eps) dev = max(dev, abs(e.im - pi(kP)));
    return Outcome{dev.to_double() < kImPiTol, "max |Im eps - pi| = " + sci(dev) + ", pairing " + sci(s.pairing_error)};
  });

  report(3, "spectrum reality after subtracting mu", [] {
    const Run& r = run("critical120", critical(120));
    const RealityCheck dec = spectrum_reality_check(r.k, mu_conjecture(120, MuSign::Decreasing, kP), kRealityThreshold);
    const RealityCheck inc = spectrum_reality_check(r.k, mu_conjecture(120, MuSign::Increasing, kP), kRealityThreshold);
    return Outcome{dec.fraction >= kRealityFraction && inc.fraction < dec.fraction,
                   "real fraction " + fmt(dec.fraction) + ", flipped sign " + fmt(inc.fraction)};
  });

  report(4, "critical endpoint agreement and collapse", [] {
    const std::vector<int> ells{60, 100, 120};
    std::vector<std::vector<SitePoint>> temps;
    double worst_endpoint = 0.0;
    for (int ell : ells) {
      const Run& r = run("critical" + std::to_string(ell), critical(ell));
      temps.push_back(critical_temperature(r.k));
      worst_endpoint = std::max(worst_endpoint, endpoint_deviation(scaled_curve(temps.back(), ell, 1.0), kEndpointWindow, true));
    }
    // w bonds and v bonds are compared with their own kind
    double collapse = 0.0, mixed = 0.0;
    for (std::size_t i = 0; i + 1 < ells.size(); ++i) {
      collapse = std::max(collapse, parity_collapse_deviation(temps[i], ells[i], temps.back(), ells.back(), 1.0));
      mixed = std::max(mixed, collapse_deviation(scaled_curve(temps[i], ells[i], 1.0),
                                                 scaled_curve(temps.back(), ells.back(), 1.0)));
    }
    return Outcome{worst_endpoint < kEndpointTol && collapse < kCollapseTol,
                   "endpoint deviation " + fmt(worst_endpoint) + ", collapse " + fmt(collapse) +
                       " (both bond types on one curve: " + fmt(mixed) + ")"};
  });

  report(5, "critical diagonal", [] {
    std::string detail;
    bool pass = true;
    for (int ell : {60, 100, 120}) {
      const Run& r = run("critical" + std::to_string(ell), critical(ell));
      const DiagonalCheck d = critical_diagonal_check(r.k, kEndpointWindow);
      pass = pass && d.endpoint_error < kDiagTol && d.profile_error < kProfileTol;
      detail += (detail.empty() ? "" : "; ") + std::string("ell=") + std::to_string(ell) + " edge " + to_string(d.edge_first, 5) +
                "/" + to_string(d.edge_last, 3) + " (raw " + to_string(d.raw_first, 5) + "/" + to_string(d.raw_last, 3) +
                ") endpoint " + fmt(d.endpoint_error) + " profile " + fmt(d.profile_error);
    }
    return Outcome{pass, detail};
  });

  report(6, "gapped triangle", [] {
    std::string detail;
    bool pass = true;
    for (const char* w : {"5", "10", "20"}) {
      const Run& r = run(std::string("gapped_w") + w, gapped("1", "1", w, 100));
      const TriangleCheck t = triangle_check(r.k, kTriangleWindow);
      const double lin_c = t.coupling.max_relative_residual.to_double();
      const double lin_p = t.potential.max_relative_residual.to_double();
      pass = pass && t.slope_mismatch < kTriangleTol && lin_c < kTriangleTol && lin_p < kTriangleTol;
      detail += (detail.empty() ? "" : "; ") + std::string("w=") + w + " slopes " + to_string(t.coupling.slope, 5) + "/" +
                to_string(t.potential.slope, 5) + " mismatch " + fmt(t.slope_mismatch) + " nonlinearity " + fmt(lin_c) +
                "/" + fmt(lin_p);
    }
    return Outcome{pass, detail};
  });

  report(7, "gapped locality", [] {
    const Run& r = run("gapped_local", gapped("2", "2", "20", 80));
    const double ratio = locality_ratio(r.k, kLocalityEdge);
    return Outcome{ratio < kLocalityTol, "ratio " + fmt(ratio)};
  });

  report(8, "exact-diagonalization oracle", [] {
    const Precision p{kEdDigits};
    std::string detail;
    bool pass = true;
    const std::pair<const char*, ModelParams> sets[] = {
        {"gapped", ModelParams::from_strings("1", "1", "5", "0", 8, 4, p)},
        {"critical", ModelParams::from_strings("0.5", "1", "1.5", "1e-3", 8, 4, p)}};
    for (const auto& [name, params] : sets) {
      for (const OracleReport& o : compare_all(params, 4)) {
        pass = pass && o.pass;
        detail += (detail.empty() ? "" : "; ") + std::string(name) + " " + o.quantity + " " +
                  (o.applicable ? (o.pass ? "ok " : "FAIL ") + sci(o.discrepancy) : "n/a");
      }
    }
    return Outcome{pass, detail};
  });

  report(9, "numerical self-consistency", [] {
    const BigReal bound = pow10(-kDigits / 2, kP);
    bool pass = true;
    std::string detail;
    for (const auto& [name, r] : runs) {
      const BigReal a = absolute_exp_residual(r.k);
      pass = pass && r.k.residual_computed && a < bound;
      detail += name + " " + sci(a) + "; ";
    }
    // Hermitian limit
    const Run& h = run("hermitian", gapped("0", "1", "1.5", 60));
    const BigReal herm = max_abs_diff(h.k.kA, adjoint(h.k.kA));
    const Entropies e = entropies(eigenvalues(h.c.matrix), {});
    const bool s_ok = e.von_neumann.re.sign() >= 0 && abs(e.von_neumann.im) < bound;
    const BigReal a = absolute_exp_residual(h.k);
    pass = pass && herm < bound && s_ok && a < bound;
    detail += "hermitian exp " + sci(a) + ", |k - k^dagger| " + sci(herm) + ", S = " + to_string(e.von_neumann.re, 8);
    return Outcome{pass, detail};
  });

  int failed = 0;
  for (const auto& [id, o] : results) failed += o.pass ? 0 : 1;
  std::printf("acceptance: %zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
