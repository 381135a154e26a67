// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "nhssh/analysis.hpp"
#include "nhssh/correlation.hpp"
#include "support.hpp"

using namespace nhssh;
using nhssh::test::tol;

namespace {

ModelParams make(const char* u, const char* v, const char* w, const char* delta, int L, int ell, int digits) {
  return ModelParams::from_strings(u, v, w, delta, L, ell, Precision{digits});
}

EntanglementKernel kernel_for(const ModelParams& m) {
  KernelOptions o;
  o.exp_check = false;
  return eh_kernel(build_restricted_correlation(m), BranchRule::PrincipalUpper, o);
}

}  // namespace

TEST_CASE("parabola at special points") {
  const Precision p{40};
  const ConjectureCurve c = parabola_cft(8, 9, BigReal(p));
  CHECK(c.samples[0].value.re.is_zero());
  CHECK(abs(c.samples[8].value.re) < tol(-35, p));
  CHECK(abs(c.samples[4].value.re - pi(p) / BigReal(2, p)) < tol(-35, p));
  CHECK(abs(c.samples[2].value.re - BigReal(3, p) * pi(p) / BigReal(8, p)) < tol(-35, p));
}

TEST_CASE("mu conjecture endpoints") {
  const Precision p{40};
  const ConjectureCurve mu = mu_conjecture(100, MuSign::Decreasing, p);
  CHECK(abs(mu.samples[0].value.im - BigReal(2, p) * pi(p) * test::num("0.995", p)) < tol(-35, p));
  CHECK(abs(mu.samples[99].value.im - pi(p) / BigReal(100, p)) < tol(-35, p));
  CHECK(mu.samples[0].value.re.is_zero());
  const ConjectureCurve up = mu_conjecture(100, MuSign::Increasing, p);
  CHECK(up.samples[0].value.im > mu.samples[0].value.im);
}

TEST_CASE("combined curve endpoints for both branches") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-7", 2000, 10, 40);
  const Precision p = m.precision;
  const ConjectureCurve at0 = combined_curve(10, m, BigReal(p));
  CHECK(abs(at0.samples[0].value.re - BigReal(2, p) * pi(p)) < tol(-35, p));
  for (int branch : {1, -1}) {
    const ConjectureCurve end = combined_curve_branch(10, m, BigReal(1, p), branch);
    CHECK(abs(end.samples[9].value.re) < tol(-35, p));
  }
}

TEST_CASE("linear and triangular fits recover planted lines") {
  const Precision p{60};
  std::vector<BigReal> x, y;
  std::vector<SitePoint> pts;
  for (int j = 0; j < 30; ++j) {
    x.emplace_back(BigReal(j, p));
    y.push_back(BigReal(3, p) / BigReal(7, p) * BigReal(j + 1, p) - BigReal(2, p));
    pts.push_back({j, BigComplex(y.back())});
  }
  const FitResult f = linear_fit(x, y);
  CHECK(abs(f.slope - BigReal(3, p) / BigReal(7, p)) < tol(-30, p));
  CHECK(f.residual < tol(-30, p));
  const FitResult t = triangular_fit(pts, 0.2, 100, BigReal(1, p));
  CHECK(t.first == 0);
  CHECK(t.last == 19);
  CHECK(abs(t.slope - BigReal(3, p) / BigReal(7, p)) < tol(-30, p));
}

TEST_CASE("central charge fit recovers a planted c = -2") {
  const Precision p{60};
  const int L = 2000;
  std::vector<EntropySample> s;
  for (int ell : {20, 40, 60, 80, 100}) {
    const BigReal chord = BigReal(L, p) / pi(p) * sin(pi(p) * BigReal(ell, p) / BigReal(L, p));
    s.push_back({ell, BigReal(-2, p) / BigReal(3, p) * log(chord) + test::num("0.7", p)});
  }
  const FitResult f = central_charge_fit(s, L);
  CHECK(abs(f.slope + BigReal(2, p)) < tol(-40, p));
  CHECK(f.extras.at(0).first == "c");
}

TEST_CASE("collapse and endpoint metrics on exact curves") {
  ScaledCurve a{10, {}, {}}, b{20, {}, {}};
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int j = 1; j < 10; ++j) {
    a.x.push_back(j / 10.0);
    a.y.push_back(two_pi * a.x.back() * (1 - a.x.back()));
  }
  for (int j = 1; j < 20; ++j) {
    b.x.push_back(j / 20.0);
    b.y.push_back(two_pi * b.x.back() * (1 - b.x.back()));
  }
  CHECK(endpoint_deviation(a, 0.1) < 1e-14);
  CHECK(endpoint_deviation(a, 0.1, true) < 1e-14);
  // linear interpolation of a parabola: error bounded by h^2 max|f''| / 8
  CHECK(collapse_deviation(a, b) < 0.05 * 0.05 * 2 * two_pi / 8 / (two_pi / 4) + 1e-12);
  ScaledCurve c = a;
  c.y[0] *= 1.1;
  CHECK(endpoint_deviation(c, 0.1, true) == doctest::Approx(0.1));
}

TEST_CASE("homogeneous Hermitian chain: reflection symmetric temperature") {
  const ModelParams m = make("0", "1", "1", "1e-3", 400, 16, 80);
  const Precision p = m.precision;
  const EntanglementKernel k = kernel_for(m);
  const auto t = nn_temperature(k);
  const std::size_t n = t.size();
  for (std::size_t j = 0; j < n; ++j) CHECK(abs(t[j].value.re - t[n - 1 - j].value.re) < tol(-20, p));
  for (const auto& d : diag_potential(k, false)) CHECK(abs(d.value.re) < tol(-40, p));
}

TEST_CASE("gapped kernel: triangle channels agree and the kernel is local") {
  const ModelParams m = make("1", "1", "5", "0", 400, 40, 150);
  const EntanglementKernel k = kernel_for(m);
  const TriangleCheck t = triangle_check(k, 0.2);
  CHECK(t.slope_mismatch < 0.05);
  CHECK(t.coupling.slope > BigReal(0, m.precision));
  CHECK(locality_ratio(k, 0.2) < 1e-2);
}

TEST_CASE("critical kernel: decreasing mu makes more eigenvalues real than the flipped sign") {
  const ModelParams m = make("0.5", "1", "1.5", "1e-5", 400, 30, 120);
  const Precision p = m.precision;
  const EntanglementKernel k = kernel_for(m);
  const RealityCheck dec = spectrum_reality_check(k, mu_conjecture(30, MuSign::Decreasing, p));
  const RealityCheck inc = spectrum_reality_check(k, mu_conjecture(30, MuSign::Increasing, p));
  CHECK(dec.fraction > inc.fraction);
  ConjectureCurve zero = mu_conjecture(30, MuSign::Decreasing, p);
  for (auto& s : zero.samples) s.value = BigComplex(p);
  CHECK(spectrum_reality_check(k, zero).fraction == 0.0);
  const DiagonalCheck d = critical_diagonal_check(k, 0.1);
  CHECK(d.endpoint_error < 0.05);
}

TEST_CASE("parity collapse ignores a sublattice stagger that the mixed collapse sees") {
  const Precision p{30};
  const double two_pi = 2.0 * std::acos(-1.0);
  auto staggered = [&](int ell) {
    std::vector<SitePoint> pts;
    for (int j = 0; j + 1 < ell; ++j) {
      const double t = (j + 1.0) / ell;
      const double y = two_pi * t * (1 - t) + (j % 2 == 0 ? 0.05 : -0.05);
      pts.push_back({j, BigComplex(BigReal::from_double(y, p))});
    }
    return pts;
  };
  const auto a = staggered(60), b = staggered(120);
  CHECK(collapse_deviation(scaled_curve(a, 60, 1.0), scaled_curve(b, 120, 1.0)) > 0.02);
  CHECK(parity_collapse_deviation(a, 60, b, 120, 1.0) < 1e-3);
  // a genuine mismatch is still caught
  auto c = b;
  for (auto& pt : c) pt.value.re *= BigReal::from_double(1.05, p);
  CHECK(parity_collapse_deviation(a, 60, c, 120, 1.0) > 0.04);
}
