// SPDX-License-Identifier: Apache-2.0
#include "nhssh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

BigReal two_pi(Precision p) {
  BigReal t = pi(p);
  mpfr_mul_2si(t.get(), t.get(), 1, MPFR_RNDN);
  return t;
}

BigReal half(Precision p) {
  BigReal h(1, p);
  mpfr_div_2si(h.get(), h.get(), 1, MPFR_RNDN);
  return h;
}

std::string str(const BigReal& x) { return to_string(x, 30); }

}  // namespace

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::TriangularGapped: return "TriangularGapped";
    case CurveKind::ParabolaCFT: return "ParabolaCFT";
    case CurveKind::MuChemicalPotential: return "MuChemicalPotential";
    case CurveKind::CombinedCritical: return "CombinedCritical";
  }
  return "?";
}

std::vector<SitePoint> nn_temperature(const EntanglementKernel& kernel) {
  const std::size_t n = kernel.kA.rows();
  if (n < 4) throw std::invalid_argument("nn_temperature: need ell >= 4");
  std::vector<SitePoint> out;
  out.reserve(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const BigReal& coupling = (j % 2 == 0) ? kernel.params.w : kernel.params.v;
    out.push_back({static_cast<int>(j), kernel.kA(j, j + 1) / (-coupling)});
  }
  return out;
}

std::vector<SitePoint> rescale(const std::vector<SitePoint>& points, const BigReal& c_s, int ell) {
  const Precision p = c_s.precision();
  const BigReal factor = BigReal(2, p) * c_s / BigReal(ell, p);
  std::vector<SitePoint> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back({pt.j, pt.value * factor});
  return out;
}

std::vector<SitePoint> diag_potential(const EntanglementKernel& kernel, bool divide_by_u) {
  const std::size_t n = kernel.kA.rows();
  const Precision p = kernel.kA.precision();
  if (divide_by_u && kernel.params.u.is_zero()) throw std::invalid_argument("diag_potential: u = 0");
  std::vector<SitePoint> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    BigReal v = kernel.kA(j, j).im;
    if (divide_by_u) v = (j % 2 == 0) ? v / kernel.params.u : v / (-kernel.params.u);
    out.push_back({static_cast<int>(j), BigComplex(std::move(v), BigReal(p))});
  }
  return out;
}

ConjectureCurve parabola_cft(int ell, int count, const BigReal& offset) {
  if (ell <= 0) throw std::invalid_argument("parabola_cft: ell must be positive");
  const Precision p = offset.precision();
  const BigReal l(ell, p);
  const BigReal scale = two_pi(p) / (l * l);
  ConjectureCurve c{CurveKind::ParabolaCFT, {}, {{"ell", std::to_string(ell)}, {"offset", str(offset)}}};
  for (int j = 0; j < count; ++j) {
    const BigReal x = BigReal(j, p) + offset;
    c.samples.push_back({x, BigComplex(scale * x * (l - x))});
  }
  return c;
}

ConjectureCurve mu_conjecture(int ell, MuSign sign, Precision p) {
  if (ell <= 0) throw std::invalid_argument("mu_conjecture: ell must be positive");
  const BigReal l(ell, p);
  const BigReal one(1, p);
  ConjectureCurve c{CurveKind::MuChemicalPotential,
                    {},
                    {{"ell", std::to_string(ell)}, {"sign", sign == MuSign::Decreasing ? "decreasing" : "increasing"}}};
  for (int j = 0; j < ell; ++j) {
    const BigReal x = BigReal(j, p) + half(p);
    const BigReal t = sign == MuSign::Decreasing ? one - x / l : one + x / l;
    c.samples.push_back({x, BigComplex(BigReal(p), two_pi(p) * t)});
  }
  return c;
}

namespace {

ConjectureCurve combined(int ell, const ModelParams& params, const BigReal& offset, int fixed_branch) {
  const Precision p = params.precision;
  const BigReal l(ell, p);
  const BigReal c_s = speed_of_sound(params);
  ConjectureCurve c{CurveKind::CombinedCritical,
                    {},
                    {{"ell", std::to_string(ell)},
                     {"c_S", str(c_s)},
                     {"u", str(params.u)},
                     {"offset", str(offset)},
                     {"branch", fixed_branch == 0 ? "staggered" : (fixed_branch > 0 ? "+u" : "-u")}}};
  for (int j = 0; j < ell; ++j) {
    const int s = fixed_branch != 0 ? fixed_branch : (j % 2 == 0 ? 1 : -1);
    const BigReal x = BigReal(j, p) + offset;
    const BigReal parabola = pi(p) * BigReal(s, p) * params.u / c_s * (l - x) * x / l;
    const BigReal line = two_pi(p) * (BigReal(1, p) - x / l);
    c.samples.push_back({x, BigComplex(parabola + line)});
  }
  return c;
}

}  // namespace

ConjectureCurve combined_curve(int ell, const ModelParams& params, const BigReal& offset) {
  return combined(ell, params, offset, 0);
}

ConjectureCurve combined_curve_branch(int ell, const ModelParams& params, const BigReal& offset, int branch) {
  if (branch != 1 && branch != -1) throw std::invalid_argument("combined_curve_branch: branch must be +1 or -1");
  return combined(ell, params, offset, branch);
}

FitResult linear_fit(const std::vector<BigReal>& x, const std::vector<BigReal>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 matching points");
  const Precision p = x.front().precision();
  const BigReal n(static_cast<long>(x.size()), p);
  BigReal sx(p), sy(p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const BigReal mx = sx / n, my = sy / n;
  BigReal sxx(p), sxy(p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const BigReal dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (sxx.is_zero()) throw std::invalid_argument("linear_fit: all x equal");
  FitResult f{sxy / sxx, BigReal(p), BigReal(p), BigReal(p), 0, static_cast<int>(x.size()) - 1, {}};
  f.intercept = my - f.slope * mx;
  BigReal ss(p), worst(p), ymax(p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const BigReal r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
    worst = max(worst, abs(r));
    ymax = max(ymax, abs(y[i]));
  }
  f.residual = sqrt(ss / n);
  f.max_relative_residual = ymax.is_zero() ? worst : worst / ymax;
  return f;
}

FitResult triangular_fit(const std::vector<SitePoint>& temperature, double window, int ell, const BigReal& offset) {
  if (!(window > 0.0 && window <= 0.5)) throw std::invalid_argument("triangular_fit: window must be in (0, 1/2]");
  const Precision p = offset.precision();
  const double limit = window * ell;
  std::vector<BigReal> x, y;
  int first = -1, last = -1;
  for (const auto& pt : temperature) {
    if (pt.j >= limit) continue;
    if (first < 0) first = pt.j;
    last = pt.j;
    x.push_back(BigReal(pt.j, p) + offset);
    y.push_back(pt.value.re);
  }
  FitResult f = linear_fit(x, y);
  f.first = first;
  f.last = last;
  return f;
}

FitResult central_charge_fit(const std::vector<EntropySample>& samples, int L) {
  if (samples.size() < 5) throw std::invalid_argument("central_charge_fit: need >= 5 samples");
  const Precision p = samples.front().entropy.precision();
  const BigReal lr(L, p);
  const BigReal third = BigReal(1, p) / BigReal(3, p);
  std::vector<BigReal> x, y;
  for (const auto& s : samples) {
    const BigReal chord = lr / pi(p) * sin(pi(p) * BigReal(s.ell, p) / lr);
    x.push_back(third * log(chord));
    y.push_back(s.entropy);
  }
  FitResult f = linear_fit(x, y);
  f.first = samples.front().ell;
  f.last = samples.back().ell;
  f.extras.emplace_back("c", f.slope);
  return f;
}

RealityCheck spectrum_reality_check(const EntanglementKernel& kernel, const ConjectureCurve& mu, double threshold,
                                    const LinalgOptions& opts) {
  const std::size_t n = kernel.kA.rows();
  if (mu.samples.size() != n) throw std::invalid_argument("spectrum_reality_check: dimension mismatch");
  BigMatrix shifted = kernel.kA;
  for (std::size_t j = 0; j < n; ++j) shifted(j, j) -= mu.samples[j].value;
  const Precision p = kernel.kA.precision();
  RealityCheck out{eigenvalues(shifted, opts), threshold, 0.0, BigReal(p)};
  const BigReal thr = BigReal::from_double(threshold, p);
  std::size_t real = 0;
  for (const auto& e : out.eigenvalues) {
    const BigReal im = abs(e.im);
    if (im < thr) {
      ++real;
      out.max_im = max(out.max_im, im);
    }
  }
  out.fraction = static_cast<double>(real) / static_cast<double>(n);
  return out;
}

std::pair<ScaledCurve, ScaledCurve> split_parity(const std::vector<SitePoint>& points, int ell, double offset,
                                                bool imaginary) {
  ScaledCurve even{ell, {}, {}}, odd{ell, {}, {}};
  for (const auto& pt : points) {
    ScaledCurve& c = pt.j % 2 == 0 ? even : odd;
    c.x.push_back((pt.j + offset) / ell);
    c.y.push_back(imaginary ? pt.value.im.to_double() : pt.value.re.to_double());
  }
  return {even, odd};
}

ScaledCurve scaled_curve(const std::vector<SitePoint>& points, int ell, double offset, bool imaginary) {
  ScaledCurve c{ell, {}, {}};
  for (const auto& pt : points) {
    c.x.push_back((pt.j + offset) / ell);
    c.y.push_back(imaginary ? pt.value.im.to_double() : pt.value.re.to_double());
  }
  return c;
}

double collapse_deviation(const ScaledCurve& a, const ScaledCurve& b) {
  if (a.x.empty() || b.x.size() < 2) throw std::invalid_argument("collapse_deviation: empty curve");
  double scale = 0.0, worst = 0.0;
  for (double v : a.y) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double t = a.x[i];
    if (t < b.x.front() || t > b.x.back()) continue;
    const auto it = std::upper_bound(b.x.begin(), b.x.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - b.x.begin());
    if (hi == b.x.size()) hi = b.x.size() - 1;
    const std::size_t lo = hi - 1;
    const double s = (t - b.x[lo]) / (b.x[hi] - b.x[lo]);
    const double interp = b.y[lo] + s * (b.y[hi] - b.y[lo]);
    worst = std::max(worst, std::abs(a.y[i] - interp));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double parity_collapse_deviation(const std::vector<SitePoint>& a, int ell_a, const std::vector<SitePoint>& b, int ell_b,
                                 double offset) {
  const auto [a_even, a_odd] = split_parity(a, ell_a, offset);
  const auto [b_even, b_odd] = split_parity(b, ell_b, offset);
  return std::max(collapse_deviation(a_even, b_even), collapse_deviation(a_odd, b_odd));
}

double endpoint_deviation(const ScaledCurve& curve, double edge, bool relative) {
  const double two_pi_d = 2.0 * std::acos(-1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    const double t = curve.x[i];
    if (t > edge && t < 1.0 - edge) continue;
    const double pred = two_pi_d * t * (1.0 - t);
    const double d = std::abs(curve.y[i] - pred);
    if (relative && pred <= 0.0) continue;
    worst = std::max(worst, relative ? d / pred : d);
  }
  return worst;
}

double locality_ratio(const EntanglementKernel& kernel, double edge) {
  const std::size_t n = kernel.kA.rows();
  const auto cut = static_cast<std::size_t>(std::floor(edge * static_cast<double>(n)));
  auto region = [&](std::size_t i) { return i < cut ? 0 : (i >= n - cut ? 1 : -1); };
  const Precision p = kernel.kA.precision();
  BigReal far(p), nn(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int ri = region(i);
      if (ri < 0 || ri != region(j)) continue;
      const std::size_t d = i > j ? i - j : j - i;
      const BigReal m = abs(kernel.kA(i, j));
      if (d == 1) nn = max(nn, m);
      if (d >= 2) far = max(far, m);
    }
  }
  return nn.is_zero() ? 0.0 : (far / nn).to_double();
}

std::vector<SitePoint> critical_temperature(const EntanglementKernel& kernel) {
  return rescale(nn_temperature(kernel), speed_of_sound(kernel.params), static_cast<int>(kernel.kA.rows()));
}

DiagonalCheck critical_diagonal_check(const EntanglementKernel& kernel, double window) {
  const int ell = static_cast<int>(kernel.kA.rows());
  if (ell < 6) throw std::invalid_argument("critical_diagonal_check: need ell >= 6");
  const Precision p = kernel.kA.precision();
  const BigReal tp = two_pi(p);
  // Newton form on the nodes 1/2, 5/2, 9/2 (distance from the end), evaluated at 0
  auto extrapolate = [&](int j0, int step) {
    const BigReal& f0 = kernel.kA(j0, j0).im;
    const BigReal& f1 = kernel.kA(j0 + step, j0 + step).im;
    const BigReal& f2 = kernel.kA(j0 + 2 * step, j0 + 2 * step).im;
    // t = -1/4 in units of the node spacing 2
    const BigReal t = BigReal(-1, p) / BigReal(4, p);
    const BigReal d1 = f1 - f0;
    const BigReal d2 = f2 - BigReal(2, p) * f1 + f0;
    return f0 + t * d1 + t * (t - BigReal(1, p)) / BigReal(2, p) * d2;
  };
  DiagonalCheck d{kernel.kA(0, 0).im, kernel.kA(ell - 1, ell - 1).im, extrapolate(0, 2), extrapolate(ell - 1, -2),
                  0.0, 0.0};
  d.endpoint_error = (max(abs(d.edge_first - tp), abs(d.edge_last)) / tp).to_double();
  const ConjectureCurve full = combined_curve(ell, kernel.params, half(p));
  BigReal worst(p);
  for (int j = 0; j < ell && j < window * ell; ++j) {
    worst = max(worst, abs(kernel.kA(j, j).im - full.samples[j].value.re));
  }
  d.profile_error = (worst / tp).to_double();
  return d;
}

TriangleCheck triangle_check(const EntanglementKernel& kernel, double window) {
  const int ell = static_cast<int>(kernel.kA.rows());
  const Precision p = kernel.kA.precision();
  TriangleCheck t{triangular_fit(nn_temperature(kernel), window, ell, BigReal(1, p)),
                  triangular_fit(diag_potential(kernel, true), window, ell, half(p)), 0.0};
  t.slope_mismatch = (abs(t.coupling.slope - t.potential.slope) / abs(t.coupling.slope)).to_double();
  return t;
}

}  // namespace nhssh
