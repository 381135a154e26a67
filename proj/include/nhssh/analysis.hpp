// SPDX-License-Identifier: Apache-2.0
//
// Entanglement temperatures read off the kernel, the continuum predictions they are
// compared against, and the fits and collapse metrics built on top of them.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nhssh/bignum.hpp"
#include "nhssh/entanglement.hpp"
#include "nhssh/model.hpp"

namespace nhssh {

/// A value attached to lattice site (or bond) j.
struct SitePoint {
  int j = 0;
  BigComplex value;
};

enum class CurveKind { TriangularGapped, ParabolaCFT, MuChemicalPotential, CombinedCritical };

std::string_view to_string(CurveKind kind);

struct CurveSample {
  BigReal x;
  BigComplex value;
};

struct ConjectureCurve {
  CurveKind kind = CurveKind::ParabolaCFT;
  std::vector<CurveSample> samples;
  /// Defining constants, e.g. {"ell", "100"}, {"c_S", "1.22..."}.
  std::vector<std::pair<std::string, std::string>> parameters;
};

/// k^A_{j,j+1} / (-w) for even j and / (-v) for odd j, j = 0 .. ell-2.
std::vector<SitePoint> nn_temperature(const EntanglementKernel& kernel);
/// Multiplies each ratio by 2 c_S / ell.
std::vector<SitePoint> rescale(const std::vector<SitePoint>& points, const BigReal& c_s, int ell);

/// i Im k^A_{j,j} (as a real number), optionally divided by +u (even j) or -u (odd j).
std::vector<SitePoint> diag_potential(const EntanglementKernel& kernel, bool divide_by_u);

/// 2 pi x (ell - x) / ell^2 at x = j + offset, j = 0 .. count-1.
ConjectureCurve parabola_cft(int ell, int count, const BigReal& offset);

enum class MuSign { Decreasing, Increasing };

/// mu_jj = 2 pi i (1 - (j + 1/2)/ell) (Decreasing) or 2 pi i (1 + (j + 1/2)/ell) (Increasing).
ConjectureCurve mu_conjecture(int ell, MuSign sign, Precision p);

/// (pi s u / c_S) (ell - x) x / ell + 2 pi (1 - x / ell) at x = j + offset, with s = +1 on
/// even sites and -1 on odd sites (the sign of the staggered potential).
ConjectureCurve combined_curve(int ell, const ModelParams& params, const BigReal& offset);
/// Same, for one fixed branch s = +1 or -1 at every site.
ConjectureCurve combined_curve_branch(int ell, const ModelParams& params, const BigReal& offset, int branch);

struct FitResult {
  BigReal slope;
  BigReal intercept;
  /// root-mean-square residual of the fit
  BigReal residual;
  /// largest |residual| relative to the largest |y| in the window
  BigReal max_relative_residual;
  int first = 0;
  int last = 0;  // inclusive indices of the data window
  std::vector<std::pair<std::string, BigReal>> extras;
};

/// Ordinary least squares y = slope x + intercept.
FitResult linear_fit(const std::vector<BigReal>& x, const std::vector<BigReal>& y);

/// Least-squares line through Re value over sites j < window * ell, against x = j + offset.
FitResult triangular_fit(const std::vector<SitePoint>& temperature, double window, int ell, const BigReal& offset);

struct EntropySample {
  int ell = 0;
  BigReal entropy;  // Re S_A
};

/// Re S_A = (c/3) log[(L/pi) sin(pi ell / L)] + const; slope is c (also in extras as "c").
FitResult central_charge_fit(const std::vector<EntropySample>& samples, int L);

struct RealityCheck {
  std::vector<BigComplex> eigenvalues;
  double threshold = 1e-2;
  /// fraction of eigenvalues with |Im| < threshold
  double fraction = 0.0;
  /// largest |Im| among those eigenvalues
  BigReal max_im;
};

/// Eigenvalues of k^A - diag(mu).
RealityCheck spectrum_reality_check(const EntanglementKernel& kernel, const ConjectureCurve& mu,
                                    double threshold = 1e-2, const LinalgOptions& opts = {});

/// A curve y(x / ell) for one sublattice parity, for collapse comparisons.
struct ScaledCurve {
  int ell = 0;
  std::vector<double> x;  // x / ell, increasing
  std::vector<double> y;
};

/// Splits points into even-j and odd-j curves, x = (j + offset) / ell, y = Re value
/// (or Im value with imaginary = true).
std::pair<ScaledCurve, ScaledCurve> split_parity(const std::vector<SitePoint>& points, int ell, double offset,
                                                bool imaginary = false);

/// All points as one curve, x = (j + offset) / ell.
ScaledCurve scaled_curve(const std::vector<SitePoint>& points, int ell, double offset, bool imaginary = false);

/// max |f_a - f_b| / max |f_a| over the overlap of two curves, with f_b linearly
/// interpolated at the x of f_a.
double collapse_deviation(const ScaledCurve& a, const ScaledCurve& b);

/// collapse_deviation applied separately to the even-j and odd-j points of a and b (the
/// two bond or site types of the chain), x = (j + offset) / ell; the larger of the two.
double parity_collapse_deviation(const std::vector<SitePoint>& a, int ell_a, const std::vector<SitePoint>& b, int ell_b,
                                 double offset);

/// max |y - 2 pi t (1 - t)| over points with t = x in [0, edge] or [1 - edge, 1];
/// with relative = true each term is divided by 2 pi t (1 - t).
double endpoint_deviation(const ScaledCurve& curve, double edge, bool relative = false);

/// max |k_jm| over |j - m| >= 2 with j, m in the first or last `edge` fraction of the
/// interval, relative to the largest nearest-neighbour |k_{j,j+1}| in the same region.
double locality_ratio(const EntanglementKernel& kernel, double edge);

/// Rescaled critical temperature 2 c_S / ell * k^A_{j,j+1} / (-t_j), bond j sitting at x = j + 1.
std::vector<SitePoint> critical_temperature(const EntanglementKernel& kernel);

struct DiagonalCheck {
  /// Im k_jj at j = 0 and j = ell - 1
  BigReal raw_first;
  BigReal raw_last;
  /// The sublattice branch through j = 0 (resp. j = ell - 1), quadratically extrapolated
  /// from its three sites nearest the end to x = 0 (resp. x = ell); sites sit at x = j + 1/2.
  BigReal edge_first;
  BigReal edge_last;
  /// max(|edge_first - 2 pi|, |edge_last|) / (2 pi)
  double endpoint_error = 0.0;
  /// max |Im k_jj - combined curve| / (2 pi) over the first `window` fraction of sites
  double profile_error = 0.0;
};

DiagonalCheck critical_diagonal_check(const EntanglementKernel& kernel, double window);

struct TriangleCheck {
  /// k_{j,j+1} / (-t_j) against x = j + 1
  FitResult coupling;
  /// Im k_jj / (+-u) against x = j + 1/2
  FitResult potential;
  /// |slope_c - slope_p| / |slope_c|
  double slope_mismatch = 0.0;
};

TriangleCheck triangle_check(const EntanglementKernel& kernel, double window);

}  // namespace nhssh
