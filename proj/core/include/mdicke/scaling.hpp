#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mdicke {

/// One observable curve value(lambda) at fixed system size.
struct SizeCurve {
  int n_atoms = 0;
  std::vector<double> lambda;
  std::vector<double> value;
};

/// Curves of one observable for several sizes.  Valid datasets have at least
/// three sizes and at least five strictly increasing lambda points per curve.
struct ScalingDataset {
  std::string observable;
  std::vector<SizeCurve> entries;

  void validate() const;
};

struct FsPeak {
  double lambda_max = 0.0;
  double chi_max = 0.0;
};

/// Maximum of a sampled curve, refined by the parabola through the top three
/// grid points.  Throws std::domain_error when the largest sample is an
/// endpoint.
[[nodiscard]] FsPeak locate_fs_peak(std::span<const double> lambda, std::span<const double> value);

struct CollapsedCurve {
  int n_atoms = 0;
  std::vector<double> x;  // N^nu (lambda - lambda_max)
  std::vector<double> y;  // (chi_max - chi) / chi
};

[[nodiscard]] std::vector<CollapsedCurve> rescale_fs_curves(const ScalingDataset& dataset, double nu,
                                                            std::span<const FsPeak> peaks);

/// Quality of the data collapse at exponent nu: every rescaled curve is
/// interpolated (monotone piecewise cubic) onto 200 points spanning the
/// common x window, and the RMS spread between curves is divided by the RMS
/// of their mean.  Zero is a perfect collapse.  Throws std::domain_error if
/// the curves share no x window.
[[nodiscard]] double collapse_quality(const ScalingDataset& dataset, double nu,
                                      std::span<const FsPeak> peaks);

struct CollapseExponent {
  double nu = 0.0;
  double quality = 0.0;
};

/// Minimises collapse_quality over nu in [nu_lo, nu_hi]: grid scan, then
/// Brent refinement around the best grid point.
[[nodiscard]] CollapseExponent best_collapse_exponent(const ScalingDataset& dataset,
                                                      std::span<const FsPeak> peaks,
                                                      double nu_lo = 0.3, double nu_hi = 1.2);

struct ExponentFit {
  double exponent = 0.0;        // least-squares slope of log(value) vs log(N)
  double standard_error = 0.0;  // of that slope
  /// (1/N, local slope) from consecutive sizes, 1/N descending.  The pair
  /// (N_i, N_{i+1}) sits at 1/sqrt(N_i N_{i+1}).
  std::vector<std::pair<double, double>> local_slopes;
  /// Local slopes linearly extrapolated to 1/N -> 0.
  double extrapolated_intercept = 0.0;
};

/// Power-law fit value ~ N^exponent.  Needs at least four sizes and strictly
/// positive values (std::invalid_argument / std::domain_error otherwise).
[[nodiscard]] ExponentFit loglog_slope_fit(std::span<const double> sizes,
                                           std::span<const double> values);

struct CInfinityFit {
  double c_inf = 0.0;
  double amplitude = 0.0;
  double theta = 0.0;  // C_N = c_inf - amplitude N^(-theta)
  ExponentFit difference_fit;  // log(c_inf - C_N) against log(N)
};

/// Least-squares fit of C_N = C_inf - a N^(-theta).  For fixed theta the model
/// is linear in (C_inf, a), so theta is found by a one-dimensional search and
/// the three parameters are then polished by Gauss-Newton.  Throws
/// std::domain_error for a non-monotonic sequence.
[[nodiscard]] CInfinityFit extrapolate_c_infinity(std::span<const double> sizes,
                                                  std::span<const double> values);

}  // namespace mdicke
