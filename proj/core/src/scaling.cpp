#include "mdicke/scaling.hpp"

#include <Eigen/Dense>

#include <cmath>
// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdicke {

namespace {

constexpr int kCollapseGrid = 200;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct abscissae");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - out.intercept - out.slope * x[i];
      ssr += r * r;
    }
    out.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  return out;
}

// Linear least squares of values against [1, -N^-theta]; returns the residual
// sum of squares and fills (c_inf, amplitude).
double projected_residual(double theta, std::span<const double> sizes,
                          std::span<const double> values, double& c_inf, double& amplitude) {
  const auto n = static_cast<Eigen::Index>(sizes.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = -std::pow(sizes[i], -theta);
    b[i] = values[i];
  }
  const Eigen::Vector2d p = a.colPivHouseholderQr().solve(b);
  c_inf = p[0];
  amplitude = p[1];
  return (a * p - b).squaredNorm();
}

}  // namespace

void ScalingDataset::validate() const {
  if (entries.size() < 3) throw std::invalid_argument("scaling dataset needs at least three sizes");
  for (const auto& e : entries) {
    if (e.lambda.size() != e.value.size()) throw std::invalid_argument("curve length mismatch");
    if (e.lambda.size() < 5) throw std::invalid_argument("scaling curves need at least five points");
    for (std::size_t i = 1; i < e.lambda.size(); ++i) {
      if (!(e.lambda[i] > e.lambda[i - 1])) {
        throw std::invalid_argument("scaling curve lambda must be strictly increasing");
      }
    }
  }
}

FsPeak locate_fs_peak(std::span<const double> lambda, std::span<const double> value) {
  if (lambda.size() != value.size() || lambda.size() < 3) {
    throw std::invalid_argument("locate_fs_peak needs at least three matching samples");
  }
  const auto top = static_cast<std::size_t>(
      std::distance(value.begin(), std::max_element(value.begin(), value.end())));
  if (top == 0 || top + 1 == value.size()) {
    throw std::domain_error("locate_fs_peak: maximum at the grid edge; widen the lambda window");
  }
  const double x0 = lambda[top - 1], x1 = lambda[top], x2 = lambda[top + 1];
  const double y0 = value[top - 1], y1 = value[top], y2 = value[top + 1];
  // Newton form: y = y0 + d1 (x - x0) + d2 (x - x0)(x - x1)
  const double d1 = (y1 - y0) / (x1 - x0);
  const double d2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0);
  if (!(d2 < 0.0)) return {x1, y1};
  const double xv = 0.5 * (x0 + x1) - d1 / (2.0 * d2);
  const double yv = y0 + d1 * (xv - x0) + d2 * (xv - x0) * (xv - x1);
  return {std::clamp(xv, x0, x2), yv};
}

std::vector<CollapsedCurve> rescale_fs_curves(const ScalingDataset& dataset, double nu,
                                              std::span<const FsPeak> peaks) {
  dataset.validate();
  if (peaks.size() != dataset.entries.size()) {
    throw std::invalid_argument("one peak per curve is required");
  }
  std::vector<CollapsedCurve> out;
  for (std::size_t c = 0; c < dataset.entries.size(); ++c) {
    const auto& e = dataset.entries[c];
    const double scale = std::pow(static_cast<double>(e.n_atoms), nu);
    CollapsedCurve cc;
    cc.n_atoms = e.n_atoms;
    for (std::size_t i = 0; i < e.lambda.size(); ++i) {
      cc.x.push_back(scale * (e.lambda[i] - peaks[c].lambda_max));
      cc.y.push_back((peaks[c].chi_max - e.value[i]) / e.value[i]);
    }
    out.push_back(std::move(cc));
  }
  return out;
}

double collapse_quality(const ScalingDataset& dataset, double nu, std::span<const FsPeak> peaks) {
  const auto curves = rescale_fs_curves(dataset, nu, peaks);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    lo = std::max(lo, c.x.front());
    hi = std::min(hi, c.x.back());
  }
  if (!(lo < hi)) throw std::domain_error("collapse_quality: rescaled curves do not overlap");

  using Interp = boost::math::interpolators::pchip<std::vector<double>>;
  std::vector<Interp> interps;
  interps.reserve(curves.size());
  for (const auto& c : curves) interps.emplace_back(std::vector<double>(c.x), std::vector<double>(c.y));

  double spread = 0.0;
  double signal = 0.0;
  std::vector<double> ys(curves.size());
  for (int g = 0; g < kCollapseGrid; ++g) {
    const double x = lo + (hi - lo) * g / (kCollapseGrid - 1);
    double mean = 0.0;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      ys[c] = interps[c](std::clamp(x, curves[c].x.front(), curves[c].x.back()));
      mean += ys[c];
    }
    mean /= static_cast<double>(curves.size());
    double var = 0.0;
    for (double y : ys) var += (y - mean) * (y - mean);
    spread += var / static_cast<double>(curves.size());
    signal += mean * mean;
  }
  if (signal == 0.0) return spread == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(spread / signal);
}

CollapseExponent best_collapse_exponent(const ScalingDataset& dataset, std::span<const FsPeak> peaks,
                                        double nu_lo, double nu_hi) {
  if (!(nu_lo < nu_hi)) throw std::invalid_argument("best_collapse_exponent: empty nu range");
  auto quality = [&](double nu) {
    try {
      return collapse_quality(dataset, nu, peaks);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  constexpr int kScan = 91;
  const double step = (nu_hi - nu_lo) / (kScan - 1);
  double best_nu = nu_lo;
  double best_q = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double nu = nu_lo + step * i;
    const double q = quality(nu);
    if (q < best_q) {
      best_q = q;
      best_nu = nu;
    }
  }
  const auto refined = boost::math::tools::brent_find_minima(
      quality, std::max(nu_lo, best_nu - step), std::min(nu_hi, best_nu + step), 40);
  if (refined.second < best_q) return {refined.first, refined.second};
  return {best_nu, best_q};
}

ExponentFit loglog_slope_fit(std::span<const double> sizes, std::span<const double> values) {
  if (sizes.size() != values.size() || sizes.size() < 4) {
    throw std::invalid_argument("loglog_slope_fit needs at least four (N, value) pairs");
  }
  std::vector<std::size_t> order(sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] < sizes[b]; });

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i : order) {
    if (!(values[i] > 0.0)) throw std::domain_error("loglog_slope_fit: values must be positive");
    if (!(sizes[i] > 0.0)) throw std::domain_error("loglog_slope_fit: sizes must be positive");
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(values[i]));
  }

  const LineFit global = fit_line(lx, ly);
  ExponentFit out;
  out.exponent = global.slope;
  out.standard_error = global.slope_stderr;

  std::vector<double> inv;
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) {
    const double slope = (ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]);
    const double at = std::exp(-0.5 * (lx[i] + lx[i + 1]));
    out.local_slopes.emplace_back(at, slope);
    inv.push_back(at);
    slopes.push_back(slope);
  }
  out.extrapolated_intercept = fit_line(inv, slopes).intercept;
  return out;
}

CInfinityFit extrapolate_c_infinity(std::span<const double> sizes, std::span<const double> values) {
  if (sizes.size() != values.size() || sizes.size() < 4) {
    throw std::invalid_argument("extrapolate_c_infinity needs at least four sizes");
  }
  std::vector<std::size_t> order(sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] < sizes[b]; });
  std::vector<double> n;
  std::vector<double> c;
  for (std::size_t i : order) {
    n.push_back(sizes[i]);
    c.push_back(values[i]);
  }
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 1; i < c.size(); ++i) {
    increasing = increasing && c[i] > c[i - 1];
    decreasing = decreasing && c[i] < c[i - 1];
  }
  if (!increasing && !decreasing) {
    throw std::domain_error("extrapolate_c_infinity: C_N is not monotonic in N");
  }

  double c_inf = 0.0;
  double amp = 0.0;
  auto rss = [&](double theta) { return projected_residual(theta, n, c, c_inf, amp); };

  constexpr double kThetaLo = 0.02;
  constexpr double kThetaHi = 3.0;
  constexpr int kScan = 150;
  double best_theta = 1.0 / 3.0;
  double best_rss = rss(best_theta);
  const double ratio = std::pow(kThetaHi / kThetaLo, 1.0 / (kScan - 1));
  double theta = kThetaLo;
  for (int i = 0; i < kScan; ++i, theta *= ratio) {
    const double r = rss(theta);
    if (r < best_rss) {
      best_rss = r;
      best_theta = theta;
    }
  }
  const auto refined = boost::math::tools::brent_find_minima(
      rss, std::max(kThetaLo, best_theta / ratio), std::min(kThetaHi, best_theta * ratio), 52);
  theta = refined.first;
  rss(theta);

  // Gauss-Newton polish on (c_inf, amplitude, theta).
  Eigen::Vector3d p(c_inf, amp, theta);
  const auto m = static_cast<Eigen::Index>(n.size());
  auto residuals = [&](const Eigen::Vector3d& q) {
    Eigen::VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) r[i] = q[0] - q[1] * std::pow(n[i], -q[2]) - c[i];
    return r;
  };
  double cost = residuals(p).squaredNorm();
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::MatrixXd jac(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double pw = std::pow(n[i], -p[2]);
      jac(i, 0) = 1.0;
      jac(i, 1) = -pw;
      jac(i, 2) = p[1] * pw * std::log(n[i]);
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-residuals(p));
    const Eigen::Vector3d trial = p + step;
    const double trial_cost = residuals(trial).squaredNorm();
    if (!(trial_cost < cost) || !trial.allFinite()) break;
    p = trial;
    cost = trial_cost;
    if (step.norm() <= 1e-15 * (1.0 + p.norm())) break;
  }

  CInfinityFit out;
  out.c_inf = p[0];
  out.amplitude = p[1];
  out.theta = p[2];
  std::vector<double> diff;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double d = out.c_inf - c[i];
    if (!(d > 0.0) && increasing) {
      throw std::domain_error("extrapolate_c_infinity: fitted limit does not exceed every C_N");
    }
    diff.push_back(std::abs(d));
  }
  if (decreasing) {
    for (double d : diff) {
      if (!(d > 0.0)) throw std::domain_error("extrapolate_c_infinity: degenerate difference");
    }
  }
  out.difference_fit = loglog_slope_fit(n, diff);
  return out;
}

}  // namespace mdicke
