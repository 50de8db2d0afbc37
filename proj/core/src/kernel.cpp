#include "mdicke/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdicke {

namespace {

void require_size(int size) {
  if (size < 1) throw std::invalid_argument("kernel size must be >= 1");
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw std::domain_error(std::string(what) + ": non-finite kernel entry");
}

}  // namespace

Eigen::MatrixXd displacement_matrix(double alpha, int size) {
  require_size(size);
  if (!std::isfinite(alpha)) throw std::invalid_argument("displacement must be finite");
  if (alpha == 0.0) return Eigen::MatrixXd::Identity(size, size);

  // For l = k + d,
  //   <l|D(alpha)|k> = e^{-x/2} alpha^d sqrt(k!/l!) L_k^(d)(x),  x = alpha^2,
  // with g_k = sqrt(k! d!/(k+d)!) L_k^(d)(x) from the normalised Laguerre
  // recurrence.  g_k is rescaled on the fly and the scale kept as a log.
  // <k|D(alpha)|l> = (-1)^d <l|D(alpha)|k>.
  constexpr double kRescale = 1e150;
  const double x = alpha * alpha;
  const double log_abs = std::log(std::abs(alpha));
  Eigen::MatrixXd m(size, size);
  for (int d = 0; d < size; ++d) {
    const double sign = (alpha < 0.0 && d % 2) ? -1.0 : 1.0;
    const double log_prefactor = -0.5 * x + d * log_abs - 0.5 * std::lgamma(d + 1.0);
    double log_scale = 0.0;
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k + d < size; ++k) {
      if (k > 0) {
        const double next = ((2.0 * k - 1.0 + d - x) * cur -
                             std::sqrt((k - 1.0) * (k - 1.0 + d)) * prev) /
                            std::sqrt(double(k) * (k + d));
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
          cur /= kRescale;
          prev /= kRescale;
          log_scale += std::log(kRescale);
        }
      }
      const double value = cur == 0.0 ? 0.0 : sign * cur * std::exp(log_prefactor + log_scale);
      m(k + d, k) = value;
      if (d > 0) m(k, k + d) = (d % 2) ? -value : value;
    }
  }
  require_finite(m, "displacement_matrix");
  return m;
}

Eigen::MatrixXd overlap_kernel(double g, int size) { return displacement_matrix(g, size); }

Eigen::MatrixXd overlap_kernel_series(double g, int size) {
  require_size(size);
  if (!std::isfinite(g)) throw std::invalid_argument("displacement must be finite");

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size, size);
  if (g == 0.0) {
    d.setIdentity();
    return d;
  }

  const double log_g = std::log(std::abs(g));
  const double g_sign = g < 0.0 ? -1.0 : 1.0;
  std::vector<double> log_terms;
  std::vector<double> signs;
  for (int l = 0; l < size; ++l) {
    for (int k = 0; k < size; ++k) {
      const int rmax = std::min(l, k);
      log_terms.assign(rmax + 1, 0.0);
      signs.assign(rmax + 1, 0.0);
      double log_max = -std::numeric_limits<double>::infinity();
      for (int r = 0; r <= rmax; ++r) {
        const int power = l + k - 2 * r;
        log_terms[r] = 0.5 * (std::lgamma(l + 1.0) + std::lgamma(k + 1.0)) + power * log_g -
                       std::lgamma(l - r + 1.0) - std::lgamma(k - r + 1.0) - std::lgamma(r + 1.0);
        signs[r] = (((k - r) % 2) ? -1.0 : 1.0) * ((power % 2 && g_sign < 0.0) ? -1.0 : 1.0);
        log_max = std::max(log_max, log_terms[r]);
      }
      double acc = 0.0;
      for (int r = 0; r <= rmax; ++r) acc += signs[r] * std::exp(log_terms[r] - log_max);
      d(l, k) = acc == 0.0 ? 0.0 : acc * std::exp(log_max - 0.5 * g * g);
    }
  }
  require_finite(d, "overlap_kernel_series");
  return d;
}

}  // namespace mdicke
