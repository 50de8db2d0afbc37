#include "mdicke/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace mdicke {

namespace {

constexpr double kBetaCeiling = 1.0 - 1e-12;

// Second equilibrium condition after eliminating alpha, divided by beta.
double reduced_condition(double beta, const ModelParams& p) {
  const double b2 = beta * beta;
  return 4.0 * p.lambda * p.lambda * (1.0 - 2.0 * b2) / p.omega - p.delta +
         4.0 * p.capital_omega * (b2 - 0.5);
}

double reduced_condition_slope(double beta, const ModelParams& p) {
  return beta * (-16.0 * p.lambda * p.lambda / p.omega + 8.0 * p.capital_omega);
}

double alpha_of_beta(double beta, const ModelParams& p) {
  return 2.0 * p.lambda * beta * std::sqrt(1.0 - beta * beta) / p.omega;
}

}  // namespace

double scaled_energy(double alpha, double beta, const ModelParams& p) {
  if (!(std::abs(beta) <= 1.0)) throw std::domain_error("scaled_energy: |beta| must not exceed 1");
  const double b2 = beta * beta;
  const double shifted = b2 - 0.5;
  return p.omega * alpha * alpha - 4.0 * p.lambda * alpha * beta * std::sqrt(1.0 - b2) +
         p.delta * shifted - 2.0 * p.capital_omega * shifted * shifted + 0.5 * p.capital_omega;
}

std::array<double, 2> equilibrium_residuals(double alpha, double beta, const ModelParams& p) {
  if (!(std::abs(beta) < 1.0)) throw std::domain_error("equilibrium_residuals: |beta| must be < 1");
  const double s = std::sqrt(1.0 - beta * beta);
  const double first = p.omega * alpha - 2.0 * p.lambda * beta * s;
  const double second = 2.0 * alpha * p.lambda * s - 2.0 * alpha * p.lambda * beta * beta / s -
                        beta * p.delta + 4.0 * p.capital_omega * beta * (beta * beta - 0.5);
  return {first, second};
}

MeanFieldSolution minimize_meanfield(const ModelParams& params) {
  params.validate();
  MeanFieldSolution best;
  best.energy_per_atom = scaled_energy(0.0, 0.0, params);

  double lo = 0.0;
  double hi = kBetaCeiling;
  double f_lo = reduced_condition(lo, params);
  const double f_hi = reduced_condition(hi, params);
  if (f_lo == 0.0 || f_lo * f_hi > 0.0) return best;

  double beta = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = reduced_condition(beta, params);
    if (f == 0.0) break;
    if ((f < 0.0) == (f_lo < 0.0)) {
      lo = beta;
      f_lo = f;
    } else {
      hi = beta;
    }
    const double slope = reduced_condition_slope(beta, params);
    double next = slope != 0.0 ? beta - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - beta) <= 1e-16 * std::max(1.0, beta)) {
      beta = next;
      break;
    }
    beta = next;
  }

  const double alpha = alpha_of_beta(beta, params);
  const double energy = scaled_energy(alpha, beta, params);
  if (energy < best.energy_per_atom) {
    best.alpha = alpha;
    best.beta = beta;
    best.energy_per_atom = energy;
  }
  best.phase = std::abs(best.alpha) > 1e-10 ? Phase::superradiant : Phase::normal;
  return best;
}

double critical_coupling(const ModelParams& params) {
  params.validate();
  return 0.5 * std::sqrt(params.omega * (params.delta + 2.0 * params.capital_omega));
}

}  // namespace mdicke
