#pragma once

#include "mdicke/model.hpp"

#include <array>

namespace mdicke {

enum class Phase { normal, superradiant };

struct MeanFieldSolution {
  double alpha = 0.0;  // scaled cavity displacement
  double beta = 0.0;   // scaled atomic displacement, in [0, 1)
  double energy_per_atom = 0.0;
  Phase phase = Phase::normal;
};

/// Leading-order energy per atom in the thermodynamic limit,
///
///   E/N = omega a^2 - 4 lambda a b sqrt(1 - b^2) + delta (b^2 - 1/2)
///         - 2 Omega (b^2 - 1/2)^2 + Omega/2.
///
/// Throws std::domain_error for |beta| > 1.
[[nodiscard]] double scaled_energy(double alpha, double beta, const ModelParams& params);

/// Stationarity residuals (dE/dalpha / 2, -dE/dbeta / 2) of scaled_energy.
[[nodiscard]] std::array<double, 2> equilibrium_residuals(double alpha, double beta,
                                                          const ModelParams& params);

/// Global minimum of scaled_energy.  alpha is eliminated through
/// omega alpha = 2 lambda beta sqrt(1 - beta^2); the remaining equation in beta
/// is bracketed on [0, 1 - 1e-12] and solved by safeguarded Newton, and the
/// candidate is compared with the trivial point (0, 0).  Of the degenerate
/// (alpha, beta) / (-alpha, -beta) pair the beta >= 0 member is returned.
[[nodiscard]] MeanFieldSolution minimize_meanfield(const ModelParams& params);

/// lambda_c = sqrt(omega (delta + 2 Omega)) / 2.
[[nodiscard]] double critical_coupling(const ModelParams& params);

}  // namespace mdicke
