#pragma once

#include "mdicke/eigensolver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mdicke {

/// <a^+ a> in a converged ground state.  Divide by N for the per-atom order
/// parameter.  Throws std::invalid_argument for an unconverged state.
[[nodiscard]] double photon_number(const GroundState& gs);

/// <(a^+ + a) S_z> in the rotated frame.  By Hellmann-Feynman,
/// dE/dlambda = (2/sqrt(N)) <(a^+ + a) S_z>.
[[nodiscard]] double coupling_expectation(const GroundState& gs);

/// <S_z> in the rotated frame.
[[nodiscard]] double sz_expectation(const GroundState& gs);

/// Spin-block overlaps <phi_n|phi_{n+d}> for d = 0, 1, 2, returned as a
/// spin_dim x 3 matrix (column d; entries past the edge are zero).
[[nodiscard]] Eigen::MatrixXd block_overlaps(const GroundState& gs);

struct SpikeOptions {
  double spike_factor = 10.0;  // flag |d2| above this multiple of the local median
  int half_window = 4;         // local median over i - half_window .. i + half_window
  double energy_noise_rtol = 1e-9;
};

struct SecondDerivativeCurve {
  std::vector<double> lambda;
  std::vector<std::optional<double>> value;  // empty at the two endpoints
  std::vector<bool> flagged;
  /// Contiguous runs of flagged points, as [first, last] index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> discontinuities;
};

/// Central second differences of E(lambda) on a uniform grid, with spike
/// detection for first-order jumps.  A point is flagged when |d2| exceeds
/// spike_factor times both the local median of |d2| and a floor set by the
/// energy noise level.  Throws std::invalid_argument for fewer than three
/// points or a non-uniform grid.
[[nodiscard]] SecondDerivativeCurve energy_second_derivative(std::span<const double> lambda,
                                                             std::span<const double> energy,
                                                             const SpikeOptions& options = {});

/// |<psi_1|psi_2>| for two ground states of the same (omega, delta, Omega, N)
/// and possibly different lambda.  States in different j sectors are
/// orthogonal.  Throws std::invalid_argument on mismatched couplings.
[[nodiscard]] double fidelity(const GroundState& a, const GroundState& b);

/// Raised when the ground-state sector changes inside a fidelity step.
class SectorChangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FidelitySusceptibility {
  double average = 0.0;   // chi_F / N
  double fidelity = 1.0;  // F(lambda - d/2, lambda + d/2)
  int two_j = 0;
  int n_tr = 0;
};

/// Average fidelity susceptibility chi_F / N = 2 (1 - F) / (N dlambda^2) from
/// ground states at lambda -+ dlambda/2, both solved at a common truncation.
/// Near lambda = 0 the pair is shifted to [0, dlambda].  Throws
/// SectorChangeError if j differs between the two points.
[[nodiscard]] FidelitySusceptibility fidelity_susceptibility(const ModelParams& params,
                                                             double delta_lambda,
                                                             const SolverConfig& config);

/// Two-atom reduced density matrix in the product basis
/// {up-up, up-down, down-up, down-down}.
struct TwoAtomRDM {
  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();

  /// Throws std::invalid_argument unless the trace is one, the matrix is
  /// symmetric, and no eigenvalue lies below -tolerance.
  void validate(double tolerance = 1e-10) const;
};

/// Reduced state of two atoms after tracing out the cavity and the other
/// N - 2 atoms, assembled from collective spin moments of the full state.
/// Requires the symmetric sector j = N/2 and N >= 2 (std::invalid_argument
/// otherwise).  Expressed in the rotated frame; pairwise concurrence does not
/// depend on that choice because the rotation acts identically on each atom.
[[nodiscard]] TwoAtomRDM two_atom_rdm(const GroundState& gs);

/// Wootters concurrence max(0, r1 - r2 - r3 - r4), r_i the square roots of the
/// eigenvalues of rho (sigma_y x sigma_y) rho^* (sigma_y x sigma_y) in
/// descending order.  Eigenvalues of rho below 1e-13 are treated as exact
/// zeros.  Throws std::invalid_argument if rho has an eigenvalue below -1e-8.
[[nodiscard]] double concurrence_wootters(const TwoAtomRDM& rdm);

enum class ConcurrenceScaling { n_minus_one, n };

/// (N - 1) C by default; N C on request.
[[nodiscard]] double scaled_concurrence(const GroundState& gs,
                                        ConcurrenceScaling scaling = ConcurrenceScaling::n_minus_one);

struct ObservableRecord {
  double energy_per_atom = 0.0;
  std::optional<double> d2E_dlambda2;
  double photons_per_atom = 0.0;
  double sz_mean = 0.0;
  int two_j = 0;
  std::optional<double> fs_avg;
  std::optional<double> concurrence;
  std::optional<double> scaled_concurrence;
};

/// Per-state observables.  Concurrence fields are filled only in the
/// symmetric sector with N >= 2; d2E and FS need neighbouring solves and are
/// left to the caller.
[[nodiscard]] ObservableRecord measure(const GroundState& gs);

}  // namespace mdicke
