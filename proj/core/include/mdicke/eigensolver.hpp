#pragma once

#include "mdicke/hamiltonian.hpp"
#include "mdicke/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mdicke {

struct SolverConfig {
  double energy_rtol = 1e-8;   // stop growing N_tr once successive energies agree
  double lanczos_tol = 1e-10;  // residual tolerance, relative to max(1, |E|)
  int n_tr_start = 8;
  int n_tr_step = 8;
  int n_tr_max = 512;
  int max_lanczos_iters = 2000;
  std::uint64_t seed = 0x5eedULL;  // start-vector seed

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

/// Raised when Lanczos exhausts its iteration budget.
class LanczosError : public std::runtime_error {
 public:
  LanczosError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  [[nodiscard]] double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosResult {
  double energy = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  // ||H x - E x||
  int iterations = 0;     // matrix applications
};

/// Lowest eigenpair of a symmetric operator by Lanczos with full
/// reorthogonalization and explicit restarts from the current Ritz vector.
/// The start vector is pseudo-random, drawn from config.seed.
[[nodiscard]] LanczosResult lanczos_lowest(const LinearOperator& op, std::size_t dim,
                                           const SolverConfig& config);

/// Orthogonal projector applied in place; keeps the Krylov space inside an
/// invariant subspace of the operator.
using Projector = std::function<void(std::span<double>)>;

/// As above, restricted to the range of `project`.
[[nodiscard]] LanczosResult lanczos_lowest(const LinearOperator& op, std::size_t dim,
                                           const SolverConfig& config, const Projector& project);

struct SectorEigenpair {
  double energy = 0.0;
  CoefficientTable vector;
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenpair of one sector.  The search runs in the even subspace of
/// apply_parity, which holds the (non-degenerate) sector ground state; in the
/// superradiant regime this keeps the result off the exponentially close
/// odd partner.
[[nodiscard]] SectorEigenpair lanczos_lowest(const HamiltonianAction& action,
                                             const SolverConfig& config);

struct GroundState {
  ModelParams params;
  SectorBasis sector;
  double energy = 0.0;
  CoefficientTable coefficients;
  bool converged = false;
  int n_tr_used = 0;
  double residual = 0.0;

  [[nodiscard]] double j() const { return sector.j(); }
};

/// Lowest state of sector 2j at a fixed boson truncation.
[[nodiscard]] GroundState solve_sector(const ModelParams& params, int two_j, int n_tr,
                                       const SolverConfig& config);

/// Lowest state of sector 2j, growing N_tr by n_tr_step until successive
/// energies agree to energy_rtol.  Returns converged == false when n_tr_max
/// is reached first.  The j = 0 sector is solved in closed form (E = 0,
/// boson vacuum).
[[nodiscard]] GroundState converge_ground_state(const ModelParams& params, int two_j,
                                                const SolverConfig& config);

/// Rigorous lower bound on the lowest energy of sector 2j: completing the
/// square in the boson leaves the spin-only operator
/// -delta S_x + (2 Omega/N)(S^2 - S_x^2) - (4 lambda^2/(N omega)) S_z^2,
/// whose lowest eigenvalue bounds the sector from below.
[[nodiscard]] double sector_energy_lower_bound(const ModelParams& params, int two_j);

/// Energies closer than this are treated as degenerate when picking j.
[[nodiscard]] double sector_tie_tolerance(double energy);

/// Variational ground state over j = N/2 - r, r = 0..floor(N/2).  Sectors whose
/// lower bound already exceeds the best energy found are skipped.  Ties go to
/// the larger j.  Throws LanczosError if the winning sector's solve fails.
[[nodiscard]] GroundState ground_state(const ModelParams& params, const SolverConfig& config);

}  // namespace mdicke
