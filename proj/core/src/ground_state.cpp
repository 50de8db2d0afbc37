#include "mdicke/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace mdicke {

namespace {

GroundState singlet_ground_state(const ModelParams& params, int n_tr) {
  const SectorBasis sector(0, n_tr);
  CoefficientTable c(sector);
  c(0, 0) = 1.0;
  return GroundState{params, sector, 0.0, std::move(c), true, n_tr, 0.0};
}

// Lowest eigenvalue of a symmetric tridiagonal matrix.
double lowest_tridiagonal(const std::vector<double>& diag, const std::vector<double>& off) {
  if (diag.empty()) return std::numeric_limits<double>::infinity();
  if (diag.size() == 1) return diag[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(
      Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size())),
      Eigen::Map<const Eigen::VectorXd>(off.data(), static_cast<Eigen::Index>(off.size())),
      Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

}  // namespace

GroundState solve_sector(const ModelParams& params, int two_j, int n_tr, const SolverConfig& config) {
  params.validate();
  config.validate();
  const SectorBasis sector(two_j, n_tr);
  sector.check_against(params);
  if (two_j == 0) return singlet_ground_state(params, n_tr);

  const HamiltonianAction action(params, sector);
  SectorEigenpair pair = lanczos_lowest(action, config);
  return GroundState{params, sector, pair.energy, std::move(pair.vector), true, n_tr, pair.residual};
}

GroundState converge_ground_state(const ModelParams& params, int two_j, const SolverConfig& config) {
  config.validate();
  if (two_j == 0) {
    SectorBasis(0, 0).check_against(params);
    return singlet_ground_state(params, 0);
  }

  int n_tr = config.n_tr_start;
  GroundState prev = solve_sector(params, two_j, n_tr, config);
  while (n_tr + config.n_tr_step <= config.n_tr_max) {
    n_tr += config.n_tr_step;
    GroundState cur = solve_sector(params, two_j, n_tr, config);
    const double scale = std::max(std::abs(cur.energy), params.omega);
    if (std::abs(cur.energy - prev.energy) <= config.energy_rtol * scale) {
      cur.converged = true;
      return cur;
    }
    prev = std::move(cur);
  }
  prev.converged = false;
  return prev;
}

double sector_energy_lower_bound(const ModelParams& params, int two_j) {
  params.validate();
  SectorBasis(two_j, 0).check_against(params);
  if (two_j == 0) return 0.0;

  const double j = 0.5 * two_j;
  const double casimir = j * (j + 1.0);
  const double pair = params.pair_coupling();
  const double squeeze = 4.0 * params.lambda * params.lambda / (params.n_atoms * params.omega);

  // Quantisation axis along x: S_x diagonal, S_z^2 couples mu to mu +- 2, so
  // the matrix splits into two tridiagonal chains.
  double lowest = std::numeric_limits<double>::infinity();
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<double> diag;
    std::vector<double> off;
    for (int i = parity; i <= two_j; i += 2) {
      const double mu = i - j;
      const double transverse = casimir - mu * mu;
      diag.push_back(-params.delta * mu + pair * transverse - 0.5 * squeeze * transverse);
      if (i + 2 <= two_j) {
        const double prod = (j - mu) * (j + mu + 1.0) * (j - mu - 1.0) * (j + mu + 2.0);
        off.push_back(-0.25 * squeeze * std::sqrt(std::max(prod, 0.0)));
      }
    }
    lowest = std::min(lowest, lowest_tridiagonal(diag, off));
  }
  return lowest - 1e-9 * std::max(1.0, std::abs(lowest));
}

double sector_tie_tolerance(double energy) { return 1e-10 * std::max(1.0, std::abs(energy)); }

GroundState ground_state(const ModelParams& params, const SolverConfig& config) {
  params.validate();
  config.validate();

  std::vector<int> sectors;
  for (int two_j = params.n_atoms; two_j >= 0; two_j -= 2) sectors.push_back(two_j);
  std::vector<double> bounds(sectors.size());
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    bounds[i] = sector_energy_lower_bound(params, sectors[i]);
  }
  std::vector<std::size_t> order(sectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bounds[a] < bounds[b]; });

  std::optional<GroundState> best;
  for (std::size_t idx : order) {
    if (best && bounds[idx] > best->energy + sector_tie_tolerance(best->energy)) continue;
    GroundState gs = converge_ground_state(params, sectors[idx], config);
    if (!best) {
      best = std::move(gs);
      continue;
    }
    const double tol = sector_tie_tolerance(best->energy);
    if (gs.energy < best->energy - tol ||
        (std::abs(gs.energy - best->energy) <= tol && gs.sector.two_j() > best->sector.two_j())) {
      best = std::move(gs);
    }
  }
  return std::move(*best);
}

}  // namespace mdicke
