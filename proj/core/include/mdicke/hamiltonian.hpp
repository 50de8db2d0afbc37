#pragma once

#include "mdicke/model.hpp"

#include <Eigen/Dense>

#include <span>

namespace mdicke {

/// Matrix-free action of the rotated Hamiltonian
///
///   H' = omega a^+a - (delta/2)(S_+ + S_-) + (2 lambda/sqrt(N))(a^+ + a) S_z
///        + (2 Omega/N)(S^2 - S_x^2)
///
/// on one sector in the displaced basis |k>_{A_n} |j,n>, A_n = a + g_n.
/// Block n couples to n, n +- 1 (through the single-step kernel) and n +- 2
/// (through the double-step kernel).  Immutable after construction.
class HamiltonianAction {
 public:
  /// Throws std::invalid_argument for invalid params or j > N/2.
  HamiltonianAction(const ModelParams& params, const SectorBasis& sector);

  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] const SectorBasis& sector() const { return sector_; }
  [[nodiscard]] std::size_t dimension() const { return sector_.dimension(); }

  /// out = H' in.  Both spans have dimension() entries and must not alias.
  void apply(std::span<const double> in, std::span<double> out) const;
  [[nodiscard]] CoefficientTable apply(const CoefficientTable& in) const;

  /// omega (l - g_n^2) + (2 Omega/N) [j(j+1) - (j^-_n)^2 - (j^+_n)^2]
  [[nodiscard]] double diagonal(int n_index, int l) const { return diagonal_(l, n_index); }

  /// <l|_{A_n} |k>_{A_{n-1}} and <l|_{A_n} |k>_{A_{n-2}}.
  [[nodiscard]] const Eigen::MatrixXd& single_step_overlap() const { return overlap1_; }
  [[nodiscard]] const Eigen::MatrixXd& double_step_overlap() const { return overlap2_; }

  /// Dense matrix of the action; meant for small sectors and tests.
  [[nodiscard]] Eigen::MatrixXd to_dense() const;

 private:
  ModelParams params_;
  SectorBasis sector_;
  Eigen::MatrixXd diagonal_;  // boson_dim x spin_dim
  Eigen::VectorXd hop1_;      // hop1_[n]: amplitude between blocks n and n-1
  Eigen::VectorXd hop2_;      // hop2_[n]: amplitude between blocks n and n-2
  Eigen::MatrixXd overlap1_;
  Eigen::MatrixXd overlap2_;
};

/// Parity (-1)^{a^+a} F, F|j,m> = |j,-m>, which commutes with H'.  In the
/// displaced basis it maps c_{n,k} to (-1)^k c_{-n,k}.  `in` and `out` have
/// sector.dimension() entries and must not alias.
void apply_parity(const SectorBasis& sector, std::span<const double> in, std::span<double> out);

}  // namespace mdicke
