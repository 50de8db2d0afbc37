#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace mdicke {

/// Couplings of one modified Dicke Hamiltonian
///
///   H = omega a^+a + delta S_z + (2 lambda / sqrt(N)) (a^+ + a) S_x
///       + (2 Omega / N) (S^2 - S_z^2)
///
/// All energies share one unit; omega = 1 is the usual convention.
struct ModelParams {
  double omega = 1.0;
  double delta = 1.0;
  double lambda = 0.0;
  double capital_omega = 0.0;
  int n_atoms = 1;

  /// Throws std::invalid_argument unless omega > 0, the other couplings are
  /// non-negative and finite, and n_atoms >= 1.
  void validate() const;

  /// Displacement difference between neighbouring magnetic blocks,
  /// G = 2 lambda / (omega sqrt(N)).
  [[nodiscard]] double displacement_step() const;

  /// Prefactor 2 Omega / N of the interatomic term.
  [[nodiscard]] double pair_coupling() const;

  bool operator==(const ModelParams&) const = default;
};

/// One total-angular-momentum sector with a truncated displaced-Fock space.
///
/// j is carried as 2j so that half-integer spins are exact.  Spin states are
/// indexed 0..2j with magnetic number m = index - j.
class SectorBasis {
 public:
  SectorBasis(int two_j, int n_tr);

  /// Sector j = N/2 - r.
  static SectorBasis from_r(const ModelParams& params, int r, int n_tr);

  [[nodiscard]] int two_j() const { return two_j_; }
  [[nodiscard]] double j() const { return 0.5 * two_j_; }
  [[nodiscard]] int n_tr() const { return n_tr_; }
  [[nodiscard]] int spin_dim() const { return two_j_ + 1; }
  [[nodiscard]] int boson_dim() const { return n_tr_ + 1; }
  [[nodiscard]] std::size_t dimension() const {
    return static_cast<std::size_t>(spin_dim()) * static_cast<std::size_t>(boson_dim());
  }
  [[nodiscard]] double magnetic(int index) const { return index - 0.5 * two_j_; }

  /// Throws std::invalid_argument if j > N/2 or N/2 - j is not integral.
  void check_against(const ModelParams& params) const;

  bool operator==(const SectorBasis&) const = default;

 private:
  int two_j_;
  int n_tr_;
};

/// g_m = 2 lambda m / (omega sqrt(N)).
[[nodiscard]] double displacement(const ModelParams& params, double m);

/// j^+_m = 1/2 sqrt(j(j+1) - m(m+1)); S_+|j,m> = 2 j^+_m |j,m+1>.
[[nodiscard]] double ladder_plus(double j, double m);
/// j^-_m = 1/2 sqrt(j(j+1) - m(m-1)); S_-|j,m> = 2 j^-_m |j,m-1>.
[[nodiscard]] double ladder_minus(double j, double m);

/// Real amplitudes c_{n,k} of sum_n |phi_n>_b |j,n>, with
/// |phi_n>_b = sum_k c_{n,k} |k>_{A_n}.
///
/// Storage is boson-index fastest, so a table maps onto a
/// boson_dim x spin_dim column-major matrix.
class CoefficientTable {
 public:
  explicit CoefficientTable(SectorBasis sector);
  CoefficientTable(SectorBasis sector, std::vector<double> values);

  [[nodiscard]] const SectorBasis& sector() const { return sector_; }

  double& operator()(int n_index, int k) {
    return values_[static_cast<std::size_t>(n_index) * sector_.boson_dim() + k];
  }
  double operator()(int n_index, int k) const {
    return values_[static_cast<std::size_t>(n_index) * sector_.boson_dim() + k];
  }

  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  [[nodiscard]] Eigen::Map<Eigen::MatrixXd> as_matrix() {
    return {values_.data(), sector_.boson_dim(), sector_.spin_dim()};
  }
  [[nodiscard]] Eigen::Map<const Eigen::MatrixXd> as_matrix() const {
    return {values_.data(), sector_.boson_dim(), sector_.spin_dim()};
  }

  [[nodiscard]] double norm() const;
  void normalize();

 private:
  SectorBasis sector_;
  std::vector<double> values_;
};

struct AtomsOnlyGround {
  int two_j = 0;
  double energy = 0.0;
  [[nodiscard]] double j() const { return 0.5 * two_j; }
};

/// Ground state of the cavity-free Hamiltonian delta S_z + (2 Omega/N)(S^2 - S_z^2).
/// Each sector's minimum sits at m = -j with energy (-delta + 2 Omega/N) j, so
/// the ground sector is j = N/2 or the smallest admissible j.  At the
/// degenerate point 2 Omega/N = delta the larger j is returned.  lambda is
/// ignored.
[[nodiscard]] AtomsOnlyGround atoms_only_ground(const ModelParams& params);

}  // namespace mdicke
