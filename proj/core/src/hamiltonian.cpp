#include "mdicke/hamiltonian.hpp"

#include "mdicke/kernel.hpp"

#include <stdexcept>

namespace mdicke {

HamiltonianAction::HamiltonianAction(const ModelParams& params, const SectorBasis& sector)
    : params_(params), sector_(sector) {
  params_.validate();
  sector_.check_against(params_);

  const int nb = sector_.boson_dim();
  const int ns = sector_.spin_dim();
  const double j = sector_.j();
  const double pair = params_.pair_coupling();
  const double casimir = j * (j + 1.0);

  diagonal_.resize(nb, ns);
  hop1_ = Eigen::VectorXd::Zero(ns);
  hop2_ = Eigen::VectorXd::Zero(ns);
  for (int n = 0; n < ns; ++n) {
    const double m = sector_.magnetic(n);
    const double g = displacement(params_, m);
    const double jm = ladder_minus(j, m);
    const double jp = ladder_plus(j, m);
    const double spin_diag = pair * (casimir - jm * jm - jp * jp);
    for (int l = 0; l < nb; ++l) diagonal_(l, n) = params_.omega * (l - g * g) + spin_diag;
    if (n >= 1) hop1_[n] = -params_.delta * jm;
    if (n >= 2) hop2_[n] = -pair * jm * ladder_minus(j, m - 1.0);
  }

  const double step = params_.displacement_step();
  overlap1_ = displacement_matrix(step, nb);
  overlap2_ = displacement_matrix(2.0 * step, nb);
}

void HamiltonianAction::apply(std::span<const double> in, std::span<double> out) const {
  const auto nb = sector_.boson_dim();
  const auto ns = sector_.spin_dim();
  if (in.size() != dimension() || out.size() != dimension()) {
    throw std::invalid_argument("HamiltonianAction::apply: dimension mismatch");
  }
  Eigen::Map<const Eigen::MatrixXd> x(in.data(), nb, ns);
  Eigen::Map<Eigen::MatrixXd> y(out.data(), nb, ns);

  y.noalias() = diagonal_.cwiseProduct(x);

  auto add_hops = [&](const Eigen::MatrixXd& overlap, const Eigen::VectorXd& hop, int step) {
    if (ns <= step || hop.cwiseAbs().maxCoeff() == 0.0) return;
    // Block (n, n-step) is hop[n] * overlap; block (n-step, n) its transpose.
    const Eigen::MatrixXd down = overlap * x.leftCols(ns - step);
    const Eigen::MatrixXd up = overlap.transpose() * x.rightCols(ns - step);
    for (int n = step; n < ns; ++n) {
      y.col(n).noalias() += hop[n] * down.col(n - step);
      y.col(n - step).noalias() += hop[n] * up.col(n - step);
    }
  };
  add_hops(overlap1_, hop1_, 1);
  add_hops(overlap2_, hop2_, 2);
}

CoefficientTable HamiltonianAction::apply(const CoefficientTable& in) const {
  if (!(in.sector() == sector_)) throw std::invalid_argument("coefficient table from another sector");
  CoefficientTable out(sector_);
  apply(in.values(), out.values());
  return out;
}

Eigen::MatrixXd HamiltonianAction::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd h(dim, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd col(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    e[i] = 1.0;
    apply(std::span<const double>(e.data(), dim), std::span<double>(col.data(), dim));
    h.col(i) = col;
    e[i] = 0.0;
  }
  return h;
}

void apply_parity(const SectorBasis& sector, std::span<const double> in, std::span<double> out) {
  if (in.size() != sector.dimension() || out.size() != sector.dimension()) {
    throw std::invalid_argument("apply_parity: dimension mismatch");
  }
  const int ns = sector.spin_dim();
  const auto nb = static_cast<std::size_t>(sector.boson_dim());
  for (int n = 0; n < ns; ++n) {
    const auto src = static_cast<std::size_t>(n) * nb;
    const auto dst = static_cast<std::size_t>(ns - 1 - n) * nb;
    for (std::size_t k = 0; k < nb; ++k) out[dst + k] = (k % 2) ? -in[src + k] : in[src + k];
  }
}

}  // namespace mdicke
