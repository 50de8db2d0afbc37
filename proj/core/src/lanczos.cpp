#include "mdicke/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mdicke {

void SolverConfig::validate() const {
  if (!(energy_rtol > 0.0) || !(lanczos_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (n_tr_start < 1 || n_tr_step < 1 || n_tr_max < 1 || max_lanczos_iters < 1) {
    throw std::invalid_argument("solver counts must be positive");
  }
  if (n_tr_start > n_tr_max) throw std::invalid_argument("n_tr_start exceeds n_tr_max");
}

namespace {

constexpr Eigen::Index kMaxBasis = 256;
constexpr int kCheckInterval = 8;

// Uniform in [-1/2, 1/2) from raw generator bits, so the start vector does not
// depend on the standard library's distribution implementation.
Eigen::VectorXd seeded_start(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  return v;
}

void apply_op(const LinearOperator& op, const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  op(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
     std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

}  // namespace

LanczosResult lanczos_lowest(const LinearOperator& op, std::size_t dim, const SolverConfig& config) {
  return lanczos_lowest(op, dim, config, Projector{});
}

LanczosResult lanczos_lowest(const LinearOperator& op, std::size_t dim, const SolverConfig& config,
                             const Projector& project) {
  if (dim == 0) throw std::invalid_argument("lanczos_lowest: empty operator");
  config.validate();
  auto restrict_to_subspace = [&project](Eigen::VectorXd& v) {
    if (project) project(std::span<double>(v.data(), static_cast<std::size_t>(v.size())));
  };

  const auto n = static_cast<Eigen::Index>(dim);
  const Eigen::Index basis_cap = std::min<Eigen::Index>(n, kMaxBasis);

  Eigen::VectorXd start = seeded_start(dim, config.seed);
  restrict_to_subspace(start);
  if (start.norm() == 0.0) throw std::invalid_argument("lanczos_lowest: projector removes the start vector");
  start.normalize();

  Eigen::MatrixXd basis(n, basis_cap);
  Eigen::VectorXd w(n);
  Eigen::VectorXd hx(n);
  std::vector<double> alpha;
  std::vector<double> beta;

  int applications = 0;
  double best_residual = std::numeric_limits<double>::infinity();

  while (true) {
    basis.col(0) = start;
    alpha.clear();
    beta.clear();

    Eigen::Index k = 0;
    double theta = 0.0;
    Eigen::VectorXd ritz;
    for (;;) {
      apply_op(op, basis.col(k), w);
      ++applications;
      restrict_to_subspace(w);
      const double a = basis.col(k).dot(w);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd proj = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * proj;
      }
      const double b = w.norm();
      beta.push_back(b);

      const bool breakdown = b <= 1e-13 * std::max(1.0, std::abs(a));
      const bool full = k + 1 == basis_cap;
      const bool out_of_budget = applications >= config.max_lanczos_iters;
      const bool check = breakdown || full || out_of_budget || (k + 1) % kCheckInterval == 0;

      if (check) {
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k + 1);
        Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()[0];
        ritz = tri.eigenvectors().col(0);
        const double estimate = std::abs(b * ritz[k]);
        if (breakdown || full || out_of_budget ||
            estimate <= 0.1 * config.lanczos_tol * std::max(1.0, std::abs(theta))) {
          break;
        }
      }
      basis.col(k + 1) = w / b;
      ++k;
    }

    Eigen::VectorXd x = basis.leftCols(k + 1) * ritz;
    x.normalize();
    apply_op(op, x, hx);
    ++applications;
    theta = x.dot(hx);
    const double residual = (hx - theta * x).norm();
    best_residual = std::min(best_residual, residual);

    if (residual <= config.lanczos_tol * std::max(1.0, std::abs(theta))) {
      LanczosResult out;
      out.energy = theta;
      out.vector.assign(x.data(), x.data() + n);
      out.residual = residual;
      out.iterations = applications;
      return out;
    }
    if (applications >= config.max_lanczos_iters) {
      throw LanczosError("lanczos_lowest: no convergence within " +
                             std::to_string(config.max_lanczos_iters) + " iterations",
                         best_residual);
    }
    start = x;
  }
}

SectorEigenpair lanczos_lowest(const HamiltonianAction& action, const SolverConfig& config) {
  const LinearOperator op = [&action](std::span<const double> in, std::span<double> out) {
    action.apply(in, out);
  };
  const SectorBasis sector = action.sector();
  std::vector<double> scratch(action.dimension());
  const Projector even = [&sector, &scratch](std::span<double> v) {
    apply_parity(sector, v, scratch);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + scratch[i]);
  };
  LanczosResult res = lanczos_lowest(op, action.dimension(), config, even);
  SectorEigenpair out{res.energy, CoefficientTable(action.sector(), std::move(res.vector)),
                      res.residual, res.iterations};
  out.vector.normalize();
  return out;
}

}  // namespace mdicke
