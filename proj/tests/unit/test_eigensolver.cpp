#include "mdicke/eigensolver.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mdicke;

namespace {

LinearOperator dense_operator(const Eigen::MatrixXd& m) {
  return [&m](std::span<const double> in, std::span<double> out) {
    Eigen::Map<Eigen::VectorXd>(out.data(), m.rows()) =
        m * Eigen::Map<const Eigen::VectorXd>(in.data(), m.cols());
  };
}

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd a(n, n);
  for (auto& x : a.reshaped()) x = dist(rng);
  return 0.5 * (a + a.transpose());
}

ModelParams params(int n, double lambda, double omega_cap) {
  return ModelParams{.omega = 1.0, .delta = 1.0, .lambda = lambda, .capital_omega = omega_cap,
                     .n_atoms = n};
}

// Minimum over m of the cavity-free energy in sector j of the rotated frame.
double atoms_only_sector_energy(const ModelParams& p, int two_j) {
  const double j = 0.5 * two_j;
  double best = INFINITY;
  for (int i = 0; i <= two_j; ++i) {
    const double m = i - j;
    best = std::min(best, p.delta * m + p.pair_coupling() * (j * (j + 1) - m * m));
  }
  return best;
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_tr_start = 600;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.energy_rtol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.n_tr_step = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("small dense operators") {
  const SolverConfig cfg;
  const Eigen::MatrixXd d = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  const auto r = lanczos_lowest(dense_operator(d), 3, cfg);
  CHECK(r.energy == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(r.vector[1]) - 1.0) < 1e-12);
  CHECK(std::abs(r.vector[0]) < 1e-12);
  CHECK(std::abs(r.vector[2]) < 1e-12);

  Eigen::Matrix2d x;
  x << 0.0, -1.0, -1.0, 0.0;
  const Eigen::MatrixXd xd = x;
  CHECK(lanczos_lowest(dense_operator(xd), 2, cfg).energy == doctest::Approx(-1.0).epsilon(1e-14));

  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 4.5);
  CHECK(lanczos_lowest(dense_operator(one), 1, cfg).energy == 4.5);
}

TEST_CASE("random symmetric matrices against a dense eigensolver") {
  const SolverConfig cfg;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd m = random_symmetric(200, seed);
    const double expected = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()[0];
    const auto r = lanczos_lowest(dense_operator(m), 200, cfg);
    CHECK(std::abs(r.energy - expected) < 1e-10);
    const Eigen::Map<const Eigen::VectorXd> v(r.vector.data(), 200);
    CHECK((m * v - r.energy * v).norm() < 1e-9);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("deterministic for a fixed seed") {
  const Eigen::MatrixXd m = random_symmetric(120, 9);
  SolverConfig cfg;
  const auto a = lanczos_lowest(dense_operator(m), 120, cfg);
  const auto b = lanczos_lowest(dense_operator(m), 120, cfg);
  CHECK(a.energy == b.energy);
  CHECK(a.vector == b.vector);
}

TEST_CASE("iteration budget exhaustion reports the best residual") {
  const Eigen::MatrixXd m = random_symmetric(300, 4);
  SolverConfig cfg;
  cfg.max_lanczos_iters = 5;
  try {
    (void)lanczos_lowest(dense_operator(m), 300, cfg);
    FAIL("expected LanczosError");
  } catch (const LanczosError& e) {
    CHECK(e.best_residual() > 0.0);
    CHECK(std::isfinite(e.best_residual()));
  }
}

TEST_CASE("weak coupling stays near the atoms-only value") {
  const ModelParams p = params(4, 0.01, 0.0);
  const GroundState gs = converge_ground_state(p, 4, SolverConfig{});
  CHECK(gs.converged);
  CHECK(std::abs(gs.energy + 2.0) < 1e-4);
  CHECK(std::abs(gs.energy - testing::brute_force_ground_energy(p, 200)) < 1e-8);
}

TEST_CASE("zero coupling reproduces the atoms-only sector energies") {
  for (double omega_cap : {0.0, 0.4, 1.7, 3.0}) {
    for (int n : {4, 5}) {
      const ModelParams p = params(n, 0.0, omega_cap);
      for (int two_j = n; two_j >= 0; two_j -= 2) {
        const GroundState gs = converge_ground_state(p, two_j, SolverConfig{});
        CHECK(gs.energy == doctest::Approx(atoms_only_sector_energy(p, two_j)).epsilon(1e-10));
      }
      const auto ao = atoms_only_ground(p);
      const GroundState best = ground_state(p, SolverConfig{});
      CHECK(best.sector.two_j() == ao.two_j);
      CHECK(best.energy == doctest::Approx(ao.energy).epsilon(1e-10));
    }
  }
}

TEST_CASE("energy is non-increasing in the boson truncation") {
  const SolverConfig cfg;
  for (double lambda : {0.3, 0.9, 1.6}) {
    const ModelParams p = params(8, lambda, 0.5);
    double prev = INFINITY;
    for (int n_tr = 0; n_tr <= 40; n_tr += 4) {
      const double e = solve_sector(p, 8, n_tr, cfg).energy;
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
  }
}

TEST_CASE("converged energies are stable under a larger truncation") {
  const SolverConfig cfg;
  const ModelParams p = params(16, 0.8, 0.25);
  const GroundState gs = converge_ground_state(p, 16, cfg);
  REQUIRE(gs.converged);
  const double wider = solve_sector(p, 16, gs.n_tr_used + 10, cfg).energy;
  CHECK(std::abs(wider - gs.energy) <= cfg.energy_rtol * std::max(std::abs(gs.energy), p.omega));
}

TEST_CASE("residual and normalisation of converged states") {
  const SolverConfig cfg;
  for (double lambda : {0.2, 0.7, 1.4}) {
    const ModelParams p = params(12, lambda, 0.5);
    const GroundState gs = ground_state(p, cfg);
    REQUIRE(gs.converged);
    CHECK(gs.coefficients.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const HamiltonianAction h(p, gs.sector);
    const CoefficientTable hx = h.apply(gs.coefficients);
    double r2 = 0.0;
    for (std::size_t i = 0; i < hx.values().size(); ++i) {
      const double d = hx.values()[i] - gs.energy * gs.coefficients.values()[i];
      r2 += d * d;
    }
    CHECK(std::sqrt(r2) / std::abs(gs.energy) < 1e-8);
  }
}

TEST_CASE("truncation cap reached is reported as unconverged") {
  SolverConfig cfg;
  cfg.n_tr_start = 2;
  cfg.n_tr_step = 2;
  cfg.n_tr_max = 4;
  const GroundState gs = converge_ground_state(params(4, 1.5, 0.0), 4, cfg);
  CHECK_FALSE(gs.converged);
  CHECK(gs.n_tr_used == 4);
}

TEST_CASE("selected sector") {
  const SolverConfig cfg;
  CHECK(ground_state(params(4, 0.3, 0.25), cfg).sector.two_j() == 4);
  const GroundState weak = ground_state(params(4, 0.05, 3.0), cfg);
  CHECK(weak.sector.two_j() == 0);
  CHECK(std::abs(weak.energy) < 1e-12);
  CHECK(ground_state(params(4, 1.5, 3.0), cfg).sector.two_j() == 4);
}

TEST_CASE("lower bounds hold and pruning keeps the minimum") {
  const SolverConfig cfg;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  std::uniform_real_distribution<double> om(0.0, 4.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + trial % 5;
    const ModelParams p = params(n, lam(rng), om(rng));
    double best = INFINITY;
    int best_two_j = -1;
    for (int two_j = n; two_j >= 0; two_j -= 2) {
      const double e = converge_ground_state(p, two_j, cfg).energy;
      CHECK(sector_energy_lower_bound(p, two_j) <= e);
      if (best_two_j < 0 || e < best - sector_tie_tolerance(best)) {
        best = e;
        best_two_j = two_j;
      }
    }
    const GroundState gs = ground_state(p, cfg);
    CHECK(gs.energy == doctest::Approx(best).epsilon(1e-12));
    CHECK(gs.sector.two_j() == best_two_j);
  }
}

TEST_CASE("brute-force spot checks and variational dominance") {
  const SolverConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  std::uniform_real_distribution<double> om(0.0, 4.0);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const ModelParams p = params(n, lam(rng), om(rng));
      const GroundState gs = ground_state(p, cfg);
      CAPTURE(n);
      CAPTURE(p.lambda);
      CAPTURE(p.capital_omega);
      CHECK(std::abs(gs.energy - testing::brute_force_ground_energy(p, 200)) < 1e-8);
      CHECK(gs.energy <= converge_ground_state(p, n, cfg).energy + 1e-12);
    }
  }
}

TEST_CASE("sector staircase for four atoms") {
  const SolverConfig cfg;
  // Weak interaction: j stays maximal across the sweep.
  for (double lambda : {0.0, 0.5, 1.0, 1.5}) {
    CHECK(ground_state(params(4, lambda, 0.4), cfg).sector.two_j() == 4);
  }
  // 2 Omega / N above delta: j starts at zero and returns to N/2 at strong coupling.
  CHECK(ground_state(params(4, 0.0, 3.0), cfg).sector.two_j() == 0);
  CHECK(ground_state(params(4, 1.5, 3.0), cfg).sector.two_j() == 4);
}

}
