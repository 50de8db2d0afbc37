#include "mdicke/observables.hpp"

#include "mdicke/meanfield.hpp"
#include "mdicke/scaling.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace mdicke;

namespace {

ModelParams params(int n, double lambda, double omega_cap) {
  return ModelParams{.omega = 1.0, .delta = 1.0, .lambda = lambda, .capital_omega = omega_cap,
                     .n_atoms = n};
}

SolverConfig tight() {
  SolverConfig c;
  c.energy_rtol = 1e-13;
  c.lanczos_tol = 1e-12;
  return c;
}

std::vector<double> grid(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("photon number vanishes without coupling") {
  for (double omega_cap : {0.0, 1.0, 3.0}) {
    const GroundState gs = ground_state(params(6, 0.0, omega_cap), SolverConfig{});
    CHECK(photon_number(gs) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("photon number and energy against the plain-Fock ground vector") {
  const int cutoff = 200;
  for (double lambda : {0.3, 0.8, 1.5}) {
    const ModelParams p = params(4, lambda, 0.5);
    const GroundState gs = converge_ground_state(p, 4, tight());
    double energy = 0.0;
    const Eigen::VectorXd v = testing::plain_fock_rotated_ground(p, 4, cutoff, &energy);
    CHECK(gs.energy == doctest::Approx(energy).epsilon(1e-11));
    double n_photon = 0.0;
    for (int m = 0; m < 5; ++m) {
      for (int l = 0; l <= cutoff; ++l) n_photon += l * v[m * (cutoff + 1) + l] * v[m * (cutoff + 1) + l];
    }
    CHECK(photon_number(gs) == doctest::Approx(n_photon).epsilon(1e-8));
  }
}

TEST_CASE("photon number follows the mean-field value deep in the superradiant phase") {
  const ModelParams p = params(256, 1.0, 0.0);
  const GroundState gs = ground_state(p, SolverConfig{});
  REQUIRE(gs.converged);
  const double per_atom = photon_number(gs) / p.n_atoms;
  const auto mf = minimize_meanfield(p);
  CHECK(mf.alpha * mf.alpha == doctest::Approx(0.9375).epsilon(1e-10));
  CHECK(std::abs(per_atom - 0.9375) < 0.02 * 0.9375);
}

TEST_CASE("photon number grows through the crossover") {
  double prev = -1.0;
  for (double lambda : grid(0.2, 1.0, 9)) {
    const double n = photon_number(ground_state(params(16, lambda, 0.25), SolverConfig{}));
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("unconverged states are rejected") {
  GroundState gs = ground_state(params(4, 0.5, 0.0), SolverConfig{});
  gs.converged = false;
  CHECK_THROWS_AS((void)photon_number(gs), std::invalid_argument);
  CHECK_THROWS_AS((void)measure(gs), std::invalid_argument);
}

TEST_CASE("Hellmann-Feynman derivative") {
  const SolverConfig cfg = tight();
  const double h = 1e-3;
  for (auto [n, lambda, omega_cap] : {std::tuple{8, 0.7, 0.25}, {4, 1.2, 0.0}, {16, 0.3, 0.5}}) {
    const double e_hi = ground_state(params(n, lambda + h, omega_cap), cfg).energy;
    const double e_lo = ground_state(params(n, lambda - h, omega_cap), cfg).energy;
    const GroundState gs = ground_state(params(n, lambda, omega_cap), cfg);
    const double numeric = (e_hi - e_lo) / (2.0 * h);
    const double analytic = 2.0 / std::sqrt(double(n)) * coupling_expectation(gs);
    CAPTURE(n);
    CHECK(numeric == doctest::Approx(analytic).epsilon(1e-5));
  }
}

TEST_CASE("second differences") {
  const auto lam = grid(-1.0, 2.0, 31);
  std::vector<double> e;
  for (double x : lam) e.push_back(x * x);
  const auto d2 = energy_second_derivative(lam, e);
  CHECK_FALSE(d2.value.front().has_value());
  CHECK_FALSE(d2.value.back().has_value());
  for (std::size_t i = 1; i + 1 < lam.size(); ++i) CHECK(*d2.value[i] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d2.discontinuities.empty());

  std::vector<double> uneven = {0.0, 0.1, 0.3, 0.4};
  CHECK_THROWS_AS((void)energy_second_derivative(uneven, std::vector<double>(4, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)energy_second_derivative(std::vector<double>{0.0, 1.0},
                                                 std::vector<double>{0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("spike flags at a level crossing") {
  const auto lam = grid(0.0, 1.5, 61);
  std::vector<double> e3;
  std::vector<double> e025;
  std::vector<int> j3;
  for (double x : lam) {
    const GroundState a = ground_state(params(4, x, 3.0), SolverConfig{});
    e3.push_back(a.energy);
    j3.push_back(a.sector.two_j());
    e025.push_back(ground_state(params(4, x, 0.25), SolverConfig{}).energy);
  }
  const auto jumpy = energy_second_derivative(lam, e3);
  REQUIRE(jumpy.discontinuities.size() == 1);
  const auto [first, last] = jumpy.discontinuities.front();
  std::size_t jump = 0;
  for (std::size_t i = 1; i < j3.size(); ++i) {
    if (j3[i] != j3[i - 1]) jump = i;
  }
  CHECK(jump >= first);
  CHECK(jump <= last + 1);
  CHECK(*jumpy.value[first] < 0.0);

  const auto smooth = energy_second_derivative(lam, e025);
  CHECK(smooth.discontinuities.empty());
}

TEST_CASE("fidelity basics") {
  const SolverConfig cfg;
  const GroundState a = ground_state(params(4, 0.05, 3.0), cfg);
  const GroundState b = ground_state(params(4, 1.5, 3.0), cfg);
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(b, b) == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(a.sector.two_j() != b.sector.two_j());
  CHECK(fidelity(a, b) == 0.0);
  const GroundState c = ground_state(params(4, 1.5, 2.9), cfg);
  CHECK_THROWS_AS((void)fidelity(b, c), std::invalid_argument);
}

TEST_CASE("fidelity against plain-Fock overlaps") {
  const int cutoff = 200;
  const SolverConfig cfg = tight();
  for (auto [l1, l2] : {std::pair{0.3, 0.301}, {0.45, 0.5}, {1.0, 1.3}}) {
    const ModelParams p1 = params(4, l1, 0.0);
    const ModelParams p2 = params(4, l2, 0.0);
    const GroundState a = converge_ground_state(p1, 4, cfg);
    const GroundState b = converge_ground_state(p2, 4, cfg);
    const Eigen::VectorXd va = testing::plain_fock_rotated_ground(p1, 4, cutoff);
    const Eigen::VectorXd vb = testing::plain_fock_rotated_ground(p2, 4, cutoff);
    CHECK(std::abs(fidelity(a, b) - std::abs(va.dot(vb))) < 1e-8);
    // The library state expanded in plain Fock reproduces the oracle vector.
    CHECK(std::abs(std::abs(testing::plain_fock_state(a, cutoff).dot(va)) - 1.0) < 1e-10);
  }
}

TEST_CASE("fidelity stays in [0, 1]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  std::uniform_real_distribution<double> om(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const double w = om(rng);
    const GroundState a = ground_state(params(n, lam(rng), w), SolverConfig{});
    const GroundState b = ground_state(params(n, lam(rng), w), SolverConfig{});
    const double f = fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("fidelity susceptibility") {
  const SolverConfig cfg;
  // Deep normal phase: small and flat.
  const double a = fidelity_susceptibility(params(16, 0.05, 0.0), 1e-3, cfg).average;
  const double b = fidelity_susceptibility(params(16, 0.1, 0.0), 1e-3, cfg).average;
  CHECK(a >= 0.0);
  CHECK(a < 0.05);
  CHECK(std::abs(a - b) < 0.1 * a);

  // Step robustness away from the peak.
  for (double lambda : {0.25, 0.9}) {
    const double full = fidelity_susceptibility(params(16, lambda, 0.25), 1e-3, cfg).average;
    const double half = fidelity_susceptibility(params(16, lambda, 0.25), 5e-4, cfg).average;
    CHECK(std::abs(full - half) < 0.005 * full);
  }

  CHECK_THROWS_AS((void)fidelity_susceptibility(params(4, 0.5, 0.0), 0.0, cfg), std::invalid_argument);
}

TEST_CASE("fidelity susceptibility refuses a sector change") {
  const SolverConfig cfg;
  // Locate the j jump of N = 4, Omega = 3 by bisection.
  double lo = 0.0;
  double hi = 1.5;
  const int j_lo = ground_state(params(4, lo, 3.0), cfg).sector.two_j();
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ground_state(params(4, mid, 3.0), cfg).sector.two_j() == j_lo ? lo : hi) = mid;
  }
  CHECK_THROWS_AS((void)fidelity_susceptibility(params(4, 0.5 * (lo + hi), 3.0), 1e-3, cfg),
                  SectorChangeError);
}

TEST_CASE("FS peak approaches the critical coupling and sharpens with size") {
  const SolverConfig cfg;
  for (double omega_cap : {0.0, 0.25, 0.5}) {
    const double lc = critical_coupling(params(1, 0.0, omega_cap));
    double prev_height = 0.0;
    double prev_offset = INFINITY;
    for (int n : {16, 32, 64}) {
      const auto lam = grid(lc - 0.05, lc + 0.25, 61);
      std::vector<double> chi;
      for (double x : lam) chi.push_back(fidelity_susceptibility(params(n, x, omega_cap), 1e-3, cfg).average);
      const FsPeak peak = locate_fs_peak(lam, chi);
      CAPTURE(omega_cap);
      CAPTURE(n);
      CAPTURE(peak.lambda_max);
      CHECK(peak.chi_max > prev_height);
      CHECK(std::abs(peak.lambda_max - lc) < prev_offset);
      prev_height = peak.chi_max;
      prev_offset = std::abs(peak.lambda_max - lc);
    }
  }
}

TEST_CASE("measure fills per-state fields") {
  const GroundState gs = ground_state(params(6, 0.6, 0.25), SolverConfig{});
  const ObservableRecord r = measure(gs);
  CHECK(r.energy_per_atom == doctest::Approx(gs.energy / 6.0));
  CHECK(r.photons_per_atom >= 0.0);
  CHECK(r.two_j == 6);
  REQUIRE(r.concurrence.has_value());
  CHECK(*r.scaled_concurrence == doctest::Approx(5.0 * *r.concurrence));
  CHECK_FALSE(r.fs_avg.has_value());
  CHECK_FALSE(r.d2E_dlambda2.has_value());

  const ObservableRecord singlet = measure(ground_state(params(4, 0.05, 3.0), SolverConfig{}));
  CHECK_FALSE(singlet.concurrence.has_value());
}

}
