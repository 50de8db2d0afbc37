#include "mdicke/observables.hpp"

#include "mdicke/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdicke {

namespace {

void require_converged(const GroundState& gs) {
  if (!gs.converged) throw std::invalid_argument("observable requested on an unconverged ground state");
}

// Per-block sums: sum_k c^2, sum_k k c^2 and sum_k sqrt(k+1) c_k c_{k+1}.
struct BlockMoments {
  double norm2 = 0.0;
  double number = 0.0;
  double hop = 0.0;
};

BlockMoments block_moments(const CoefficientTable& c, int n) {
  BlockMoments out;
  const int nb = c.sector().boson_dim();
  for (int k = 0; k < nb; ++k) {
    const double v = c(n, k);
    out.norm2 += v * v;
    out.number += k * v * v;
    if (k + 1 < nb) out.hop += std::sqrt(k + 1.0) * v * c(n, k + 1);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

double photon_number(const GroundState& gs) {
  require_converged(gs);
  const auto& c = gs.coefficients;
  double total = 0.0;
  for (int n = 0; n < gs.sector.spin_dim(); ++n) {
    const double g = displacement(gs.params, gs.sector.magnetic(n));
    const BlockMoments b = block_moments(c, n);
    // a = A_n - g_n
    total += b.number - 2.0 * g * b.hop + g * g * b.norm2;
  }
  return std::max(total, 0.0);
}

double coupling_expectation(const GroundState& gs) {
  require_converged(gs);
  double total = 0.0;
  for (int n = 0; n < gs.sector.spin_dim(); ++n) {
    const double m = gs.sector.magnetic(n);
    const double g = displacement(gs.params, m);
    const BlockMoments b = block_moments(gs.coefficients, n);
    total += m * (2.0 * b.hop - 2.0 * g * b.norm2);
  }
  return total;
}

double sz_expectation(const GroundState& gs) {
  double total = 0.0;
  for (int n = 0; n < gs.sector.spin_dim(); ++n) {
    total += gs.sector.magnetic(n) * block_moments(gs.coefficients, n).norm2;
  }
  return total;
}

Eigen::MatrixXd block_overlaps(const GroundState& gs) {
  const int ns = gs.sector.spin_dim();
  const int nb = gs.sector.boson_dim();
  const auto c = gs.coefficients.as_matrix();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(ns, 3);
  for (int n = 0; n < ns; ++n) w(n, 0) = c.col(n).squaredNorm();
  const double step = gs.params.displacement_step();
  for (int d = 1; d <= 2 && d < ns; ++d) {
    // <phi_n|phi_{n+d}> = c_{n+d}^T <l|_{A_{n+d}} |k>_{A_n} c_n
    const Eigen::MatrixXd shifted = displacement_matrix(d * step, nb) * c;
    for (int n = 0; n + d < ns; ++n) w(n, d) = c.col(n + d).dot(shifted.col(n));
  }
  return w;
}

SecondDerivativeCurve energy_second_derivative(std::span<const double> lambda,
                                               std::span<const double> energy,
                                               const SpikeOptions& options) {
  const std::size_t n = lambda.size();
  if (n != energy.size()) throw std::invalid_argument("lambda and energy lengths differ");
  if (n < 3) throw std::invalid_argument("second derivative needs at least three points");
  const double h = (lambda[n - 1] - lambda[0]) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("lambda grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((lambda[i] - lambda[i - 1]) - h) > 1e-6 * h) {
      throw std::invalid_argument("lambda grid is not uniform");
    }
  }

  SecondDerivativeCurve out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.value.assign(n, std::nullopt);
  out.flagged.assign(n, false);

  std::vector<double> magnitude(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = (energy[i + 1] - 2.0 * energy[i] + energy[i - 1]) / (h * h);
    out.value[i] = d2;
    magnitude[i] = std::abs(d2);
  }

  double energy_scale = 1.0;
  for (double e : energy) energy_scale = std::max(energy_scale, std::abs(e));
  const double noise_floor = options.energy_noise_rtol * energy_scale / (h * h);

  const auto w = static_cast<std::size_t>(std::max(options.half_window, 1));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    std::vector<double> local;
    const std::size_t lo = std::max<std::size_t>(1, i > w ? i - w : 1);
    const std::size_t hi = std::min(n - 2, i + w);
    for (std::size_t k = lo; k <= hi; ++k) local.push_back(magnitude[k]);
    const double reference = std::max(median(std::move(local)), noise_floor);
    out.flagged[i] = magnitude[i] > options.spike_factor * reference;
  }

  for (std::size_t i = 0; i < n;) {
    if (!out.flagged[i]) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < n && out.flagged[last + 1]) ++last;
    out.discontinuities.emplace_back(i, last);
    i = last + 1;
  }
  return out;
}

double fidelity(const GroundState& a, const GroundState& b) {
  const auto& pa = a.params;
  const auto& pb = b.params;
  if (pa.omega != pb.omega || pa.delta != pb.delta || pa.capital_omega != pb.capital_omega ||
      pa.n_atoms != pb.n_atoms) {
    throw std::invalid_argument("fidelity: ground states belong to different models");
  }
  if (a.sector.two_j() != b.sector.two_j()) return 0.0;

  const int ns = a.sector.spin_dim();
  const int nba = a.sector.boson_dim();
  const int nbb = b.sector.boson_dim();
  const int size = std::max(nba, nbb);
  const auto ca = a.coefficients.as_matrix();
  const auto cb = b.coefficients.as_matrix();

  double overlap = 0.0;
  for (int n = 0; n < ns; ++n) {
    const double m = a.sector.magnetic(n);
    const double shift = displacement(pa, m) - displacement(pb, m);
    if (shift == 0.0) {
      const int common = std::min(nba, nbb);
      overlap += ca.col(n).head(common).dot(cb.col(n).head(common));
      continue;
    }
    const Eigen::MatrixXd kernel = displacement_matrix(shift, size);
    overlap += ca.col(n).dot(kernel.topLeftCorner(nba, nbb) * cb.col(n));
  }
  return std::abs(overlap);
}

FidelitySusceptibility fidelity_susceptibility(const ModelParams& params, double delta_lambda,
                                               const SolverConfig& config) {
  params.validate();
  if (!(delta_lambda > 0.0) || !std::isfinite(delta_lambda)) {
    throw std::invalid_argument("fidelity_susceptibility: delta_lambda must be positive");
  }
  ModelParams lo_params = params;
  lo_params.lambda = std::max(params.lambda - 0.5 * delta_lambda, 0.0);
  ModelParams hi_params = params;
  hi_params.lambda = lo_params.lambda + delta_lambda;

  GroundState lo = ground_state(lo_params, config);
  GroundState hi = ground_state(hi_params, config);
  if (lo.sector.two_j() != hi.sector.two_j()) {
    throw SectorChangeError("fidelity_susceptibility: ground-state j changes between lambda=" +
                            std::to_string(lo_params.lambda) + " and " +
                            std::to_string(hi_params.lambda));
  }
  const int n_tr = std::max(lo.n_tr_used, hi.n_tr_used);
  if (lo.n_tr_used != n_tr) lo = solve_sector(lo_params, lo.sector.two_j(), n_tr, config);
  if (hi.n_tr_used != n_tr) hi = solve_sector(hi_params, hi.sector.two_j(), n_tr, config);

  const double f = std::min(fidelity(lo, hi), 1.0);
  FidelitySusceptibility out;
  out.fidelity = f;
  out.average = 2.0 * (1.0 - f) / (params.n_atoms * delta_lambda * delta_lambda);
  out.two_j = lo.sector.two_j();
  out.n_tr = n_tr;
  return out;
}

ObservableRecord measure(const GroundState& gs) {
  require_converged(gs);
  ObservableRecord r;
  const double n = gs.params.n_atoms;
  r.energy_per_atom = gs.energy / n;
  r.photons_per_atom = photon_number(gs) / n;
  r.sz_mean = sz_expectation(gs);
  r.two_j = gs.sector.two_j();
  if (gs.params.n_atoms >= 2 && gs.sector.two_j() == gs.params.n_atoms) {
    const double c = concurrence_wootters(two_atom_rdm(gs));
    r.concurrence = c;
    r.scaled_concurrence = (n - 1.0) * c;
  }
  return r;
}

}  // namespace mdicke
