#include "mdicke/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdicke {

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega) || !(omega > 0.0)) {
    throw std::invalid_argument("omega must be positive, got " + std::to_string(omega));
  }
  if (!finite(delta) || delta < 0.0) {
    throw std::invalid_argument("delta must be non-negative, got " + std::to_string(delta));
  }
  if (!finite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("lambda must be non-negative, got " + std::to_string(lambda));
  }
  if (!finite(capital_omega) || capital_omega < 0.0) {
    throw std::invalid_argument("Omega must be non-negative, got " + std::to_string(capital_omega));
  }
  if (n_atoms < 1) {
    throw std::invalid_argument("n_atoms must be >= 1, got " + std::to_string(n_atoms));
  }
}

double ModelParams::displacement_step() const {
  return 2.0 * lambda / (omega * std::sqrt(static_cast<double>(n_atoms)));
}

double ModelParams::pair_coupling() const { return 2.0 * capital_omega / n_atoms; }

SectorBasis::SectorBasis(int two_j, int n_tr) : two_j_(two_j), n_tr_(n_tr) {
  if (two_j < 0) throw std::invalid_argument("2j must be non-negative");
  if (n_tr < 0) throw std::invalid_argument("boson truncation must be non-negative");
}

SectorBasis SectorBasis::from_r(const ModelParams& params, int r, int n_tr) {
  return SectorBasis(params.n_atoms - 2 * r, n_tr);
}

void SectorBasis::check_against(const ModelParams& params) const {
  if (two_j_ > params.n_atoms) {
    throw std::invalid_argument("sector j=" + std::to_string(j()) + " exceeds N/2=" +
                                std::to_string(0.5 * params.n_atoms));
  }
  if ((params.n_atoms - two_j_) % 2 != 0) {
    throw std::invalid_argument("N/2 - j must be an integer");
  }
}

double displacement(const ModelParams& params, double m) {
  return params.displacement_step() * m;
}

double ladder_plus(double j, double m) {
  const double arg = j * (j + 1.0) - m * (m + 1.0);
  return arg > 0.0 ? 0.5 * std::sqrt(arg) : 0.0;
}

double ladder_minus(double j, double m) {
  const double arg = j * (j + 1.0) - m * (m - 1.0);
  return arg > 0.0 ? 0.5 * std::sqrt(arg) : 0.0;
}

CoefficientTable::CoefficientTable(SectorBasis sector)
    : sector_(sector), values_(sector.dimension(), 0.0) {}

CoefficientTable::CoefficientTable(SectorBasis sector, std::vector<double> values)
    : sector_(sector), values_(std::move(values)) {
  if (values_.size() != sector_.dimension()) {
    throw std::invalid_argument("coefficient count does not match sector dimension");
  }
}

double CoefficientTable::norm() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()))
      .norm();
}

void CoefficientTable::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize a zero coefficient table");
  for (double& v : values_) v /= n;
}

AtomsOnlyGround atoms_only_ground(const ModelParams& params) {
  params.validate();
  const double slope = -params.delta + params.pair_coupling();
  AtomsOnlyGround out;
  // E_j = slope * j is linear in j; ties go to j = N/2.
  out.two_j = slope <= 0.0 ? params.n_atoms : params.n_atoms % 2;
  out.energy = slope * out.j();
  return out;
}

}  // namespace mdicke
