#include "mdicke/observables.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mdicke {

namespace {

constexpr double kConcurrenceRankFloor = 1e-13;

// Collective matrix unit C(a, b) = sum_i |a><b|_i with a, b in {up = 0, down = 1}.
// Acting on |j, m> it gives coefficient(m) |j, m + shift>.
struct CollectiveUnit {
  int shift;
  double coefficient(double j, double m, double half_n) const;
  int a;
  int b;
};

double CollectiveUnit::coefficient(double j, double m, double half_n) const {
  if (a == 0 && b == 0) return half_n + m;
  if (a == 1 && b == 1) return half_n - m;
  if (a == 0) return 2.0 * ladder_plus(j, m);
  return 2.0 * ladder_minus(j, m);
}

CollectiveUnit unit(int a, int b) { return CollectiveUnit{a == b ? 0 : (a == 0 ? 1 : -1), a, b}; }

class SpinExpectation {
 public:
  explicit SpinExpectation(const GroundState& gs)
      : sector_(gs.sector), half_n_(0.5 * gs.params.n_atoms), overlaps_(block_overlaps(gs)) {}

  // <phi_p|phi_q> for spin indices p, q; zero beyond two steps.
  [[nodiscard]] double overlap(int p, int q) const {
    if (p > q) std::swap(p, q);
    const int d = q - p;
    if (p < 0 || q >= sector_.spin_dim() || d > 2) return 0.0;
    return overlaps_(p, d);
  }

  [[nodiscard]] double single(const CollectiveUnit& x) const {
    double total = 0.0;
    for (int n = 0; n < sector_.spin_dim(); ++n) {
      const int target = n + x.shift;
      if (target < 0 || target >= sector_.spin_dim()) continue;
      total += x.coefficient(sector_.j(), sector_.magnetic(n), half_n_) * overlap(target, n);
    }
    return total;
  }

  // <X Y>
  [[nodiscard]] double product(const CollectiveUnit& x, const CollectiveUnit& y) const {
    double total = 0.0;
    const int ns = sector_.spin_dim();
    for (int n = 0; n < ns; ++n) {
      const int mid = n + y.shift;
      if (mid < 0 || mid >= ns) continue;
      const int target = mid + x.shift;
      if (target < 0 || target >= ns) continue;
      const double coef = y.coefficient(sector_.j(), sector_.magnetic(n), half_n_) *
                          x.coefficient(sector_.j(), sector_.magnetic(mid), half_n_);
      total += coef * overlap(target, n);
    }
    return total;
  }

 private:
  SectorBasis sector_;
  double half_n_;
  Eigen::MatrixXd overlaps_;
};

Eigen::Matrix4d spin_flip() {
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s(0, 3) = -1.0;
  s(3, 0) = -1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  return s;
}

}  // namespace

void TwoAtomRDM::validate(double tolerance) const {
  if (!rho.allFinite()) throw std::invalid_argument("two-atom RDM has non-finite entries");
  if (std::abs(rho.trace() - 1.0) > tolerance) {
    throw std::invalid_argument("two-atom RDM trace differs from one");
  }
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > tolerance) {
    throw std::invalid_argument("two-atom RDM is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()[0] < -tolerance) {
    throw std::invalid_argument("two-atom RDM is not positive semidefinite");
  }
}

TwoAtomRDM two_atom_rdm(const GroundState& gs) {
  const int n_atoms = gs.params.n_atoms;
  if (n_atoms < 2) throw std::invalid_argument("two_atom_rdm needs N >= 2");
  if (gs.sector.two_j() != n_atoms) {
    throw std::invalid_argument("two_atom_rdm requires the symmetric sector j = N/2");
  }
  const SpinExpectation ev(gs);
  const double pairs = static_cast<double>(n_atoms) * (n_atoms - 1);

  // rho_{(s1 s2),(t1 t2)} = < |t1><s1|_1 |t2><s2|_2 >, and for symmetric states
  // <E^1_{ab} E^2_{cd}> = (<C_ab C_cd> - delta_{bc} <C_ad>) / (N (N - 1)).
  TwoAtomRDM out;
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      for (int t1 = 0; t1 < 2; ++t1) {
        for (int t2 = 0; t2 < 2; ++t2) {
          double value = ev.product(unit(t1, s1), unit(t2, s2));
          if (s1 == t2) value -= ev.single(unit(t1, s2));
          out.rho(2 * s1 + s2, 2 * t1 + t2) = value / pairs;
        }
      }
    }
  }
  out.rho = 0.5 * (out.rho + out.rho.transpose()).eval();
  return out;
}

double concurrence_wootters(const TwoAtomRDM& rdm) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(rdm.rho);
  const Eigen::Vector4d p = eig.eigenvalues();
  if (p.minCoeff() < -1e-8) {
    throw std::invalid_argument("concurrence_wootters: density matrix has a negative eigenvalue");
  }
  // rho = X X^T over the eigenvalues above rounding level.  The r_i are the
  // singular values of X^T (sigma_y x sigma_y) X, which avoids square roots of
  // rounding noise (C is only Hoelder-1/2 in rho near rank-deficient states).
  const double floor = kConcurrenceRankFloor * std::max(1.0, p.maxCoeff());
  std::vector<int> kept;
  for (int i = 0; i < 4; ++i) {
    if (p[i] > floor) kept.push_back(i);
  }
  Eigen::MatrixXd x(4, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    x.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(kept[c]) * std::sqrt(p[kept[c]]);
  }
  const Eigen::MatrixXd a = x.transpose() * spin_flip() * x;
  std::array<double, 4> r{};
  if (a.size() > 0) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) r[i] = sv[i];
  }
  std::sort(r.begin(), r.end(), std::greater<>());
  return std::max(0.0, r[0] - r[1] - r[2] - r[3]);
}

double scaled_concurrence(const GroundState& gs, ConcurrenceScaling scaling) {
  const double c = concurrence_wootters(two_atom_rdm(gs));
  const double n = gs.params.n_atoms;
  return (scaling == ConcurrenceScaling::n_minus_one ? n - 1.0 : n) * c;
}

}  // namespace mdicke
