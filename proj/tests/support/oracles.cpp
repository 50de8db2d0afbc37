#include "oracles.hpp"

#include <armadillo>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace mdicke::testing {

namespace {

// Collective spin operators on 2^N, S_k = sum_i sigma_k^i / 2.
struct ProductSpin {
  arma::sp_mat sx;
  arma::sp_mat sz;
  arma::sp_mat s2_minus_sz2;
};

ProductSpin product_spin(int n) {
  const arma::uword dim = arma::uword{1} << n;
  arma::sp_mat sx(dim, dim);
  arma::sp_mat sz(dim, dim);
  arma::sp_mat sy_im(dim, dim);  // S_y = i * sy_im with sy_im real antisymmetric
  for (arma::uword s = 0; s < dim; ++s) {
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      const bool down = (s >> i) & 1u;
      z += down ? -0.5 : 0.5;
      const arma::uword t = s ^ (arma::uword{1} << i);
      sx(t, s) += 0.5;
      // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
      sy_im(t, s) += down ? -0.5 : 0.5;
    }
    sz(s, s) = z;
  }
  ProductSpin out;
  out.sx = sx;
  out.sz = sz;
  // S^2 - S_z^2 = S_x^2 + S_y^2 = S_x^2 - sy_im^2
  out.s2_minus_sz2 = sx * sx - sy_im * sy_im;
  return out;
}

}  // namespace

double brute_force_ground_energy(const ModelParams& p, int cutoff) {
  const ProductSpin spin = product_spin(p.n_atoms);
  const arma::uword nb = cutoff + 1;
  arma::sp_mat number(nb, nb);
  arma::sp_mat quad(nb, nb);
  for (arma::uword l = 0; l < nb; ++l) {
    number(l, l) = static_cast<double>(l);
    if (l + 1 < nb) {
      quad(l, l + 1) = std::sqrt(l + 1.0);
      quad(l + 1, l) = std::sqrt(l + 1.0);
    }
  }
  const arma::uword ds = spin.sz.n_rows;
  const arma::sp_mat id_s = arma::speye<arma::sp_mat>(ds, ds);
  const arma::sp_mat id_b = arma::speye<arma::sp_mat>(nb, nb);
  arma::sp_mat h = p.omega * arma::kron(number, id_s) + p.delta * arma::kron(id_b, spin.sz) +
                   (2.0 * p.lambda / std::sqrt(double(p.n_atoms))) * arma::kron(quad, spin.sx) +
                   (2.0 * p.capital_omega / p.n_atoms) * arma::kron(id_b, spin.s2_minus_sz2);
  arma::vec eval;
  arma::mat evec;
  arma::eigs_opts opts;
  opts.tol = 1e-14;
  opts.maxiter = 100000;
  if (!arma::eigs_sym(eval, evec, h, 1, "sa", opts)) {
    throw std::runtime_error("brute_force_ground_energy: ARPACK failed");
  }
  return eval(0);
}

Eigen::MatrixXd plain_fock_rotated_hamiltonian(const ModelParams& p, int two_j, int cutoff) {
  const int nb = cutoff + 1;
  const int ns = two_j + 1;
  const double j = 0.5 * two_j;
  const double c = 2.0 * p.lambda / std::sqrt(double(p.n_atoms));
  const double pair = 2.0 * p.capital_omega / p.n_atoms;

  // Spin matrices in |j,m>, m ascending.
  Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(ns, ns);
  Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(ns, ns);
  for (int i = 0; i < ns; ++i) {
    const double m = i - j;
    sz(i, i) = m;
    if (i + 1 < ns) sp(i + 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Eigen::MatrixXd sx = 0.5 * (sp + sp.transpose());
  const Eigen::MatrixXd spin = -p.delta * sx +
                               pair * (j * (j + 1) * Eigen::MatrixXd::Identity(ns, ns) - sx * sx);
  Eigen::MatrixXd number = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(nb, nb);
  for (int l = 0; l < nb; ++l) {
    number(l, l) = l;
    if (l + 1 < nb) quad(l, l + 1) = quad(l + 1, l) = std::sqrt(l + 1.0);
  }
  const int dim = nb * ns;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < ns; ++a) {
    for (int b = 0; b < ns; ++b) {
      Eigen::MatrixXd block = spin(a, b) * Eigen::MatrixXd::Identity(nb, nb) + c * sz(a, b) * quad;
      if (a == b) block += p.omega * number;
      h.block(a * nb, b * nb, nb, nb) = block;
    }
  }
  return h;
}

Eigen::VectorXd plain_fock_rotated_ground(const ModelParams& p, int two_j, int cutoff,
                                          double* energy) {
  const Eigen::MatrixXd dense = plain_fock_rotated_hamiltonian(p, two_j, cutoff);
  arma::sp_mat h(dense.rows(), dense.cols());
  for (Eigen::Index c = 0; c < dense.cols(); ++c) {
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      if (dense(r, c) != 0.0) h(r, c) = dense(r, c);
    }
  }
  arma::vec eval;
  arma::mat evec;
  arma::eigs_opts opts;
  opts.tol = 1e-15;
  opts.maxiter = 100000;
  if (!arma::eigs_sym(eval, evec, h, 1, "sa", opts)) {
    throw std::runtime_error("plain_fock_rotated_ground: ARPACK failed");
  }
  if (energy) *energy = eval(0);
  Eigen::VectorXd v(dense.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = evec(i, 0);
  return v;
}

Eigen::MatrixXd truncated_displacement(double alpha, int cutoff) {
  const int nb = cutoff + 1;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(nb, nb);
  for (int l = 0; l + 1 < nb; ++l) {
    gen(l + 1, l) = alpha * std::sqrt(l + 1.0);   // alpha a^+
    gen(l, l + 1) = -alpha * std::sqrt(l + 1.0);  // -alpha a
  }
  return gen.exp();
}

Eigen::MatrixXd displaced_number_states(double g, int n_tr, int cutoff) {
  // A = a + g  =>  |k>_A = D(-g) |k>
  return truncated_displacement(-g, cutoff).leftCols(n_tr + 1);
}

Eigen::MatrixXd dicke_states(int n) {
  const int dim = 1 << n;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, n + 1);
  for (int s = 0; s < dim; ++s) {
    const int downs = __builtin_popcount(static_cast<unsigned>(s));
    const int ups = n - downs;
    out(s, ups) = 1.0;  // column index m + N/2 = number of up spins
  }
  for (int c = 0; c <= n; ++c) out.col(c).normalize();
  return out;
}

Eigen::Matrix4d partial_trace_to_pair(const Eigen::MatrixXd& rho, int n) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  const int dim = 1 << n;
  for (int s = 0; s < dim; ++s) {
    for (int t = 0; t < dim; ++t) {
      if ((s >> 2) != (t >> 2)) continue;  // trace over atoms 2..N-1
      const int a = 2 * (s & 1) + ((s >> 1) & 1);
      const int b = 2 * (t & 1) + ((t >> 1) & 1);
      out(a, b) += rho(s, t);
    }
  }
  return out;
}

Eigen::MatrixXd rotate_each_atom(const Eigen::MatrixXd& rho, int n, const Eigen::Matrix2d& r) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Ones(1, 1);
  // Basis bit i belongs to atom i; build the Kronecker product with atom 0 as the lowest bit.
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd next(u.rows() * 2, u.cols() * 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) next.block(a * u.rows(), b * u.cols(), u.rows(), u.cols()) = r(a, b) * u;
    }
    u = next;
  }
  return u * rho * u.transpose();
}

Eigen::VectorXd plain_fock_state(const GroundState& gs, int cutoff) {
  const int nb = cutoff + 1;
  const SectorBasis& s = gs.sector;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nb * s.spin_dim());
  const auto c = gs.coefficients.as_matrix();
  for (int n = 0; n < s.spin_dim(); ++n) {
    const double g = displacement(gs.params, s.magnetic(n));
    out.segment(n * nb, nb) = displaced_number_states(g, s.n_tr(), cutoff) * c.col(n);
  }
  return out;
}

Eigen::MatrixXd atomic_density_matrix(const GroundState& gs, int cutoff) {
  const int n = gs.params.n_atoms;
  if (gs.sector.two_j() != n) throw std::invalid_argument("atomic_density_matrix: needs j = N/2");
  const int nb = cutoff + 1;
  const Eigen::VectorXd psi = plain_fock_state(gs, cutoff);
  const Eigen::Map<const Eigen::MatrixXd> amp(psi.data(), nb, n + 1);  // boson x m
  const Eigen::MatrixXd product = amp * dicke_states(n).transpose();  // boson x 2^N
  return product.transpose() * product;
}

}  // namespace mdicke::testing
