#pragma once

#include <Eigen/Dense>

namespace mdicke {

/// Matrix elements <l| exp(alpha (a^+ - a)) |k> for 0 <= l, k < size and real
/// alpha.  Each diagonal l - k = d is an associated Laguerre sequence in k,
/// run through its three-term recurrence with the normalisation folded in.
///
/// For blocks displaced by g and g', the number states of A = a + g and
/// A' = a + g' overlap as <l|_A |k>_{A'} = displacement_matrix(g - g')(l, k).
/// Throws std::domain_error if a non-finite entry is produced.
[[nodiscard]] Eigen::MatrixXd displacement_matrix(double alpha, int size);

/// Overlap kernel between number states of bases displaced by G,
///
///   D_{l,k}(G) = e^{-G^2/2} sum_r (-1)^(k-r) sqrt(l! k!) G^{l+k-2r} / ((l-r)! (k-r)! r!)
///              = <l|D(G)|k>,
///
/// so D(0) is the identity.  Entries stay bounded by one for any size.
[[nodiscard]] Eigen::MatrixXd overlap_kernel(double g, int size);

/// Same kernel summed term by term with log-factorials and explicit sign
/// tracking.  Free of factorial overflow, but the alternating sum cancels
/// badly once G^2 and l, k are both large; the Laguerre form above is the
/// production path.
[[nodiscard]] Eigen::MatrixXd overlap_kernel_series(double g, int size);

}  // namespace mdicke
