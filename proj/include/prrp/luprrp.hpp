#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "prrp/elim_stats.hpp"
#include "prrp/matrix.hpp"

namespace prrp {

/// Pi A = L U from a blocked factorization with panel width b. For an m x n
/// input (m >= n) L is m x n unit lower trapezoidal and U is n x n upper
/// triangular. perm is the composition of every panel and diagonal-block
/// permutation.
struct BlockLUFactors {
  PermutationVec perm;
  DenseMatrix l;
  DenseMatrix u;
  std::size_t panel_width = 0;
  ElimStats stats;
};

/// LU with panel rank revealing pivoting. Each panel's pivot rows come from a
/// strong RRQR of the panel transpose, which bounds the block multipliers
/// L21 = (R11^{-1} R12)^T by tau; the trailing matrix is updated with L21,
/// and each b x b diagonal block is finished by GEPP together with its U row.
///
/// The entries stored in L below a diagonal block are L21 * P11^T * L11 (the
/// bounded multipliers composed with the diagonal-block GEPP), so only the
/// per-panel block multipliers carry the tau bound; their maxima are kept in
/// stats.multiplier_max.
///
/// Growth is sampled after each trailing update and after every rank-1 step
/// of the diagonal-block GEPP. Requires m >= n, 1 <= b, tau > 1. A final
/// panel narrower than b is handled by the same path.
BlockLUFactors luprrp_factor(const DenseMatrix& a, std::size_t b, double tau = 2.0);

/// Solves A x = rhs using square block factors.
DenseMatrix luprrp_solve(const BlockLUFactors& f, const DenseMatrix& rhs);

/// x from Pi A = L U: forward then back substitution on Pi rhs.
DenseMatrix lu_solve(const PermutationVec& perm, const DenseMatrix& l, const DenseMatrix& u,
                     const DenseMatrix& rhs);

/// (1 + tau b)^(n / b).
double growth_bound_luprrp(std::size_t n, std::size_t b, double tau);

namespace detail {

/// Pivot choice for one panel of `rows` x `w` entries.
struct PanelChoice {
  /// order[i] = panel row moved to position i; the first w are the pivots.
  std::vector<std::size_t> order;
  /// Bounded multipliers for the rows below the diagonal block, in the
  /// permuted order; empty when the finish is PanelFinish::gepp.
  DenseMatrix l21;
  std::size_t swaps = 0;
  double multiplier_max = 0.0;
  double executed_flops = 0.0;
};

using PanelSelector = std::function<PanelChoice(const DenseMatrix& panel, std::size_t panel_index)>;

enum class PanelFinish {
  /// Trailing update with the selector's L21, then GEPP on the block row.
  prrp,
  /// GEPP on the block row, L = A21 U11^{-1}, then trailing update.
  gepp,
};

/// Shared blocked driver. The selector is only called for panels with more
/// rows than columns; the last square panel goes straight to GEPP. Numerical
/// errors are rethrown with the panel index attached.
BlockLUFactors blocked_lu(const DenseMatrix& a, std::size_t b, const PanelSelector& select,
                          PanelFinish finish);

}  // namespace detail
}  // namespace prrp
