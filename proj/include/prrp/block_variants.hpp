#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prrp/elim_stats.hpp"
#include "prrp/matrix.hpp"
#include "prrp/tournament.hpp"

namespace prrp {

/// One recorded transformation. Row indices refer to rows of the original
/// matrix; rows are never moved during these factorizations.
struct BlockEvent {
  enum class Kind {
    /// rows `eliminated` -= d * rows `selected` over columns col0.., after
    /// which their panel columns are exactly zero.
    eliminate,
    /// rows `selected` (in this order) are replaced by L11^-1 times
    /// themselves over columns col0.., with d = L11 unit lower triangular.
    gepp,
  };
  Kind kind = Kind::eliminate;
  std::size_t panel = 0;
  std::size_t col0 = 0;
  std::size_t width = 0;
  /// Tree node path, "l<level>n<index>" or "f<step>"; "diag" for gepp.
  std::string node;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> eliminated;
  DenseMatrix d;
};

/// Result of block parallel or block pairwise LU_PRRP. Applying the events in
/// order to A leaves row perm[i] equal to row i of U for i < n and zeros in
/// every other row; the composed transformation is not lower triangular in
/// general, so no global L is stored.
struct BlockVariantFactors {
  std::vector<BlockEvent> events;
  PermutationVec perm;
  DenseMatrix u;
  std::size_t panel_width = 0;
  ElimStats stats;
};

/// Block parallel LU_PRRP: each panel is split into p leaves (same partition
/// as the binary reduction tree, p shrunk so leaves keep b + 1 rows). Every
/// node runs a strong RRQR on its block transpose, eliminates all but b rows
/// and immediately updates their trailing columns; pairs of surviving b x b
/// blocks are merged level by level and the last block is finished by GEPP.
/// p = 1 performs the same arithmetic as luprrp_factor.
BlockVariantFactors block_parallel_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                          std::size_t p);

/// Block pairwise LU_PRRP: the flat-tree chain. Leaves have `block_rows` rows
/// (0 means b); the survivors of each step are stacked over the next leaf.
BlockVariantFactors block_pairwise_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                          std::size_t block_rows = 0);

/// Shared driver for any reduction tree.
BlockVariantFactors block_variant_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                         const ReductionTree& tree);

/// Re-applies the events to `a` and returns the resulting n x n U.
DenseMatrix replay(const DenseMatrix& a, const BlockVariantFactors& f);

/// Effective L with perm A = L U, built by undoing the events on the unit
/// vectors that mark U's rows. m x n, generally not lower triangular.
DenseMatrix reconstruct_l(const BlockVariantFactors& f, std::size_t m);

/// Solves A x = rhs (square A) by applying the events to rhs and back
/// substituting with U.
DenseMatrix block_variant_solve(const BlockVariantFactors& f, const DenseMatrix& rhs);

}  // namespace prrp
