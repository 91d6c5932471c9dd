#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "prrp/luprrp.hpp"
#include "prrp/matrix.hpp"

namespace prrp {

enum class TreeShape { binary, flat };

/// Contiguous row blocks of a panel plus the tree height they imply.
struct TreePartition {
  /// (first row, row count) per leaf, in row order.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t height = 0;
  /// Binary only: true when the requested leaf count was reduced so that
  /// every leaf keeps at least b + 1 rows.
  bool shrunk = false;
};

/// Merge topology of tournament pivoting.
///
/// binary: `leaf_count` contiguous leaves, sizes as equal as possible with the
/// larger ones first; nodes are merged pairwise level by level and an odd last
/// node is promoted unmerged. H = ceil(log2 P).
///
/// flat: leaves of `block_rows` rows (0 means b rows; the last leaf may be
/// shorter). The first leaf is reduced, then each further leaf is stacked
/// under the running candidates and reduced again. H = leaves - 1.
/// `leaf_count` > 0 instead splits into that many near-equal leaves.
struct ReductionTree {
  TreeShape shape = TreeShape::binary;
  std::size_t leaf_count = 1;
  std::size_t block_rows = 0;

  static ReductionTree binary(std::size_t leaves);
  static ReductionTree flat(std::size_t block_rows = 0);
  static ReductionTree flat_leaves(std::size_t leaves);

  /// Leaves for an m-row panel of width b. Throws DimensionError if b == 0 or
  /// m == 0, or if a binary tree asks for zero leaves.
  TreePartition partition(std::size_t m, std::size_t b) const;
  std::size_t height(std::size_t m, std::size_t b) const { return partition(m, b).height; }
  std::string to_string() const;
};

enum class NodeSelector { srrqr, gepp };

struct TournamentNode {
  /// "l<level>n<index>" for binary trees, "f<step>" for flat chains.
  std::string path;
  std::size_t level = 0;
  /// Panel row indices presented to this node, in stacking order.
  std::vector<std::size_t> candidates;
  /// The b rows chosen, in local pivot order.
  std::vector<std::size_t> selected;
  std::size_t swaps = 0;
  /// max |R11^-1 R12| at this node (srrqr) or max |multiplier| (gepp); zero
  /// when the node passed its rows through.
  double local_max = 0.0;
  /// A non-root node whose block was rank deficient; its rows were ordered by
  /// column-pivoted QR (srrqr) or GEPP skipping zero pivots (gepp).
  bool rank_deficient = false;
};

struct TournamentTrace {
  /// Nodes in evaluation order; the last one is the root.
  std::vector<TournamentNode> nodes;
  /// Root selection, i.e. the rows moved to the top of the panel.
  std::vector<std::size_t> pivots;
  std::size_t leaves = 0;
  std::size_t height = 0;
  bool shrunk = false;

  std::size_t total_swaps() const;
};

/// Tournament selection of b pivot rows from an m x b panel.
///
/// Nodes holding at most b rows pass them through. Otherwise srrqr runs a
/// strong RRQR of the node block's transpose and gepp runs partial pivoting
/// on the node block. The returned permutation puts the root's rows first in
/// root pivot order, followed by the root's remaining candidates in the
/// root's local order and then every other row in ascending order. With one
/// leaf and srrqr this is exactly the strong RRQR permutation of the panel.
/// Rank deficiency below the root is tolerated (see TournamentNode); at the
/// root, numerical errors are rethrown with the node path attached.
std::pair<PermutationVec, TournamentTrace> tournament_select(const DenseMatrix& panel,
                                                             std::size_t b, double tau,
                                                             const ReductionTree& tree,
                                                             NodeSelector selector);

/// CALU_PRRP: per panel a tournament with strong RRQR, then an unpivoted
/// Householder QR of the permuted panel transpose gives L21 = (R11^-1 R12)^T,
/// followed by the same trailing update and diagonal GEPP as luprrp_factor.
/// Only the node-local multipliers are bounded by tau.
BlockLUFactors caluprrp_factor(const DenseMatrix& a, std::size_t b, double tau,
                               const ReductionTree& tree);

/// CALU baseline: tournament with GEPP at each node; the panel is finished by
/// GEPP of the selected block row and L21 = A21 U11^-1.
BlockLUFactors calu_factor(const DenseMatrix& a, std::size_t b, const ReductionTree& tree);

/// (1 + tau b)^((n / b)(h + 1) - 1).
double growth_bound_caluprrp(std::size_t n, std::size_t b, double tau, std::size_t h);

/// h <= b / (log2 b + log2 tau).
bool growth_condition(std::size_t b, double tau, std::size_t h);

}  // namespace prrp
