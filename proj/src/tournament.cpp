#include "prrp/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prrp/blas.hpp"
#include "prrp/error.hpp"
#include "prrp/gepp.hpp"
#include "prrp/pivoted_qr.hpp"

namespace prrp {
namespace {

std::size_t ceil_log2(std::size_t p) {
  std::size_t h = 0;
  while ((std::size_t{1} << h) < p) ++h;
  return h;
}

std::vector<std::pair<std::size_t, std::size_t>> even_split(std::size_t m, std::size_t parts) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t base = m / parts;
  const std::size_t extra = m % parts;
  std::size_t start = 0;
  for (std::size_t k = 0; k < parts; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    out.emplace_back(start, len);
    start += len;
  }
  return out;
}

DenseMatrix gather_rows(const DenseMatrix& panel, const std::vector<std::size_t>& idx) {
  DenseMatrix out(idx.size(), panel.cols());
  for (std::size_t j = 0; j < panel.cols(); ++j)
    for (std::size_t i = 0; i < idx.size(); ++i) out(i, j) = panel(idx[i], j);
  return out;
}

struct NodeResult {
  // Candidates in local pivot order; the first b are selected.
  std::vector<std::size_t> ordered;
  std::size_t swaps = 0;
  double local_max = 0.0;
  double flops = 0.0;
  bool deficient = false;
};

// Below the root a rank-deficient node is not fatal: the rows it keeps still
// span its row space, so only the root decides whether the panel is singular.
NodeResult reduce_node(const DenseMatrix& panel, const std::vector<std::size_t>& cand,
                       std::size_t b, double tau, NodeSelector selector, bool root) {
  NodeResult r;
  if (cand.size() <= b) {
    r.ordered = cand;
    return r;
  }
  const DenseMatrix block = gather_rows(panel, cand);
  std::vector<std::size_t> local;
  if (selector == NodeSelector::srrqr) {
    try {
      SrrqrResult s = strong_rrqr(block.transpose(), b, tau, FormQ::no);
      local.assign(s.qr.perm.map().begin(), s.qr.perm.map().end());
      r.swaps = s.swap_count;
      r.local_max = s.max_entry;
      r.flops = s.executed_flops;
    } catch (const NumericalError& e) {
      // An all-zero block reaches the triangular solve instead of the rank test.
      const bool deficient = dynamic_cast<const RankDeficiencyError*>(&e) != nullptr ||
                             dynamic_cast<const SingularError*>(&e) != nullptr;
      if (root || !deficient) throw;
      const QRFactors qr = qr_column_pivoting(block.transpose(), FormQ::no);
      local.assign(qr.perm.map().begin(), qr.perm.map().end());
      r.deficient = true;
      r.local_max = INFINITY;
    }
  } else {
    DenseMatrix w = block;
    kernels::gepp_inplace(w.view(), b, local, !root);
    for (std::size_t k = 0; k < b && !r.deficient; ++k) r.deficient = w(k, k) == 0.0;
    r.local_max = kernels::max_abs(w.view().sub(b, 0, w.rows() - b, b));
    for (std::size_t k = 0; k < b; ++k)
      r.flops += double(w.rows() - k - 1) * (1.0 + 2.0 * double(b - k - 1));
  }
  r.ordered.resize(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) r.ordered[i] = cand[local[i]];
  return r;
}

}  // namespace

ReductionTree ReductionTree::binary(std::size_t leaves) {
  ReductionTree t;
  t.shape = TreeShape::binary;
  t.leaf_count = leaves;
  return t;
}

ReductionTree ReductionTree::flat(std::size_t block_rows) {
  ReductionTree t;
  t.shape = TreeShape::flat;
  t.leaf_count = 0;
  t.block_rows = block_rows;
  return t;
}

ReductionTree ReductionTree::flat_leaves(std::size_t leaves) {
  ReductionTree t;
  t.shape = TreeShape::flat;
  t.leaf_count = leaves;
  return t;
}

TreePartition ReductionTree::partition(std::size_t m, std::size_t b) const {
  if (m == 0 || b == 0) throw DimensionError("reduction tree: need m >= 1 and b >= 1");
  TreePartition part;
  if (shape == TreeShape::binary) {
    if (leaf_count == 0) throw DimensionError("reduction tree: binary tree needs at least one leaf");
    const std::size_t fit = std::max<std::size_t>(1, m / (b + 1));
    std::size_t p = leaf_count;
    if (p > fit) {
      p = fit;
      part.shrunk = true;
    }
    part.blocks = even_split(m, p);
    part.height = ceil_log2(p);
    return part;
  }
  if (leaf_count > 0) {
    part.blocks = even_split(m, std::min(leaf_count, m));
  } else {
    const std::size_t rows = block_rows == 0 ? b : block_rows;
    for (std::size_t s = 0; s < m; s += rows) part.blocks.emplace_back(s, std::min(rows, m - s));
  }
  part.height = part.blocks.size() - 1;
  return part;
}

std::string ReductionTree::to_string() const {
  if (shape == TreeShape::binary) return "binary(P=" + std::to_string(leaf_count) + ")";
  if (leaf_count > 0) return "flat(P=" + std::to_string(leaf_count) + ")";
  return "flat(rows=" + (block_rows == 0 ? std::string("b") : std::to_string(block_rows)) + ")";
}

std::size_t TournamentTrace::total_swaps() const {
  std::size_t s = 0;
  for (const auto& n : nodes) s += n.swaps;
  return s;
}

namespace {

struct SelectOutcome {
  PermutationVec perm;
  TournamentTrace trace;
  double flops = 0.0;
};

SelectOutcome run_tournament(const DenseMatrix& panel, std::size_t b, double tau,
                             const ReductionTree& tree, NodeSelector selector) {
  const std::size_t m = panel.rows();
  if (b == 0 || panel.cols() != b) throw DimensionError("tournament_select: panel must be m x b");
  if (m < b) throw DimensionError("tournament_select: panel has fewer rows than columns");
  if (selector == NodeSelector::srrqr && !(tau > 1.0))
    throw DimensionError("tournament_select: tau must exceed 1");

  const TreePartition part = tree.partition(m, b);
  SelectOutcome out;
  TournamentTrace& tr = out.trace;
  tr.leaves = part.blocks.size();
  tr.height = part.height;
  tr.shrunk = part.shrunk;

  std::vector<std::size_t> root_order;
  auto visit = [&](std::string path, std::size_t level, std::vector<std::size_t> cand, bool root) {
    NodeResult r;
    try {
      r = reduce_node(panel, cand, b, tau, selector, root);
    } catch (NumericalError& e) {
      e.prepend_location(path);
      throw;
    }
    TournamentNode node;
    node.path = std::move(path);
    node.level = level;
    node.candidates = std::move(cand);
    node.selected.assign(r.ordered.begin(),
                         r.ordered.begin() + static_cast<std::ptrdiff_t>(std::min(b, r.ordered.size())));
    node.swaps = r.swaps;
    node.local_max = r.local_max;
    node.rank_deficient = r.deficient;
    out.flops += r.flops;
    root_order = std::move(r.ordered);
    tr.nodes.push_back(std::move(node));
    return tr.nodes.back().selected;
  };
  auto block_rows = [](std::pair<std::size_t, std::size_t> blk) {
    std::vector<std::size_t> v(blk.second);
    std::iota(v.begin(), v.end(), blk.first);
    return v;
  };

  if (tree.shape == TreeShape::binary) {
    std::vector<std::vector<std::size_t>> level_sets;
    for (std::size_t k = 0; k < part.blocks.size(); ++k)
      level_sets.push_back(
          visit("l0n" + std::to_string(k), 0, block_rows(part.blocks[k]), part.blocks.size() == 1));
    std::size_t level = 0;
    while (level_sets.size() > 1) {
      ++level;
      const bool top = level_sets.size() == 2;
      std::vector<std::vector<std::size_t>> next;
      for (std::size_t k = 0; k + 1 < level_sets.size(); k += 2) {
        std::vector<std::size_t> cand = level_sets[k];
        cand.insert(cand.end(), level_sets[k + 1].begin(), level_sets[k + 1].end());
        next.push_back(visit("l" + std::to_string(level) + "n" + std::to_string(k / 2), level,
                             std::move(cand), top));
      }
      if (level_sets.size() % 2 == 1) next.push_back(std::move(level_sets.back()));
      level_sets = std::move(next);
    }
  } else {
    std::vector<std::size_t> running = visit("f0", 0, block_rows(part.blocks[0]), part.blocks.size() == 1);
    for (std::size_t k = 1; k < part.blocks.size(); ++k) {
      std::vector<std::size_t> cand = running;
      const auto more = block_rows(part.blocks[k]);
      cand.insert(cand.end(), more.begin(), more.end());
      running = visit("f" + std::to_string(k), k, std::move(cand), k + 1 == part.blocks.size());
    }
  }

  tr.pivots = tr.nodes.back().selected;
  std::vector<std::size_t> order = root_order;
  std::vector<char> used(m, 0);
  for (std::size_t r : order) used[r] = 1;
  for (std::size_t r = 0; r < m; ++r)
    if (!used[r]) order.push_back(r);
  out.perm = PermutationVec(std::move(order));
  return out;
}

}  // namespace

std::pair<PermutationVec, TournamentTrace> tournament_select(const DenseMatrix& panel,
                                                             std::size_t b, double tau,
                                                             const ReductionTree& tree,
                                                             NodeSelector selector) {
  SelectOutcome o = run_tournament(panel, b, tau, tree, selector);
  return {std::move(o.perm), std::move(o.trace)};
}

BlockLUFactors caluprrp_factor(const DenseMatrix& a, std::size_t b, double tau,
                               const ReductionTree& tree) {
  if (!(tau > 1.0)) throw DimensionError("caluprrp_factor: tau must exceed 1");
  const detail::PanelSelector select = [tau, &tree](const DenseMatrix& panel, std::size_t) {
    const std::size_t w = panel.cols();
    SelectOutcome o = run_tournament(panel, w, tau, tree, NodeSelector::srrqr);
    detail::PanelChoice ch;
    ch.order.assign(o.perm.map().begin(), o.perm.map().end());
    const DenseMatrix moved = apply_row_perm(o.perm, panel);
    const QRFactors qr = householder_qr(moved.transpose(), FormQ::no);
    try {
      ch.l21 = multiplier_block(qr.r, w);
    } catch (NumericalError& e) {
      e.prepend_location("final-qr");
      throw;
    }
    ch.swaps = o.trace.total_swaps();
    ch.multiplier_max = kernels::max_abs(ch.l21.view());
    const double rows = double(panel.rows());
    const double wd = double(w);
    ch.executed_flops = o.flops + 4.0 * rows * wd * wd - 4.0 / 3.0 * wd * wd * wd +
                        (rows - wd) * wd * wd;
    return ch;
  };
  return detail::blocked_lu(a, b, select, detail::PanelFinish::prrp);
}

BlockLUFactors calu_factor(const DenseMatrix& a, std::size_t b, const ReductionTree& tree) {
  const detail::PanelSelector select = [&tree](const DenseMatrix& panel, std::size_t) {
    SelectOutcome o = run_tournament(panel, panel.cols(), 2.0, tree, NodeSelector::gepp);
    detail::PanelChoice ch;
    ch.order.assign(o.perm.map().begin(), o.perm.map().end());
    ch.executed_flops = o.flops;
    return ch;
  };
  return detail::blocked_lu(a, b, select, detail::PanelFinish::gepp);
}

double growth_bound_caluprrp(std::size_t n, std::size_t b, double tau, std::size_t h) {
  const double nb = static_cast<double>(n) / static_cast<double>(b);
  return std::pow(1.0 + tau * static_cast<double>(b), nb * (static_cast<double>(h) + 1.0) - 1.0);
}

bool growth_condition(std::size_t b, double tau, std::size_t h) {
  if (h == 0) return true;
  return static_cast<double>(h) <= static_cast<double>(b) / (std::log2(static_cast<double>(b)) + std::log2(tau));
}

}  // namespace prrp
