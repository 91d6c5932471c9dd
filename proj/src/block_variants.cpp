#include "prrp/block_variants.hpp"

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

using I64 = std::int64_t;

I64 i64(std::size_t v) { return static_cast<I64>(v); }

DenseMatrix gather(const DenseMatrix& w, const std::vector<std::size_t>& rows, std::size_t col0,
                   std::size_t cols) {
  DenseMatrix out(rows.size(), cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) out(i, j) = w(rows[i], col0 + j);
  return out;
}

void scatter(DenseMatrix& w, const std::vector<std::size_t>& rows, std::size_t col0,
             const DenseMatrix& src) {
  for (std::size_t j = 0; j < src.cols(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) w(rows[i], col0 + j) = src(i, j);
}

// rows `elim` -= d * rows `sel` over columns from..n-1; returns max |updated|.
double eliminate_rows(DenseMatrix& w, const std::vector<std::size_t>& sel,
                      const std::vector<std::size_t>& elim, const DenseMatrix& d, std::size_t from) {
  const std::size_t cols = w.cols() - from;
  if (cols == 0 || elim.empty()) return 0.0;
  DenseMatrix c = gather(w, elim, from, cols);
  const DenseMatrix top = gather(w, sel, from, cols);
  const double mx = kernels::gemm_sub(c.view(), d.view(), top.view());
  scatter(w, elim, from, c);
  return mx;
}

struct NodeElimination {
  PermutationVec perm;
  DenseMatrix d;
  std::size_t swaps = 0;
  double max_entry = 0.0;
  double flops = 0.0;
};

// Below the root a rank-deficient block is not fatal. Column-pivoted QR
// orders its rows, the numerical rank r comes from the strong RRQR threshold,
// and the eliminated rows are expressed through the first r selected rows.
NodeElimination deficient_node(const DenseMatrix& bt, std::size_t w) {
  NodeElimination out;
  const QRFactors qr = qr_column_pivoting(bt, FormQ::no);
  const double threshold = 0x1p-52 * norm(bt, NormKind::fro);
  std::size_t r = 0;
  while (r < w && std::fabs(qr.r(r, r)) >= threshold && qr.r(r, r) != 0.0) ++r;
  const std::size_t k = bt.cols();
  out.d = DenseMatrix(k - w, w);
  if (r > 0) {
    DenseMatrix x = qr.r.block(0, w, r, k - w);
    kernels::trsm_upper(qr.r.view().sub(0, 0, r, r), x.view());
    for (std::size_t i = 0; i < k - w; ++i)
      for (std::size_t j = 0; j < r; ++j) out.d(i, j) = x(j, i);
  }
  out.max_entry = kernels::max_abs(out.d.view());
  out.perm = qr.perm;
  return out;
}

}  // namespace

BlockVariantFactors block_variant_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                         const ReductionTree& tree) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0 || m < n) throw DimensionError("block LU_PRRP: need rows >= cols >= 1");
  if (b == 0) throw DimensionError("block LU_PRRP: panel width must be at least 1");
  if (!(tau > 1.0)) throw DimensionError("block LU_PRRP: tau must exceed 1");

  BlockVariantFactors f;
  f.panel_width = b;
  ElimStats& st = f.stats;
  st.original_max = norm(a, NormKind::max);
  st.intermediate_max = st.original_max;

  DenseMatrix w = a;
  std::vector<std::size_t> active(m);
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<std::size_t> pivots;

  std::size_t panel = 0;
  for (std::size_t j0 = 0; j0 < n; j0 += b, ++panel) {
    const std::size_t wd = std::min(b, n - j0);
    const std::size_t right = n - j0 - wd;
    std::size_t swaps = 0;
    double mult = 0.0;
    std::vector<std::size_t> next_active;

    // One node: strong RRQR on the node block, eliminate the non-selected
    // rows and update their trailing columns at once.
    auto reduce = [&](const std::vector<std::size_t>& rows, const std::string& path, bool root) {
      if (rows.size() <= wd) return rows;
      const std::size_t k = rows.size();
      NodeElimination s;
      const DenseMatrix bt = gather(w, rows, j0, wd).transpose();
      try {
        SrrqrResult q = strong_rrqr(bt, wd, tau, FormQ::no);
        s.perm = std::move(q.qr.perm);
        s.d = std::move(q.l_block);
        s.swaps = q.swap_count;
        s.max_entry = q.max_entry;
        s.flops = q.executed_flops;
      } catch (NumericalError& e) {
        const bool deficient = dynamic_cast<const RankDeficiencyError*>(&e) != nullptr ||
                               dynamic_cast<const SingularError*>(&e) != nullptr;
        if (root || !deficient) {
          e.prepend_location(path);
          throw;
        }
        s = deficient_node(bt, wd);
      }
      BlockEvent ev;
      ev.kind = BlockEvent::Kind::eliminate;
      ev.panel = panel;
      ev.col0 = j0;
      ev.width = wd;
      ev.node = path;
      for (std::size_t i = 0; i < k; ++i)
        (i < wd ? ev.selected : ev.eliminated).push_back(rows[s.perm[i]]);
      ev.d = std::move(s.d);
      if (right > 0) st.sample(eliminate_rows(w, ev.selected, ev.eliminated, ev.d, j0 + wd));
      for (std::size_t r : ev.eliminated)
        for (std::size_t j = j0; j < j0 + wd; ++j) w(r, j) = 0.0;
      st.flops.charged_thirds += charge::qr_panel(i64(wd), i64(k)) + charge::update(i64(wd), i64(k - wd), i64(right));
      st.flops.executed += s.flops + 2.0 * double(k - wd) * double(wd) * double(right);
      swaps += s.swaps;
      mult = std::max(mult, s.max_entry);
      next_active.insert(next_active.end(), ev.eliminated.begin(), ev.eliminated.end());
      std::vector<std::size_t> sel = ev.selected;
      f.events.push_back(std::move(ev));
      return sel;
    };

    try {
      std::vector<std::size_t> survivors = active;
      if (active.size() > wd) {
        const TreePartition part = tree.partition(active.size(), wd);
        auto leaf = [&](std::size_t k) {
          const auto [s0, len] = part.blocks[k];
          return std::vector<std::size_t>(active.begin() + static_cast<std::ptrdiff_t>(s0),
                                          active.begin() + static_cast<std::ptrdiff_t>(s0 + len));
        };
        if (tree.shape == TreeShape::binary) {
          std::vector<std::vector<std::size_t>> level_sets;
          for (std::size_t k = 0; k < part.blocks.size(); ++k)
            level_sets.push_back(reduce(leaf(k), "l0n" + std::to_string(k), part.blocks.size() == 1));
          std::size_t level = 0;
          while (level_sets.size() > 1) {
            ++level;
            const bool top = level_sets.size() == 2;
            std::vector<std::vector<std::size_t>> next;
            for (std::size_t k = 0; k + 1 < level_sets.size(); k += 2) {
              std::vector<std::size_t> cand = level_sets[k];
              cand.insert(cand.end(), level_sets[k + 1].begin(), level_sets[k + 1].end());
              next.push_back(reduce(cand, "l" + std::to_string(level) + "n" + std::to_string(k / 2), top));
            }
            if (level_sets.size() % 2 == 1) next.push_back(std::move(level_sets.back()));
            level_sets = std::move(next);
          }
          survivors = level_sets.front();
        } else {
          survivors = reduce(leaf(0), "f0", part.blocks.size() == 1);
          for (std::size_t k = 1; k < part.blocks.size(); ++k) {
            std::vector<std::size_t> cand = survivors;
            const auto more = leaf(k);
            cand.insert(cand.end(), more.begin(), more.end());
            survivors = reduce(cand, "f" + std::to_string(k), k + 1 == part.blocks.size());
          }
        }
      }

      // GEPP on the surviving block row.
      DenseMatrix blk = gather(w, survivors, j0, n - j0);
      std::vector<std::size_t> order;
      st.sample(kernels::gepp_inplace(blk.view(), wd, order));
      st.flops.charged_thirds += charge::gepp_block(i64(wd), i64(right));
      st.flops.executed += double(charge::gepp_block(i64(wd), i64(right))) / 3.0;
      BlockEvent ev;
      ev.kind = BlockEvent::Kind::gepp;
      ev.panel = panel;
      ev.col0 = j0;
      ev.width = wd;
      ev.node = "diag";
      for (std::size_t i = 0; i < wd; ++i) ev.selected.push_back(survivors[order[i]]);
      ev.d = DenseMatrix::identity(wd);
      for (std::size_t j = 0; j < wd; ++j)
        for (std::size_t i = j + 1; i < wd; ++i) {
          ev.d(i, j) = blk(i, j);
          blk(i, j) = 0.0;
        }
      scatter(w, ev.selected, j0, blk);
      pivots.insert(pivots.end(), ev.selected.begin(), ev.selected.end());
      f.events.push_back(std::move(ev));
    } catch (NumericalError& e) {
      e.set_panel(panel);
      throw;
    }
    active = std::move(next_active);
    st.swap_counts.push_back(swaps);
    st.multiplier_max.push_back(mult);
  }

  std::vector<std::size_t> perm = pivots;
  perm.insert(perm.end(), active.begin(), active.end());
  f.perm = PermutationVec(std::move(perm));
  f.u = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) f.u(i, j) = w(pivots[i], j);
  return f;
}

BlockVariantFactors block_parallel_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                          std::size_t p) {
  if (p == 0) throw DimensionError("block_parallel_luprrp: p must be at least 1");
  return block_variant_luprrp(a, b, tau, ReductionTree::binary(p));
}

BlockVariantFactors block_pairwise_luprrp(const DenseMatrix& a, std::size_t b, double tau,
                                          std::size_t block_rows) {
  return block_variant_luprrp(a, b, tau, ReductionTree::flat(block_rows));
}

DenseMatrix replay(const DenseMatrix& a, const BlockVariantFactors& f) {
  DenseMatrix w = a;
  const std::size_t n = f.u.cols();
  for (const BlockEvent& ev : f.events) {
    if (ev.kind == BlockEvent::Kind::eliminate) {
      eliminate_rows(w, ev.selected, ev.eliminated, ev.d, ev.col0 + ev.width);
      for (std::size_t r : ev.eliminated)
        for (std::size_t j = ev.col0; j < ev.col0 + ev.width; ++j) w(r, j) = 0.0;
    } else {
      DenseMatrix blk = gather(w, ev.selected, ev.col0, w.cols() - ev.col0);
      kernels::trsm_lower_unit(ev.d.view(), blk.view());
      for (std::size_t j = 0; j < ev.width; ++j)
        for (std::size_t i = j + 1; i < ev.width; ++i) blk(i, j) = 0.0;
      scatter(w, ev.selected, ev.col0, blk);
    }
  }
  DenseMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(i, j) = w(f.perm[i], j);
  return u;
}

DenseMatrix reconstruct_l(const BlockVariantFactors& f, std::size_t m) {
  const std::size_t n = f.u.cols();
  if (f.perm.size() != m) throw DimensionError("reconstruct_l: row count does not match the factors");
  DenseMatrix x(m, n);
  for (std::size_t i = 0; i < n; ++i) x(f.perm[i], i) = 1.0;
  for (auto it = f.events.rbegin(); it != f.events.rend(); ++it) {
    const BlockEvent& ev = *it;
    const DenseMatrix top = gather(x, ev.selected, 0, n);
    if (ev.kind == BlockEvent::Kind::eliminate) {
      DenseMatrix c = gather(x, ev.eliminated, 0, n);
      DenseMatrix neg = ev.d;
      for (double& v : neg.data()) v = -v;
      kernels::gemm_sub(c.view(), neg.view(), top.view());
      scatter(x, ev.eliminated, 0, c);
    } else {
      scatter(x, ev.selected, 0, matmul(ev.d, top));
    }
  }
  return apply_row_perm(f.perm, x);
}

DenseMatrix block_variant_solve(const BlockVariantFactors& f, const DenseMatrix& rhs) {
  const std::size_t n = f.u.cols();
  if (f.perm.size() != n) throw DimensionError("block_variant_solve: factors are not square");
  if (rhs.rows() != n) throw DimensionError("block_variant_solve: rhs row count mismatch");
  DenseMatrix y = rhs;
  for (const BlockEvent& ev : f.events) {
    DenseMatrix top = gather(y, ev.selected, 0, y.cols());
    if (ev.kind == BlockEvent::Kind::eliminate) {
      DenseMatrix c = gather(y, ev.eliminated, 0, y.cols());
      kernels::gemm_sub(c.view(), ev.d.view(), top.view());
      scatter(y, ev.eliminated, 0, c);
    } else {
      kernels::trsm_lower_unit(ev.d.view(), top.view());
      scatter(y, ev.selected, 0, top);
    }
  }
  DenseMatrix x = apply_row_perm(f.perm, y);
  kernels::trsm_upper(f.u.view(), x.view());
  return x;
}

}  // namespace prrp
