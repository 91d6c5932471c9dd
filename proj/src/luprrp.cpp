#include "prrp/luprrp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prrp/blas.hpp"
#include "prrp/gepp.hpp"
#include "prrp/pivoted_qr.hpp"

namespace prrp {
namespace {

using I64 = std::int64_t;

I64 i64(std::size_t v) { return static_cast<I64>(v); }

void reorder(std::vector<std::size_t>& rows, std::size_t offset,
             const std::vector<std::size_t>& order) {
  std::vector<std::size_t> seg(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) seg[i] = rows[offset + order[i]];
  std::copy(seg.begin(), seg.end(), rows.begin() + static_cast<std::ptrdiff_t>(offset));
}

// Lg = L21 * P11^T * L11, where order lists the diagonal-block GEPP row order.
DenseMatrix compose_lower(const DenseMatrix& l21, const std::vector<std::size_t>& order,
                          ConstMatrixView block) {
  const std::size_t w = order.size();
  DenseMatrix l11 = DenseMatrix::identity(w);
  for (std::size_t j = 0; j < w; ++j)
    for (std::size_t i = j + 1; i < w; ++i) l11(i, j) = block(i, j);
  return matmul(apply_col_perm(l21, PermutationVec(order)), l11);
}

}  // namespace

namespace detail {

BlockLUFactors blocked_lu(const DenseMatrix& a, std::size_t b, const PanelSelector& select,
                          PanelFinish finish) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0 || m < n) throw DimensionError("blocked LU: need rows >= cols >= 1");
  if (b == 0) throw DimensionError("blocked LU: panel width must be at least 1");

  BlockLUFactors f;
  f.panel_width = b;
  ElimStats& st = f.stats;
  st.original_max = norm(a, NormKind::max);
  st.intermediate_max = st.original_max;

  DenseMatrix work = a;
  MatrixView wv = work.view();
  std::vector<std::size_t> rows(m);
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  std::size_t panel = 0;
  for (std::size_t j0 = 0; j0 < n; j0 += b, ++panel) {
    const std::size_t w = std::min(b, n - j0);
    const std::size_t mrem = m - j0;
    const std::size_t below = mrem - w;
    const std::size_t right = n - j0 - w;
    try {
      st.flops.charged_thirds += charge::qr_panel(i64(w), i64(mrem));
      PanelChoice ch;
      if (below > 0) {
        ch = select(wv.sub(j0, j0, mrem, w).copy(), panel);
        if (ch.order.size() != mrem) throw DimensionError("blocked LU: selector returned a bad order");
        kernels::permute_rows(wv.sub(j0, 0, mrem, n), ch.order);
        reorder(rows, j0, ch.order);
        st.flops.executed += ch.executed_flops;
      }

      if (finish == PanelFinish::prrp && below > 0) {
        if (ch.l21.rows() != below || ch.l21.cols() != w)
          throw DimensionError("blocked LU: selector returned a bad multiplier block");
        if (right > 0)
          st.sample(kernels::gemm_sub(wv.sub(j0 + w, j0 + w, below, right), ch.l21.view(),
                                      wv.sub(j0, j0 + w, w, right)));
        st.flops.charged_thirds += charge::update(i64(w), i64(below), i64(right));
        st.flops.executed += 2.0 * double(w) * double(below) * double(right);
      }

      std::vector<std::size_t> order2;
      st.sample(kernels::gepp_inplace(wv.sub(j0, j0, w, n - j0), w, order2));
      st.flops.charged_thirds += charge::gepp_block(i64(w), i64(right));
      st.flops.executed += double(charge::gepp_block(i64(w), i64(right))) / 3.0;
      if (j0 > 0) kernels::permute_rows(wv.sub(j0, 0, w, j0), order2);
      reorder(rows, j0, order2);

      if (below > 0) {
        MatrixView lower = wv.sub(j0 + w, j0, below, w);
        if (finish == PanelFinish::prrp) {
          const DenseMatrix lg = compose_lower(ch.l21, order2, wv.sub(j0, j0, w, w));
          for (std::size_t jj = 0; jj < w; ++jj)
            std::copy_n(lg.column(jj).data(), below, lower.col_ptr(jj));
          st.flops.executed += double(below) * double(w) * double(w);
        } else {
          kernels::trsm_upper_right(wv.sub(j0, j0, w, w), lower);
          ch.multiplier_max = kernels::max_abs(lower);
          if (right > 0)
            st.sample(kernels::gemm_sub(wv.sub(j0 + w, j0 + w, below, right), lower,
                                        wv.sub(j0, j0 + w, w, right)));
          st.flops.charged_thirds += charge::update(i64(w), i64(below), i64(right));
          st.flops.executed += double(below) * double(w) * double(w) +
                               2.0 * double(w) * double(below) * double(right);
        }
      }
      st.swap_counts.push_back(ch.swaps);
      st.multiplier_max.push_back(ch.multiplier_max);
    } catch (NumericalError& e) {
      e.set_panel(panel);
      throw;
    }
  }

  f.perm = PermutationVec(std::move(rows));
  f.l = DenseMatrix(m, n);
  f.u = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    f.l(j, j) = 1.0;
    for (std::size_t i = 0; i <= j; ++i) f.u(i, j) = work(i, j);
    for (std::size_t i = j + 1; i < m; ++i) f.l(i, j) = work(i, j);
  }
  return f;
}

}  // namespace detail

BlockLUFactors luprrp_factor(const DenseMatrix& a, std::size_t b, double tau) {
  if (!(tau > 1.0)) throw DimensionError("luprrp_factor: tau must exceed 1");
  const detail::PanelSelector select = [tau](const DenseMatrix& panel, std::size_t) {
    const std::size_t w = panel.cols();
    SrrqrResult s = strong_rrqr(panel.transpose(), w, tau, FormQ::no);
    detail::PanelChoice ch;
    ch.order.assign(s.qr.perm.map().begin(), s.qr.perm.map().end());
    ch.l21 = std::move(s.l_block);
    ch.swaps = s.swap_count;
    ch.multiplier_max = s.max_entry;
    ch.executed_flops = s.executed_flops;
    return ch;
  };
  return detail::blocked_lu(a, b, select, detail::PanelFinish::prrp);
}

DenseMatrix lu_solve(const PermutationVec& perm, const DenseMatrix& l, const DenseMatrix& u,
                     const DenseMatrix& rhs) {
  if (l.rows() != u.rows() || l.cols() != u.cols())
    throw DimensionError("lu_solve: factors are not square");
  if (rhs.rows() != u.rows()) throw DimensionError("lu_solve: rhs row count mismatch");
  DenseMatrix x = apply_row_perm(perm, rhs);
  kernels::trsm_lower_unit(l.view(), x.view());
  kernels::trsm_upper(u.view(), x.view());
  return x;
}

DenseMatrix luprrp_solve(const BlockLUFactors& f, const DenseMatrix& rhs) {
  return lu_solve(f.perm, f.l, f.u, rhs);
}

double growth_bound_luprrp(std::size_t n, std::size_t b, double tau) {
  return std::pow(1.0 + tau * static_cast<double>(b),
                  static_cast<double>(n) / static_cast<double>(b));
}

}  // namespace prrp
