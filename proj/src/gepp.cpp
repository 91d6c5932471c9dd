#include "prrp/gepp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prrp/blas.hpp"

namespace prrp {

namespace kernels {

double gepp_inplace(MatrixView w, std::size_t npiv, std::vector<std::size_t>& order,
                    bool skip_zero_pivots) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  if (npiv > m || npiv > n) throw DimensionError("gepp_inplace: npiv exceeds the block");
  order.resize(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double mx = 0.0;
  for (std::size_t k = 0; k < npiv; ++k) {
    const double* ck = w.col_ptr(k);
    std::size_t p = k;
    double best = std::fabs(ck[k]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const double v = std::fabs(ck[i]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0 && skip_zero_pivots) continue;
    if (best == 0.0)
      throw SingularError("gepp: pivot column " + std::to_string(k) + " is exactly zero", k);
    if (p != k) {
      swap_rows(w, k, p);
      std::swap(order[k], order[p]);
    }
    double* lk = w.col_ptr(k);
    const double piv = lk[k];
    for (std::size_t i = k + 1; i < m; ++i) lk[i] /= piv;
    for (std::size_t j = k + 1; j < n; ++j) {
      double* cj = w.col_ptr(j);
      const double ukj = cj[k];
      for (std::size_t i = k + 1; i < m; ++i) {
        cj[i] -= lk[i] * ukj;
        mx = std::max(mx, std::fabs(cj[i]));
      }
    }
  }
  return mx;
}

}  // namespace kernels

GeppFactors gepp_factor(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n || n == 0) throw DimensionError("gepp_factor: need rows >= cols >= 1");
  DenseMatrix w = a;
  GeppFactors f;
  f.original_max = norm(a, NormKind::max);
  std::vector<std::size_t> order;
  const double upd = kernels::gepp_inplace(w.view(), n, order);
  f.intermediate_max = std::max(f.original_max, upd);
  f.perm = PermutationVec(std::move(order));
  f.l = DenseMatrix(m, n);
  f.u = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    f.l(j, j) = 1.0;
    for (std::size_t i = 0; i <= j; ++i) f.u(i, j) = w(i, j);
    for (std::size_t i = j + 1; i < m; ++i) f.l(i, j) = w(i, j);
  }
  return f;
}

DenseMatrix gepp_solve(const GeppFactors& f, const DenseMatrix& rhs) {
  if (f.l.rows() != f.u.rows()) throw DimensionError("gepp_solve: factors are not square");
  if (rhs.rows() != f.u.rows()) throw DimensionError("gepp_solve: rhs row count mismatch");
  DenseMatrix x = apply_row_perm(f.perm, rhs);
  kernels::trsm_lower_unit(f.l.view(), x.view());
  kernels::trsm_upper(f.u.view(), x.view());
  return x;
}

}  // namespace prrp
