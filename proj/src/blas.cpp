#include "prrp/blas.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace prrp {
namespace {

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

// Row chunk for gemm_sub: keeps a chunk of `a` resident in cache across the
// column loop. Chunking rows never changes the per-entry summation order.
constexpr std::size_t kRowChunk = 256;

}  // namespace

namespace kernels {

double gemm_sub(MatrixView c, ConstMatrixView a, ConstMatrixView b) {
  const std::size_t m = c.rows();
  const std::size_t n = c.cols();
  const std::size_t kk = a.cols();
  double mx = 0.0;
  std::vector<double> acc(std::min(m, kRowChunk));
  for (std::size_t i0 = 0; i0 < m; i0 += kRowChunk) {
    const std::size_t ib = std::min(kRowChunk, m - i0);
    for (std::size_t j = 0; j < n; ++j) {
      double* t = acc.data();
      std::fill_n(t, ib, 0.0);
      for (std::size_t k = 0; k < kk; ++k) {
        const double bkj = b(k, j);
        const double* ak = a.col_ptr(k) + i0;
        for (std::size_t i = 0; i < ib; ++i) t[i] += ak[i] * bkj;
      }
      double* cj = c.col_ptr(j) + i0;
      for (std::size_t i = 0; i < ib; ++i) {
        cj[i] -= t[i];
        mx = std::max(mx, std::fabs(cj[i]));
      }
    }
  }
  return mx;
}

void trsm_lower_unit(ConstMatrixView l, MatrixView b) {
  const std::size_t n = l.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* x = b.col_ptr(j);
    for (std::size_t k = 0; k < n; ++k) {
      const double xk = x[k];
      if (xk == 0.0) continue;
      const double* lk = l.col_ptr(k);
      for (std::size_t i = k + 1; i < n; ++i) x[i] -= xk * lk[i];
    }
  }
}

void trsm_upper(ConstMatrixView u, MatrixView b) {
  const std::size_t n = u.rows();
  for (std::size_t k = 0; k < n; ++k)
    if (u(k, k) == 0.0)
      throw SingularError("trsm_upper: zero diagonal entry at index " + std::to_string(k), k);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* x = b.col_ptr(j);
    for (std::size_t k = n; k-- > 0;) {
      x[k] /= u(k, k);
      const double xk = x[k];
      if (xk == 0.0) continue;
      const double* uk = u.col_ptr(k);
      for (std::size_t i = 0; i < k; ++i) x[i] -= xk * uk[i];
    }
  }
}

void trsm_upper_right(ConstMatrixView u, MatrixView b) {
  const std::size_t n = u.rows();
  const std::size_t m = b.rows();
  for (std::size_t j = 0; j < n; ++j) {
    const double ujj = u(j, j);
    if (ujj == 0.0)
      throw SingularError("trsm_upper_right: zero diagonal entry at index " + std::to_string(j), j);
    double* bj = b.col_ptr(j);
    for (std::size_t k = 0; k < j; ++k) {
      const double ukj = u(k, j);
      if (ukj == 0.0) continue;
      const double* bk = b.col_ptr(k);
      for (std::size_t i = 0; i < m; ++i) bj[i] -= bk[i] * ukj;
    }
    for (std::size_t i = 0; i < m; ++i) bj[i] /= ujj;
  }
}

double max_abs(ConstMatrixView a) noexcept {
  double mx = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* c = a.col_ptr(j);
    for (std::size_t i = 0; i < a.rows(); ++i) mx = std::max(mx, std::fabs(c[i]));
  }
  return mx;
}

void swap_rows(MatrixView a, std::size_t i, std::size_t j) noexcept {
  if (i == j) return;
  for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}

void permute_rows(MatrixView a, std::span<const std::size_t> order) {
  if (order.size() != a.rows()) throw DimensionError("permute_rows: length mismatch");
  std::vector<double> tmp(a.rows());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double* col = a.col_ptr(c);
    for (std::size_t i = 0; i < order.size(); ++i) tmp[i] = col[order[i]];
    std::copy(tmp.begin(), tmp.end(), col);
  }
}

}  // namespace kernels

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* cj = c.column(j).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      const double* ak = a.column(k).data();
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

DenseMatrix rank_update(const DenseMatrix& c, const DenseMatrix& a, const DenseMatrix& b) {
  if (c.rows() != a.rows() || c.cols() != b.cols() || a.cols() != b.rows())
    throw DimensionError("rank_update: nonconformable operands");
  DenseMatrix out = c;
  kernels::gemm_sub(out.view(), a.view(), b.view());
  return out;
}

DenseMatrix trsm_lower_unit(const DenseMatrix& l, const DenseMatrix& b) {
  if (l.rows() != l.cols() || l.rows() != b.rows())
    throw DimensionError("trsm_lower_unit: nonconformable operands");
  DenseMatrix x = b;
  kernels::trsm_lower_unit(l.view(), x.view());
  return x;
}

DenseMatrix trsm_upper(const DenseMatrix& u, const DenseMatrix& b) {
  if (u.rows() != u.cols() || u.rows() != b.rows())
    throw DimensionError("trsm_upper: nonconformable operands");
  DenseMatrix x = b;
  kernels::trsm_upper(u.view(), x.view());
  return x;
}

double norm(ConstMatrixView a, NormKind kind) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) return 0.0;
  switch (kind) {
    case NormKind::one: {
      double best = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        const double* c = a.col_ptr(j);
        for (std::size_t i = 0; i < m; ++i) s += std::fabs(c[i]);
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::inf: {
      std::vector<double> rows(m, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double* c = a.col_ptr(j);
        for (std::size_t i = 0; i < m; ++i) rows[i] += std::fabs(c[i]);
      }
      return *std::max_element(rows.begin(), rows.end());
    }
    case NormKind::max:
      return kernels::max_abs(a);
    case NormKind::fro: {
      // Plain sum of squares unless the magnitude range risks overflow or
      // underflow, in which case entries are scaled by the largest one.
      const double mx = kernels::max_abs(a);
      if (mx == 0.0 || std::isinf(mx) || std::isnan(mx)) return mx;
      const bool scale = mx > 1e150 || mx < 1e-150;
      const double inv = scale ? 1.0 / mx : 1.0;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double* c = a.col_ptr(j);
        for (std::size_t i = 0; i < m; ++i) {
          const double v = c[i] * inv;
          s += v * v;
        }
      }
      return scale ? mx * std::sqrt(s) : std::sqrt(s);
    }
  }
  return 0.0;
}

double norm(const DenseMatrix& a, NormKind kind) { return norm(a.view(), kind); }

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "subtract");
  DenseMatrix out = a;
  auto d = out.data();
  auto s = b.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
  return out;
}

}  // namespace prrp
