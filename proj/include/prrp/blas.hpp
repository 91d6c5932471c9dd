#pragma once

#include <cstddef>
#include <span>

#include "prrp/matrix.hpp"

namespace prrp {

enum class NormKind { one, inf, fro, max };

/// c = a * b. Every entry is summed over k in ascending order starting from
/// zero, with no blocking of the k loop, so the result is reproducible.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// Returns c - a * b, bitwise equal to subtracting matmul(a, b) from c.
DenseMatrix rank_update(const DenseMatrix& c, const DenseMatrix& a, const DenseMatrix& b);

/// Solves L X = B with L unit lower triangular (the diagonal and upper part
/// of `l` are never read).
DenseMatrix trsm_lower_unit(const DenseMatrix& l, const DenseMatrix& b);

/// Solves U X = B with U upper triangular. Throws SingularError carrying the
/// index of the first zero diagonal entry met during back substitution.
DenseMatrix trsm_upper(const DenseMatrix& u, const DenseMatrix& b);

/// one: max column abs-sum, inf: max row abs-sum, fro: sqrt of the sum of
/// squares, max: largest |a_ij|. Empty matrices give 0.
double norm(const DenseMatrix& a, NormKind kind);
double norm(ConstMatrixView a, NormKind kind);

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

/// Strided in-place kernels shared by the factorizations. They use the same
/// arithmetic as the value-returning functions above.
namespace kernels {

/// c -= a * b, accumulating each a*b entry over ascending k before the
/// subtraction (same bits as rank_update). Returns the largest |c_ij| written.
double gemm_sub(MatrixView c, ConstMatrixView a, ConstMatrixView b);

/// b <- L^{-1} b for unit lower triangular L (forward substitution, axpy form).
void trsm_lower_unit(ConstMatrixView l, MatrixView b);
/// b <- U^{-1} b for upper triangular U (back substitution, axpy form).
void trsm_upper(ConstMatrixView u, MatrixView b);
/// b <- b * U^{-1} for upper triangular U (right-sided solve, used to form
/// multipliers A21 * U11^{-1}).
void trsm_upper_right(ConstMatrixView u, MatrixView b);

double max_abs(ConstMatrixView a) noexcept;

void swap_rows(MatrixView a, std::size_t i, std::size_t j) noexcept;

/// Reorders rows of `a` so that new row i is old row order[i].
void permute_rows(MatrixView a, std::span<const std::size_t> order);

}  // namespace kernels
}  // namespace prrp
