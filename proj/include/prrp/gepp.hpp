#pragma once

#include <cstddef>
#include <vector>

#include "prrp/matrix.hpp"

namespace prrp {

/// Pi A = L U from Gaussian elimination with partial pivoting. For an m x n
/// input (m >= n) L is m x n unit lower trapezoidal and U is n x n.
struct GeppFactors {
  PermutationVec perm;
  DenseMatrix l;
  DenseMatrix u;
  /// max |a_ij^(k)| over the original matrix and every rank-1 step.
  double intermediate_max = 0.0;
  double original_max = 0.0;
};

/// Pivot at step k is the largest |a_ik|, i >= k (smallest row on ties).
/// Throws SingularError(k) when the whole pivot column is exactly zero.
GeppFactors gepp_factor(const DenseMatrix& a);

/// Solves A x = rhs with square factors (L then U substitution).
DenseMatrix gepp_solve(const GeppFactors& f, const DenseMatrix& rhs);

namespace kernels {

/// In-place GEPP on the first `npiv` columns of `w` (npiv <= rows). Row swaps
/// and rank-1 updates span every column of `w`, so trailing columns end up
/// holding L^{-1} P^T applied to them. Multipliers are stored below the
/// diagonal. order[i] is the input row now at position i. Returns the
/// largest |entry| produced by any rank-1 update (0 if none). An exactly zero
/// pivot column throws SingularError unless skip_zero_pivots is set, in which
/// case that step is left as is.
double gepp_inplace(MatrixView w, std::size_t npiv, std::vector<std::size_t>& order,
                    bool skip_zero_pivots = false);

}  // namespace kernels
}  // namespace prrp
