#pragma once

#include <cstddef>

#include "prrp/matrix.hpp"

namespace prrp {

/// A * Pi = Q * R for an h x p input. Q is h x h orthogonal (formed
/// explicitly), R is h x p upper trapezoidal with exact zeros below the
/// diagonal, and perm lists the columns of A in pivot order.
struct QRFactors {
  DenseMatrix q;
  DenseMatrix r;
  PermutationVec perm;
};

/// Result of a strong rank-revealing QR with threshold tau.
struct SrrqrResult {
  QRFactors qr;
  double tau = 2.0;
  /// Interchanges performed after the initial column-pivoted QR.
  std::size_t swap_count = 0;
  /// (R11^{-1} R12)^T, the bounded multiplier block; (p - b) x b.
  DenseMatrix l_block;
  /// max |R11^{-1} R12| on exit (never above tau).
  double max_entry = 0.0;
  /// Floating-point operations actually executed, including refactorizations.
  double executed_flops = 0.0;
};

enum class FormQ { yes, no };

/// Householder QR without pivoting (perm is the identity). Reflectors follow
/// the LAPACK dlarfg convention, so R's diagonal can have either sign.
QRFactors householder_qr(const DenseMatrix& a, FormQ form_q = FormQ::yes);

/// Householder QR with column pivoting: at step k the remaining column with
/// the largest 2-norm (recomputed exactly over rows k..h-1, lowest index on
/// ties) is moved to position k.
QRFactors qr_column_pivoting(const DenseMatrix& a, FormQ form_q = FormQ::yes);

/// Strong RRQR of `a` selecting `b` leading columns such that
/// max |(R11^{-1} R12)_ij| <= tau.
///
/// Starts from qr_column_pivoting, then while some entry exceeds tau swaps
/// leading column i with trailing column b + j for the largest such entry
/// (ties: smallest (i, j)) and refactors A * Pi from scratch. Each swap grows
/// |det R11| by more than tau, so the loop terminates; the number of swaps is
/// nevertheless capped at ceil(2 b log p / log tau) + 10.
///
/// Requires a.cols() >= b + 1, a.rows() >= b, tau > 1.
/// Throws RankDeficiencyError(k) if |R(k,k)| < 2^-52 * ||a||_F for some
/// k < b, and ConvergenceError if the swap cap is hit.
SrrqrResult strong_rrqr(const DenseMatrix& a, std::size_t b, double tau,
                        FormQ form_q = FormQ::yes);

/// Upper bound on the number of strong-RRQR interchanges for a b x p problem.
std::size_t srrqr_swap_cap(std::size_t b, std::size_t p, double tau);

/// (R11^{-1} R12)^T for the leading b rows of an upper trapezoidal r, computed
/// with a triangular solve. Throws SingularError on a zero diagonal in R11.
DenseMatrix multiplier_block(const DenseMatrix& r, std::size_t b);

}  // namespace prrp
