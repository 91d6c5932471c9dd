#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>

#include "prrp/elim_stats.hpp"
#include "prrp/matrix.hpp"

namespace prrp {

/// Unit roundoff used to floor ratio comparisons (2^-53).
inline constexpr double kRatioEps = 0x1p-53;
/// Machine epsilon used by the HPL tests and the refinement stop (2^-52).
inline constexpr double kMachEps = 0x1p-52;

/// intermediate_max / original_max. Throws DimensionError for a zero matrix.
double growth_factor(const ElimStats& stats);

/// ||perm A - L U||_F / ||A||_F.
double rel_factorization_error(const DenseMatrix& a, const PermutationVec& perm,
                               const DenseMatrix& l, const DenseMatrix& u);

/// The solve-side metrics below take a single right-hand side column.

/// rhs - A x with every entry accumulated as a compensated (twice working
/// precision) dot product, then rounded once. No FMA is used.
DenseMatrix residual_extended(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs);

/// ||r||_1 / (||A||_1 ||x||_1 + ||b||_1) with r from residual_extended.
double normwise_backward_error(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs);

/// max_i |r_i| / (|A| |x| + |b|)_i. A zero denominator contributes 0 when
/// r_i == 0 and +inf otherwise.
double componentwise_backward_error(const DenseMatrix& a, const DenseMatrix& x,
                                    const DenseMatrix& rhs);

/// HPL1 = ||r||_inf / (eps ||A||_1 N), HPL2 = ||r||_inf / (eps ||A||_1 ||x||_1),
/// HPL3 = ||r||_inf / (eps ||A||_inf ||x||_inf N), eps = 2^-52, N = rows.
std::array<double, 3> hpl_triplet(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs);

using Solver = std::function<DenseMatrix(const DenseMatrix& rhs)>;

struct RefinementResult {
  DenseMatrix x;
  /// Correction steps performed.
  std::size_t n_ir = 0;
  /// Componentwise backward error of the unrefined solution.
  double w_before = 0.0;
  double w_after = 0.0;
  /// w grew on two consecutive steps.
  bool diverged = false;
};

/// Classical refinement with extended residuals. Stops when w <= n * 2^-52,
/// when a step fails to halve w, on divergence, or after max_iters steps.
/// The returned x is the best iterate seen.
RefinementResult iterative_refinement(const Solver& solve, const DenseMatrix& a,
                                      const DenseMatrix& rhs, std::size_t max_iters = 10);

/// Explicit inverses of triangular factors; throw SingularError on a zero
/// diagonal entry of u.
DenseMatrix inverse_lower_unit(const DenseMatrix& l);
DenseMatrix inverse_upper(const DenseMatrix& u);

struct StabilityReport {
  double g_w = 0.0;
  double rel_fact_error = 0.0;
  /// eta and HPL are measured on the unrefined solution, w after refinement.
  double eta = 0.0;
  double w_before = 0.0;
  double w = 0.0;
  std::array<double, 3> hpl{};
  double n_ir = 0.0;
  /// NaN when the factor is not triangular (block variants).
  double norm_l1 = 0.0;
  double norm_linv1 = 0.0;
  double norm_u1 = 0.0;
  double norm_uinv1 = 0.0;
  bool diverged = false;
};

/// Full report for square triangular factors: solves A x = rhs, refines,
/// and measures the factors.
StabilityReport stability_report(const DenseMatrix& a, const PermutationVec& perm,
                                 const DenseMatrix& l, const DenseMatrix& u, const ElimStats& stats,
                                 const DenseMatrix& rhs, std::size_t max_ir = 10);

/// Solve-side fields only (g_w, eta, w_before, w, hpl, n_ir).
StabilityReport solve_report(const DenseMatrix& a, const Solver& solve, const ElimStats& stats,
                             const DenseMatrix& rhs, std::size_t max_ir = 10);

/// Version tag written ahead of report tables.
inline constexpr const char* kReportSchema = "prrp1";

/// Column names of report_csv_row, in order.
const char* report_csv_header();
/// Fixed "%.6e" formatting; NaN prints as "nan".
std::string report_csv_row(const StabilityReport& r);

}  // namespace prrp
