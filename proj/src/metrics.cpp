#include "prrp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "prrp/blas.hpp"
#include "prrp/luprrp.hpp"

namespace prrp {

namespace {

// Error-free transformations; correct only without FMA contraction.
struct Pair {
  double hi;
  double lo;
};

Pair two_sum(double a, double b) {
  const double s = a + b;
  const double z = s - a;
  return {s, (a - (s - z)) + (b - z)};
}

Pair split(double a) {
  constexpr double kFactor = 134217729.0;  // 2^27 + 1
  const double c = kFactor * a;
  const double hi = c - (c - a);
  return {hi, a - hi};
}

Pair two_product(double a, double b) {
  const double p = a * b;
  const Pair sa = split(a);
  const Pair sb = split(b);
  const double err = sa.lo * sb.lo - (((p - sa.hi * sb.hi) - sa.lo * sb.hi) - sa.hi * sb.lo);
  return {p, err};
}

void require_vector_system(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs,
                           const char* who) {
  if (x.cols() != 1 || rhs.cols() != 1)
    throw DimensionError(std::string(who) + ": expects a single right-hand side");
  if (a.cols() != x.rows() || a.rows() != rhs.rows())
    throw DimensionError(std::string(who) + ": shape mismatch");
}

double vec_norm1(const DenseMatrix& v) {
  double s = 0.0;
  for (double e : v.data()) s += std::fabs(e);
  return s;
}

double vec_norm_inf(const DenseMatrix& v) {
  double s = 0.0;
  for (double e : v.data()) s = std::fmax(s, std::fabs(e));
  return s;
}

bool is_lower_unit(const DenseMatrix& l) {
  if (l.rows() != l.cols()) return false;
  for (std::size_t j = 0; j < l.cols(); ++j) {
    if (l(j, j) != 1.0) return false;
    for (std::size_t i = 0; i < j; ++i)
      if (l(i, j) != 0.0) return false;
  }
  return true;
}

void format_field(std::string& out, double v) {
  char buf[32];
  if (std::isnan(v))
    std::snprintf(buf, sizeof buf, "nan");
  else
    std::snprintf(buf, sizeof buf, "%.6e", v);
  out += buf;
}

}  // namespace

double growth_factor(const ElimStats& stats) {
  if (stats.original_max == 0.0) throw DimensionError("growth_factor: zero matrix");
  return stats.intermediate_max / stats.original_max;
}

double rel_factorization_error(const DenseMatrix& a, const PermutationVec& perm,
                               const DenseMatrix& l, const DenseMatrix& u) {
  if (perm.size() != a.rows() || l.rows() != a.rows() || u.cols() != a.cols() ||
      l.cols() != u.rows())
    throw DimensionError("rel_factorization_error: shape mismatch");
  const double na = norm(a, NormKind::fro);
  if (na == 0.0) throw DimensionError("rel_factorization_error: zero matrix");
  return norm(subtract(apply_row_perm(perm, a), matmul(l, u)), NormKind::fro) / na;
}

DenseMatrix residual_extended(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs) {
  if (a.cols() != x.rows() || a.rows() != rhs.rows() || x.cols() != rhs.cols())
    throw DimensionError("residual_extended: shape mismatch");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix r(m, rhs.cols());
  std::vector<double> hi(m), lo(m);
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    for (std::size_t i = 0; i < m; ++i) {
      hi[i] = rhs(i, c);
      lo[i] = 0.0;
    }
    // Column-major sweep; each row keeps its own compensated accumulator.
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x(j, c);
      for (std::size_t i = 0; i < m; ++i) {
        const Pair prod = two_product(-a(i, j), xj);
        const Pair sum = two_sum(hi[i], prod.hi);
        hi[i] = sum.hi;
        lo[i] += sum.lo + prod.lo;
      }
    }
    for (std::size_t i = 0; i < m; ++i) r(i, c) = hi[i] + lo[i];
  }
  return r;
}

double normwise_backward_error(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs) {
  require_vector_system(a, x, rhs, "normwise_backward_error");
  const double rn = vec_norm1(residual_extended(a, x, rhs));
  if (rn == 0.0) return 0.0;
  return rn / (norm(a, NormKind::one) * vec_norm1(x) + vec_norm1(rhs));
}

double componentwise_backward_error(const DenseMatrix& a, const DenseMatrix& x,
                                    const DenseMatrix& rhs) {
  require_vector_system(a, x, rhs, "componentwise_backward_error");
  const DenseMatrix r = residual_extended(a, x, rhs);
  std::vector<double> den(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) den[i] = std::fabs(rhs(i, 0));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double xj = std::fabs(x(j, 0));
    for (std::size_t i = 0; i < a.rows(); ++i) den[i] += std::fabs(a(i, j)) * xj;
  }
  double w = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ri = std::fabs(r(i, 0));
    if (ri == 0.0) continue;
    if (den[i] == 0.0) return std::numeric_limits<double>::infinity();
    w = std::fmax(w, ri / den[i]);
  }
  return w;
}

std::array<double, 3> hpl_triplet(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& rhs) {
  require_vector_system(a, x, rhs, "hpl_triplet");
  const double rn = vec_norm_inf(residual_extended(a, x, rhs));
  if (rn == 0.0) return {0.0, 0.0, 0.0};
  const double n = static_cast<double>(a.rows());
  const double a1 = norm(a, NormKind::one);
  return {rn / (kMachEps * a1 * n), rn / (kMachEps * a1 * vec_norm1(x)),
          rn / (kMachEps * norm(a, NormKind::inf) * vec_norm_inf(x) * n)};
}

RefinementResult iterative_refinement(const Solver& solve, const DenseMatrix& a,
                                      const DenseMatrix& rhs, std::size_t max_iters) {
  if (rhs.cols() != 1) throw DimensionError("iterative_refinement: expects a single right-hand side");
  RefinementResult res;
  DenseMatrix x = solve(rhs);
  double w = componentwise_backward_error(a, x, rhs);
  res.w_before = w;
  res.x = x;
  res.w_after = w;
  const double target = static_cast<double>(a.rows()) * kMachEps;
  std::size_t increases = 0;
  while (res.n_ir < max_iters && w > target) {
    const DenseMatrix dx = solve(residual_extended(a, x, rhs));
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, 0) += dx(i, 0);
    ++res.n_ir;
    const double w_new = componentwise_backward_error(a, x, rhs);
    if (w_new < res.w_after) {
      res.x = x;
      res.w_after = w_new;
    }
    if (w_new > w) {
      // One increase is given another step; two in a row is divergence.
      w = w_new;
      if (++increases == 2) {
        res.diverged = true;
        break;
      }
      continue;
    }
    increases = 0;
    const bool halved = w_new * 2.0 <= w;
    w = w_new;
    if (!halved) break;
  }
  return res;
}

DenseMatrix inverse_lower_unit(const DenseMatrix& l) {
  if (l.rows() != l.cols()) throw DimensionError("inverse_lower_unit: not square");
  return trsm_lower_unit(l, DenseMatrix::identity(l.rows()));
}

DenseMatrix inverse_upper(const DenseMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("inverse_upper: not square");
  return trsm_upper(u, DenseMatrix::identity(u.rows()));
}

StabilityReport solve_report(const DenseMatrix& a, const Solver& solve, const ElimStats& stats,
                             const DenseMatrix& rhs, std::size_t max_ir) {
  StabilityReport rep;
  rep.g_w = growth_factor(stats);
  const RefinementResult ir = iterative_refinement(solve, a, rhs, max_ir);
  // The unrefined x is recomputed; solvers are deterministic.
  const DenseMatrix x0 = solve(rhs);
  rep.eta = normwise_backward_error(a, x0, rhs);
  rep.hpl = hpl_triplet(a, x0, rhs);
  rep.w_before = ir.w_before;
  rep.w = ir.w_after;
  rep.n_ir = static_cast<double>(ir.n_ir);
  rep.diverged = ir.diverged;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.rel_fact_error = rep.norm_l1 = rep.norm_linv1 = rep.norm_u1 = rep.norm_uinv1 = nan;
  return rep;
}

StabilityReport stability_report(const DenseMatrix& a, const PermutationVec& perm,
                                 const DenseMatrix& l, const DenseMatrix& u, const ElimStats& stats,
                                 const DenseMatrix& rhs, std::size_t max_ir) {
  if (a.rows() != a.cols()) throw DimensionError("stability_report: matrix is not square");
  StabilityReport rep = solve_report(
      a, [&](const DenseMatrix& r) { return lu_solve(perm, l, u, r); }, stats, rhs, max_ir);
  rep.rel_fact_error = rel_factorization_error(a, perm, l, u);
  rep.norm_u1 = norm(u, NormKind::one);
  rep.norm_uinv1 = norm(inverse_upper(u), NormKind::one);
  rep.norm_l1 = norm(l, NormKind::one);
  if (is_lower_unit(l)) rep.norm_linv1 = norm(inverse_lower_unit(l), NormKind::one);
  return rep;
}

const char* report_csv_header() {
  return "g_w,rel_fact_error,eta,w_before,w,hpl1,hpl2,hpl3,n_ir,norm_l1,norm_linv1,norm_u1,"
         "norm_uinv1,diverged";
}

std::string report_csv_row(const StabilityReport& r) {
  std::string out;
  const double fields[] = {r.g_w,    r.rel_fact_error, r.eta,     r.w_before, r.w,
                           r.hpl[0], r.hpl[1],         r.hpl[2],  r.n_ir,     r.norm_l1,
                           r.norm_linv1, r.norm_u1,    r.norm_uinv1};
  for (double v : fields) {
    format_field(out, v);
    out += ',';
  }
  out += r.diverged ? '1' : '0';
  return out;
}

}  // namespace prrp
