#include "prrp/pivoted_qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "prrp/blas.hpp"

namespace prrp {
namespace {

constexpr double kRankEps = 0x1p-52;

// 2-norm of a contiguous vector. Plain squaring unless that could overflow
// or underflow, in which case the running scale / sum-of-squares form is
// used (1 / max would overflow for subnormal maxima).
double nrm2(const double* x, std::size_t n) {
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::fabs(x[i]));
  if (mx == 0.0 || !std::isfinite(mx)) return mx;
  if (mx > 1e150 || mx < 1e-150) {
    double scale = 0.0;
    double ssq = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::fabs(x[i]);
      if (a == 0.0) continue;
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
    return scale * std::sqrt(ssq);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

struct Reflector {
  double tau = 0.0;
  std::vector<double> v;  // v[0] == 1 implied, stored explicitly
};

// Working state of a Householder triangularization. `w` is overwritten with R
// on and above the diagonal; reflectors are kept separately.
struct HouseholderState {
  DenseMatrix w;
  std::vector<Reflector> refl;
  double flops = 0.0;

  // dlarfg on column k followed by application to columns k+1..p-1.
  void step(std::size_t k) {
    const std::size_t h = w.rows();
    const std::size_t p = w.cols();
    const std::size_t len = h - k;
    double* col = w.column(k).data() + k;
    Reflector r;
    r.v.assign(len, 0.0);
    r.v[0] = 1.0;
    const double xnorm = len > 1 ? nrm2(col + 1, len - 1) : 0.0;
    flops += 2.0 * static_cast<double>(len);
    if (xnorm != 0.0) {
      double alpha = col[0];
      double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
      // dlarfg rescaling: bring a tiny column up by a power of two so that v
      // is formed from normal numbers.
      constexpr double kSafmin = 0x1p-969;
      double up = 1.0;
      if (std::fabs(beta) < kSafmin) {
        up = 0x1p969;
        alpha *= up;
        std::vector<double> scaled(col + 1, col + len);
        for (double& v : scaled) v *= up;
        beta = -std::copysign(std::hypot(alpha, nrm2(scaled.data(), scaled.size())), alpha);
      }
      r.tau = (beta - alpha) / beta;
      const double scal = 1.0 / (alpha - beta);
      for (std::size_t i = 1; i < len; ++i) r.v[i] = (col[i] * up) * scal;
      beta /= up;
      col[0] = beta;
      for (std::size_t i = 1; i < len; ++i) col[i] = 0.0;
      for (std::size_t j = k + 1; j < p; ++j) {
        double* c = w.column(j).data() + k;
        double s = c[0];
        for (std::size_t i = 1; i < len; ++i) s += r.v[i] * c[i];
        s *= r.tau;
        c[0] -= s;
        for (std::size_t i = 1; i < len; ++i) c[i] -= s * r.v[i];
      }
      flops += 4.0 * static_cast<double>(len) * static_cast<double>(p - k - 1);
    }
    refl.push_back(std::move(r));
  }

  // Q = H_0 H_1 ... H_{s-1}, formed by applying the reflectors to I in
  // reverse order.
  DenseMatrix form_q() const {
    const std::size_t h = w.rows();
    DenseMatrix q = DenseMatrix::identity(h);
    for (std::size_t k = refl.size(); k-- > 0;) {
      const Reflector& r = refl[k];
      if (r.tau == 0.0) continue;
      const std::size_t len = h - k;
      for (std::size_t j = k; j < h; ++j) {
        double* c = q.column(j).data() + k;
        double s = c[0];
        for (std::size_t i = 1; i < len; ++i) s += r.v[i] * c[i];
        s *= r.tau;
        c[0] -= s;
        for (std::size_t i = 1; i < len; ++i) c[i] -= s * r.v[i];
      }
    }
    return q;
  }
};

DenseMatrix upper_part(const DenseMatrix& w) {
  DenseMatrix r = w;
  for (std::size_t j = 0; j < r.cols(); ++j)
    for (std::size_t i = j + 1; i < r.rows(); ++i) r(i, j) = 0.0;
  return r;
}

void swap_columns(DenseMatrix& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  auto ci = a.column(i);
  auto cj = a.column(j);
  std::swap_ranges(ci.begin(), ci.end(), cj.begin());
}

QRFactors finish(HouseholderState& st, PermutationVec perm, FormQ form_q) {
  QRFactors out;
  if (form_q == FormQ::yes) out.q = st.form_q();
  out.r = upper_part(st.w);
  out.perm = std::move(perm);
  return out;
}

QRFactors householder_impl(const DenseMatrix& a, FormQ form_q, double* flops) {
  HouseholderState st{a, {}, 0.0};
  const std::size_t steps = std::min(a.rows(), a.cols());
  for (std::size_t k = 0; k < steps; ++k) st.step(k);
  if (flops) *flops += st.flops;
  return finish(st, PermutationVec::identity(a.cols()), form_q);
}

QRFactors qrcp_impl(const DenseMatrix& a, FormQ form_q, double* flops) {
  HouseholderState st{a, {}, 0.0};
  const std::size_t h = a.rows();
  const std::size_t p = a.cols();
  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const std::size_t steps = std::min(h, p);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < p; ++j) {
      const double nj = nrm2(st.w.column(j).data() + k, h - k);
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    st.flops += 2.0 * static_cast<double>(h - k) * static_cast<double>(p - k);
    swap_columns(st.w, k, best);
    std::swap(perm[k], perm[best]);
    st.step(k);
  }
  if (flops) *flops += st.flops;
  return finish(st, PermutationVec(std::move(perm)), form_q);
}

void check_rank(const DenseMatrix& r, std::size_t b, double threshold) {
  for (std::size_t k = 0; k < b; ++k)
    if (!(std::fabs(r(k, k)) >= threshold))
      throw RankDeficiencyError("strong_rrqr: leading block is numerically rank deficient at column " +
                                    std::to_string(k),
                                k);
}

// R11^{-1} R12 for the leading b rows of r.
DenseMatrix solve_r11(const DenseMatrix& r, std::size_t b) {
  DenseMatrix x = r.block(0, b, b, r.cols() - b);
  kernels::trsm_upper(r.view().sub(0, 0, b, b), x.view());
  return x;
}

struct MaxEntry {
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

// Largest |x_ij|, ties to the lexicographically smallest (i, j).
MaxEntry max_entry(const DenseMatrix& x) {
  MaxEntry m;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double v = std::fabs(x(i, j));
      if (v > m.value || std::isnan(v)) {
        m = {v, i, j};
        if (std::isnan(v)) return m;
      }
    }
  return m;
}

}  // namespace

QRFactors householder_qr(const DenseMatrix& a, FormQ form_q) {
  return householder_impl(a, form_q, nullptr);
}

QRFactors qr_column_pivoting(const DenseMatrix& a, FormQ form_q) {
  return qrcp_impl(a, form_q, nullptr);
}

std::size_t srrqr_swap_cap(std::size_t b, std::size_t p, double tau) {
  const double c = std::ceil(2.0 * static_cast<double>(b) * std::log(static_cast<double>(p)) /
                             std::log(tau));
  return static_cast<std::size_t>(std::max(0.0, c)) + 10;
}

SrrqrResult strong_rrqr(const DenseMatrix& a, std::size_t b, double tau, FormQ form_q) {
  if (b == 0 || a.cols() < b + 1 || a.rows() < b)
    throw DimensionError("strong_rrqr: need rows >= b >= 1 and cols >= b + 1 (got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         ", b = " + std::to_string(b) + ")");
  if (!(tau > 1.0)) throw DimensionError("strong_rrqr: tau must exceed 1");

  SrrqrResult res;
  res.tau = tau;
  const double threshold = kRankEps * norm(a, NormKind::fro);
  res.qr = qrcp_impl(a, FormQ::no, &res.executed_flops);
  check_rank(res.qr.r, b, threshold);

  const std::size_t cap = srrqr_swap_cap(b, a.cols(), tau);
  DenseMatrix x = solve_r11(res.qr.r, b);
  MaxEntry m = max_entry(x);
  while (!(m.value <= tau)) {
    if (res.swap_count >= cap || std::isnan(m.value))
      throw ConvergenceError("strong_rrqr: interchange cap reached with max |R11^-1 R12| = " +
                                 std::to_string(m.value),
                             m.value);
    PermutationVec perm = res.qr.perm;
    perm.swap_positions(m.i, b + m.j);
    res.qr = householder_impl(apply_col_perm(a, perm), FormQ::no, &res.executed_flops);
    res.qr.perm = std::move(perm);
    ++res.swap_count;
    check_rank(res.qr.r, b, threshold);
    x = solve_r11(res.qr.r, b);
    m = max_entry(x);
  }
  if (form_q == FormQ::yes) res.qr.q = householder_qr(apply_col_perm(a, res.qr.perm)).q;
  res.max_entry = m.value;
  res.l_block = x.transpose();
  return res;
}

DenseMatrix multiplier_block(const DenseMatrix& r, std::size_t b) {
  if (b == 0 || r.rows() < b || r.cols() < b)
    throw DimensionError("multiplier_block: r must have at least b rows and columns");
  return solve_r11(r, b).transpose();
}

}  // namespace prrp
