#pragma once

#include <cmath>
#include <vector>

#include "prrp/matrix.hpp"

namespace oracle {

// Solves S X = B by Gauss-Jordan with partial pivoting on plain 2-D arrays.
// Returns false when S is singular to working precision.
inline bool solve(std::vector<std::vector<double>> s, std::vector<std::vector<double>> b,
                  std::vector<std::vector<double>>& x) {
  const std::size_t n = s.size();
  const std::size_t k = n ? b[0].size() : 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(s[r][c]) > std::fabs(s[p][c])) p = r;
    if (s[p][c] == 0.0) return false;
    std::swap(s[c], s[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = s[r][c] / s[c][c];
      for (std::size_t j = c; j < n; ++j) s[r][j] -= f * s[c][j];
      for (std::size_t j = 0; j < k; ++j) b[r][j] -= f * b[c][j];
    }
  }
  x.assign(n, std::vector<double>(k));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < k; ++j) x[r][j] = b[r][j] / s[r][r];
  return true;
}

// For a b x p matrix with b rows, R11^{-1} R12 for the column subset `sel`
// equals A_sel^{-1} A_rest; returns its max |entry| (inf when singular).
inline double subset_max_ratio(const prrp::DenseMatrix& a, const std::vector<std::size_t>& sel) {
  const std::size_t b = a.rows();
  std::vector<bool> in(a.cols(), false);
  for (auto c : sel) in[c] = true;
  std::vector<std::vector<double>> s(b, std::vector<double>(b)), rest(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) s[i][j] = a(i, sel[j]);
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!in[c]) rest[i].push_back(a(i, c));
  }
  std::vector<std::vector<double>> x;
  if (!solve(s, rest, x)) return INFINITY;
  double m = 0.0;
  for (auto& row : x)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

// Enumerates all b-subsets of p columns; returns the smallest achievable
// max ratio.
inline double best_subset_ratio(const prrp::DenseMatrix& a) {
  const std::size_t b = a.rows();
  const std::size_t p = a.cols();
  std::vector<std::size_t> sel(b);
  for (std::size_t i = 0; i < b; ++i) sel[i] = i;
  double best = INFINITY;
  while (true) {
    best = std::min(best, subset_max_ratio(a, sel));
    std::size_t i = b;
    while (i > 0 && sel[i - 1] == p - b + i - 1) --i;
    if (i == 0) break;
    ++sel[i - 1];
    for (std::size_t j = i; j < b; ++j) sel[j] = sel[j - 1] + 1;
  }
  return best;
}

// Dense inverse by Gauss-Jordan.
inline prrp::DenseMatrix inverse(const prrp::DenseMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::vector<double>> s(n, std::vector<double>(n)), e(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    e[i][i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) s[i][j] = a(i, j);
  }
  std::vector<std::vector<double>> x;
  solve(s, e, x);
  prrp::DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = x[i][j];
  return out;
}

}  // namespace oracle
