#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "prrp/matrix.hpp"

namespace testutil {

// Entries uniform in [-1, 1); independent of the library generators.
inline prrp::DenseMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  prrp::DenseMatrix a(m, n);
  for (auto& v : a.data()) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
  return a;
}

inline prrp::PermutationVec random_perm(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return prrp::PermutationVec(std::move(p));
}

// Naive triple loop, i-j-k order.
inline prrp::DenseMatrix naive_matmul(const prrp::DenseMatrix& a, const prrp::DenseMatrix& b) {
  prrp::DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline double max_abs_diff(const prrp::DenseMatrix& a, const prrp::DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const prrp::DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::fabs(v));
  return m;
}

inline double fro(const prrp::DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace testutil
