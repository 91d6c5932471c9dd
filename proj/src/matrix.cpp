#include "prrp/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace prrp {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (data_.size() != rows * cols)
    throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> tmp;
  tmp.reserve(rows.size());
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.front().size();
  DenseMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n) throw DimensionError("DenseMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t rows,
                               std::size_t cols) const {
  if (row0 + rows > rows_ || col0 + cols > cols_)
    throw DimensionError("DenseMatrix::block: window exceeds matrix bounds");
  return view().sub(row0, col0, rows, cols).copy();
}

void DenseMatrix::set_block(std::size_t row0, std::size_t col0, const DenseMatrix& src) {
  if (row0 + src.rows() > rows_ || col0 + src.cols() > cols_)
    throw DimensionError("DenseMatrix::set_block: window exceeds matrix bounds");
  for (std::size_t j = 0; j < src.cols(); ++j)
    std::copy_n(src.column(j).data(), src.rows(), &(*this)(row0, col0 + j));
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix ConstMatrixView::copy() const {
  DenseMatrix out(rows_, cols_);
  for (std::size_t j = 0; j < cols_; ++j) std::copy_n(col_ptr(j), rows_, out.column(j).data());
  return out;
}

PermutationVec::PermutationVec(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<char> seen(map_.size(), 0);
  for (std::size_t v : map_) {
    if (v >= map_.size() || seen[v])
      throw DimensionError("PermutationVec: map is not a bijection on {0.." +
                           std::to_string(map_.size()) + "-1}");
    seen[v] = 1;
  }
}

PermutationVec PermutationVec::identity(std::size_t n) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  PermutationVec p;
  p.map_ = std::move(map);
  return p;
}

bool PermutationVec::is_identity() const noexcept {
  for (std::size_t i = 0; i < map_.size(); ++i)
    if (map_[i] != i) return false;
  return true;
}

void PermutationVec::swap_positions(std::size_t i, std::size_t j) noexcept {
  std::swap(map_[i], map_[j]);
}

DenseMatrix PermutationVec::to_dense() const {
  DenseMatrix p(size(), size());
  for (std::size_t i = 0; i < size(); ++i) p(i, map_[i]) = 1.0;
  return p;
}

DenseMatrix apply_row_perm(const PermutationVec& p, const DenseMatrix& a) {
  if (p.size() != a.rows())
    throw DimensionError("apply_row_perm: permutation length " + std::to_string(p.size()) +
                         " != rows " + std::to_string(a.rows()));
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(p[i], j);
  return out;
}

DenseMatrix apply_col_perm(const DenseMatrix& a, const PermutationVec& p) {
  if (p.size() != a.cols())
    throw DimensionError("apply_col_perm: permutation length " + std::to_string(p.size()) +
                         " != cols " + std::to_string(a.cols()));
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    std::copy_n(a.column(p[j]).data(), a.rows(), out.column(j).data());
  return out;
}

PermutationVec compose(const PermutationVec& p, const PermutationVec& q) {
  if (p.size() != q.size()) throw DimensionError("compose: permutation lengths differ");
  std::vector<std::size_t> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return PermutationVec(std::move(r));
}

PermutationVec invert(const PermutationVec& p) {
  std::vector<std::size_t> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return PermutationVec(std::move(r));
}

}  // namespace prrp
