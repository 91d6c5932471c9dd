#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "prrp/error.hpp"

namespace prrp {

class ConstMatrixView;
class MatrixView;

/// Dense real matrix in column-major order: element (i, j) lives at
/// data[i + j * rows].
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  /// Builds a matrix from row lists, e.g. {{1, 2}, {3, 4}}.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> column(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> column(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  /// Copies the window starting at (row0, col0) of the given extent.
  DenseMatrix block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t row0, std::size_t col0, const DenseMatrix& src);
  DenseMatrix transpose() const;

  MatrixView view() noexcept;
  ConstMatrixView view() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Non-owning read-only window into column-major storage with leading
/// dimension `ld`.
class ConstMatrixView {
public:
  ConstMatrixView(const double* data, std::size_t rows, std::size_t cols, std::size_t ld) noexcept
      : data_(data), rows_(rows), cols_(cols), ld_(ld) {}
  ConstMatrixView(const DenseMatrix& m) noexcept  // NOLINT(google-explicit-constructor)
      : ConstMatrixView(m.data().data(), m.rows(), m.cols(), m.rows() == 0 ? 1 : m.rows()) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t ld() const noexcept { return ld_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * ld_]; }
  const double* col_ptr(std::size_t j) const noexcept { return data_ + j * ld_; }

  ConstMatrixView sub(std::size_t row0, std::size_t col0, std::size_t rows,
                      std::size_t cols) const noexcept {
    return {data_ + row0 + col0 * ld_, rows, cols, ld_};
  }
  DenseMatrix copy() const;

private:
  const double* data_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t ld_;
};

/// Mutable counterpart of ConstMatrixView.
class MatrixView {
public:
  MatrixView(double* data, std::size_t rows, std::size_t cols, std::size_t ld) noexcept
      : data_(data), rows_(rows), cols_(cols), ld_(ld) {}
  MatrixView(DenseMatrix& m) noexcept  // NOLINT(google-explicit-constructor)
      : MatrixView(m.data().data(), m.rows(), m.cols(), m.rows() == 0 ? 1 : m.rows()) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t ld() const noexcept { return ld_; }
  double& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * ld_]; }
  double* col_ptr(std::size_t j) const noexcept { return data_ + j * ld_; }

  MatrixView sub(std::size_t row0, std::size_t col0, std::size_t rows,
                 std::size_t cols) const noexcept {
    return {data_ + row0 + col0 * ld_, rows, cols, ld_};
  }
  operator ConstMatrixView() const noexcept { return {data_, rows_, cols_, ld_}; }
  DenseMatrix copy() const { return ConstMatrixView(*this).copy(); }

private:
  double* data_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t ld_;
};

inline MatrixView DenseMatrix::view() noexcept { return MatrixView(*this); }
inline ConstMatrixView DenseMatrix::view() const noexcept { return ConstMatrixView(*this); }

/// A permutation of {0, ..., n-1} stored as an index map.
///
/// Convention (used everywhere in the library): applying p to the rows of A
/// produces a matrix whose row i is row p[i] of A, i.e. p lists, in order,
/// which original rows end up on top. The same vector read as a column
/// permutation gives A*Pi with column j equal to column p[j] of A.
class PermutationVec {
public:
  PermutationVec() = default;
  /// Validates that `map` is a bijection; throws DimensionError otherwise.
  explicit PermutationVec(std::vector<std::size_t> map);
  static PermutationVec identity(std::size_t n);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
  std::span<const std::size_t> map() const noexcept { return map_; }
  bool is_identity() const noexcept;

  /// Exchanges the images of positions i and j.
  void swap_positions(std::size_t i, std::size_t j) noexcept;

  /// Dense 0/1 matrix P with P*A == apply_row_perm(*this, A). Test oracles only.
  DenseMatrix to_dense() const;

  friend bool operator==(const PermutationVec&, const PermutationVec&) = default;

private:
  std::vector<std::size_t> map_;
};

/// Row i of the result is row p[i] of `a`. Pure copy, no arithmetic.
DenseMatrix apply_row_perm(const PermutationVec& p, const DenseMatrix& a);
/// Column j of the result is column p[j] of `a`.
DenseMatrix apply_col_perm(const DenseMatrix& a, const PermutationVec& p);

/// compose(p, q) is the permutation r with apply(r, A) == apply(p, apply(q, A)),
/// that is r[i] = q[p[i]].
PermutationVec compose(const PermutationVec& p, const PermutationVec& q);
PermutationVec invert(const PermutationVec& p);

}  // namespace prrp
