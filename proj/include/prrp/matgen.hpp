#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "prrp/matrix.hpp"

namespace prrp {

/// A named test matrix: family, order n and family parameters.
struct MatrixSpec {
  std::string family;
  std::size_t n = 0;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
  /// Canonical text form "family:n[:key=value...]" (keys sorted).
  std::string to_string() const;
};

/// Parses "family:n[:key=value...]". Values may be decimals or fractions
/// such as 2/3. Throws ParseError.
MatrixSpec parse_matrix_spec(std::string_view text);

/// Builds the matrix for any supported family (see matrix_families()).
/// Throws UnsupportedFamilyError for listed-but-not-generated families and
/// ParseError for unknown names or bad parameters.
DenseMatrix generate(const MatrixSpec& spec);

/// Supported family names, in documentation order.
const std::vector<std::string>& matrix_families();
/// Gallery families that are named in the test set but not generated.
const std::vector<std::string>& unsupported_families();

/// i.i.d. standard normal entries, filled in column-major order from
/// Rng(seed).normal().
DenseMatrix gen_randn(std::size_t n, std::uint64_t seed);
DenseMatrix gen_randn(std::size_t m, std::size_t n, std::uint64_t seed);
/// i.i.d. uniform [0, 1) entries, column-major order.
DenseMatrix gen_rand(std::size_t m, std::size_t n, std::uint64_t seed);

/// Unit diagonal, -1 strictly below, +1 in the last column: GEPP growth
/// 2^(n-1). Requires n >= 2.
DenseMatrix gen_wilkinson(std::size_t n);

/// Random generalized Wilkinson matrix: u, v uniform n x r (u filled first),
/// A = -triu(u v^T); row k-1's tail (columns k..n-1) is divided by its
/// largest magnitude times (1 + 1/n); the diagonal is zeroed; A = A^T + I;
/// entries above the diagonal in the last column are set to 1.
DenseMatrix gen_generalized_wilkinson(std::size_t n, std::size_t r, std::uint64_t seed);
/// Same procedure with caller-supplied u, v (n x r each).
DenseMatrix generalized_wilkinson_normalized(const DenseMatrix& u, const DenseMatrix& v);
/// Caller-supplied u, v without negation or normalization:
/// A = triu(u v^T) with zero diagonal, A = A^T + I, last column set to 1.
DenseMatrix generalized_wilkinson_from(const DenseMatrix& u, const DenseMatrix& v);

/// Volterra quadrature matrix: row 0 is [1, 0, ..., 0, -1/c]; row i >= 1 has
/// -kh/2 in column 0, -kh in columns 1..i-1, 1 - kh/2 on the diagonal and
/// -1/c in the last column; the corner is 1 - 1/c - kh/2. Throws
/// DimensionError for c == 0 or n < 2.
DenseMatrix gen_foster(std::size_t n, double c, double h, double k);

/// Multiple-shooting matrix with 2 x 2 blocks: I on the diagonal, I in the
/// top-right block, -E on the block subdiagonal with
/// E = [[1 - h/6, h], [h, 1 - h/6]]. Requires n even and n >= 4.
DenseMatrix gen_wright(std::size_t n, double h);

/// Closed-form gallery families; `spec.params` supplies optional parameters
/// and the seed for randomized ones.
DenseMatrix gen_special(const MatrixSpec& spec);

}  // namespace prrp
