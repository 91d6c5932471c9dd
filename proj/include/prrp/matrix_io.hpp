#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "prrp/matrix.hpp"

namespace prrp {

/// Matrix text format: a first line "rows cols", then `rows` lines of `cols`
/// values separated by single spaces. Values are written in the shortest
/// decimal form that parses back to the same double.
std::string format_matrix(const DenseMatrix& a);
void write_matrix(std::ostream& out, const DenseMatrix& a);

/// Throws ParseError on malformed input (bad header, wrong counts, junk).
DenseMatrix parse_matrix(std::string_view text);
DenseMatrix read_matrix(std::istream& in);

/// Shortest round-trip decimal form of one double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double v);

}  // namespace prrp
