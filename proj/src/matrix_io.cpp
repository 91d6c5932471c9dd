#include "prrp/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <vector>

namespace prrp {
namespace {

std::string_view next_line(std::string_view& text) {
  const auto pos = text.find('\n');
  std::string_view line = text.substr(0, pos);
  text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, const char* what, std::size_t line_no) {
  T value{};
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": invalid " + what + " '" +
                     std::string(tok) + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const DenseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

std::string format_matrix(const DenseMatrix& a) {
  std::ostringstream out;
  write_matrix(out, a);
  return out.str();
}

DenseMatrix parse_matrix(std::string_view text) {
  std::size_t line_no = 1;
  const auto header = split_spaces(next_line(text));
  if (header.size() != 2) throw ParseError("line 1: expected 'rows cols' header");
  const auto rows = parse_number<std::size_t>(header[0], "row count", line_no);
  const auto cols = parse_number<std::size_t>(header[1], "column count", line_no);
  DenseMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    ++line_no;
    if (text.empty()) throw ParseError("line " + std::to_string(line_no) + ": missing matrix row");
    const auto toks = split_spaces(next_line(text));
    if (toks.size() != cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " values, found " + std::to_string(toks.size()));
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = parse_number<double>(toks[j], "value", line_no);
  }
  while (!text.empty()) {
    ++line_no;
    if (!split_spaces(next_line(text)).empty())
      throw ParseError("line " + std::to_string(line_no) + ": trailing data after matrix");
  }
  return a;
}

DenseMatrix read_matrix(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_matrix(text);
}

}  // namespace prrp
