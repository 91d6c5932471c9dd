#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace prrp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape or argument contract violated by the caller.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Base for failures that come from the numbers rather than the call site
/// (singular pivots, rank deficiency, swap loop not converging). Carries an
/// optional panel index and a free-form location such as a tree-node path.
class NumericalError : public Error {
public:
  NumericalError(const std::string& what, std::size_t index)
      : Error(what), index_(index), message_(what) {}

  /// Row/column index at which the failure was detected, relative to the
  /// matrix handed to the failing kernel.
  std::size_t index() const noexcept { return index_; }
  std::optional<std::size_t> panel() const noexcept { return panel_; }
  const std::string& location() const noexcept { return location_; }

  void set_panel(std::size_t panel) {
    panel_ = panel;
    refresh();
  }
  void prepend_location(const std::string& where) {
    location_ = location_.empty() ? where : where + "/" + location_;
    refresh();
  }
  const char* what() const noexcept override { return full_.empty() ? message_.c_str() : full_.c_str(); }

private:
  void refresh() {
    full_ = message_;
    if (panel_) full_ += " [panel " + std::to_string(*panel_) + "]";
    if (!location_.empty()) full_ += " [node " + location_ + "]";
  }

  std::size_t index_;
  std::string message_;
  std::string full_;
  std::optional<std::size_t> panel_;
  std::string location_;
};

/// Zero pivot / zero diagonal entry where a nonzero one is required.
class SingularError : public NumericalError {
public:
  SingularError(const std::string& what, std::size_t index) : NumericalError(what, index) {}
};

/// Leading block of a pivoted QR is numerically singular.
class RankDeficiencyError : public NumericalError {
public:
  RankDeficiencyError(const std::string& what, std::size_t index) : NumericalError(what, index) {}
};

/// Strong RRQR exceeded its interchange cap.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double max_entry)
      : NumericalError(what, 0), max_entry_(max_entry) {}
  double max_entry() const noexcept { return max_entry_; }

private:
  double max_entry_;
};

/// Malformed matrix text or generator spec.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Gallery family that exists in the test set but has no generator here.
class UnsupportedFamilyError : public Error {
public:
  explicit UnsupportedFamilyError(const std::string& family)
      : Error("matrix family '" + family + "' is listed but not generated"), family_(family) {}
  const std::string& family() const noexcept { return family_; }

private:
  std::string family_;
};

}  // namespace prrp
