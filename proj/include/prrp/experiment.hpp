#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prrp/matgen.hpp"
#include "prrp/matrix.hpp"
#include "prrp/metrics.hpp"

namespace prrp {

enum class Algorithm {
  gepp,
  luprrp,
  caluprrp_bt,
  caluprrp_ft,
  calu_bt,
  calu_ft,
  block_parallel,
  block_pairwise,
};

std::string to_string(Algorithm a);
/// Throws ParseError for unknown names.
Algorithm parse_algorithm(const std::string& s);
const std::vector<Algorithm>& all_algorithms();

/// Parameters of one factorization run. `p` is the leaf count for the
/// binary-tree algorithms and block_parallel; it is ignored elsewhere.
struct RunConfig {
  Algorithm alg = Algorithm::luprrp;
  std::size_t b = 8;
  std::size_t p = 1;
  double tau = 2.0;
  /// Right-hand side = gen_randn(n, 1, rhs_seed).
  std::uint64_t rhs_seed = 1;
  std::size_t max_ir = 10;
};

/// One CSV row. Numeric fields are means over `samples` matrices; a failed
/// run keeps NaN metrics and a status starting with "failed:".
struct RunRecord {
  std::string matrix;
  std::size_t rows = 0;
  std::size_t cols = 0;
  RunConfig cfg;
  /// Reduction tree height of the first panel (0 without a tree).
  std::size_t height = 0;
  std::size_t samples = 1;
  std::string status = "ok";
  StabilityReport report;
  double swaps = 0.0;
  double charged_flops = 0.0;
};

/// Factors `a`, solves with the default right-hand side when a is square,
/// and measures everything. Numerical errors propagate.
RunRecord run_factorization(const DenseMatrix& a, const std::string& label, const RunConfig& cfg);

/// Same, but numerical errors become a failed record.
RunRecord run_guarded(const DenseMatrix& a, const std::string& label, const RunConfig& cfg);

/// Header line of run_csv_row, preceded by a schema line "# prrp1".
std::string run_csv_header();
std::string run_csv_row(const RunRecord& r);

/// One grid point of a sweep. With samples > 1 the matrix seed runs over
/// seed, seed + 1, ... and the record holds the means.
struct SweepPoint {
  MatrixSpec matrix;
  RunConfig cfg;
  std::size_t samples = 1;
};

struct SweepOptions {
  /// Worker threads; rows are emitted in grid order regardless.
  std::size_t jobs = 1;
  /// Receives one line per skipped point; may be null.
  std::ostream* log = nullptr;
};

/// Reason a point cannot run (b > n, too few rows for a leaf, ...), or
/// nullopt when it is valid.
std::optional<std::string> skip_reason(const SweepPoint& pt);

/// Runs the valid points in grid order. Points whose matrix or factorization
/// rejects the shape (DimensionError) are logged and dropped.
std::vector<RunRecord> run_records(const std::vector<SweepPoint>& points, const SweepOptions& opt = {});

/// run_records rendered as CSV: header plus one row per point.
std::string run_sweep(const std::vector<SweepPoint>& points, const SweepOptions& opt = {});

/// Cross product of matrix specs, algorithms, panel widths and leaf counts.
std::vector<SweepPoint> make_grid(const std::vector<MatrixSpec>& matrices,
                                  const std::vector<Algorithm>& algs, const std::vector<std::size_t>& bs,
                                  const std::vector<std::size_t>& ps, double tau, std::uint64_t rhs_seed,
                                  std::size_t samples = 1);

struct PresetOptions {
  /// Matrix orders above this are clamped to it (0 keeps the defaults);
  /// duplicate points after clamping are dropped.
  std::size_t max_n = 0;
  std::size_t jobs = 1;
  std::ostream* log = nullptr;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& presets();
/// Full CSV text of a preset. Throws ParseError for unknown names.
std::string run_preset(const std::string& name, const PresetOptions& opt = {});

}  // namespace prrp
