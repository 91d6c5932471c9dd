#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "prrp/elim_stats.hpp"

namespace prrp {

/// Closed-form LU_PRRP flop count for an m x n matrix with panel width b:
/// mn^2 + 2mnb + 2nb^2 - n^2 b / 2 - n^3 / 3. Requires m >= n >= b >= 1.
double flops_luprrp(double m, double n, double b);

/// Sum over panels of the per-kernel charges used by the instrumented
/// counter, in thirds of a flop. Panels narrower than b at the end are
/// charged with their own width. Requires m >= n >= b >= 1.
std::int64_t flops_luprrp_steps_thirds(std::size_t m, std::size_t n, std::size_t b);
double flops_luprrp_steps(std::size_t m, std::size_t n, std::size_t b);

/// Leading GEPP count mn^2 - n^3 / 3.
double flops_gepp(double m, double n);

/// Charged flops of a factorization (the model counter, not executed work).
double instrumented_flops(const ElimStats& stats);

enum class CostAlgorithm { caluprrp, calu, pdgetrf };

std::string to_string(CostAlgorithm a);
/// Accepts "caluprrp", "calu", "pdgetrf". Throws ParseError otherwise.
CostAlgorithm parse_cost_algorithm(const std::string& s);

/// Matrix and 2D block-cyclic grid. Real-valued so that idealized layouts
/// can be evaluated without rounding.
struct Layout {
  double m = 0.0;
  double n = 0.0;
  double b = 0.0;
  double p_r = 1.0;
  double p_c = 1.0;
};

struct CostReport {
  double messages = 0.0;
  double words = 0.0;
  double flops = 0.0;
  CostAlgorithm algorithm = CostAlgorithm::caluprrp;
  Layout layout;
};

struct MachineModel {
  /// Latency per message.
  double alpha = 1.0;
  /// Inverse bandwidth, per word.
  double beta = 1.0;
  /// Time per flop.
  double gamma = 1.0;
};

/// Critical-path counts of the binary-tree parallel algorithms on a
/// p_r x p_c grid, lower-order terms omitted as in the published model.
/// Logarithms are base 2. Requires m >= n >= b >= 1 and p_r, p_c >= 1.
CostReport perf_model(CostAlgorithm alg, const Layout& layout);

/// Communication-optimal parameters. The real values are the closed forms;
/// the integer ones are floored and clamped to >= 1, with b also clamped to
/// <= n. When log2(mP/n) is 0 (e.g. P = 1) b is n.
struct OptimalLayout {
  double p_r = 1.0;
  double p_c = 1.0;
  double b = 1.0;
  std::size_t p_r_int = 1;
  std::size_t p_c_int = 1;
  std::size_t b_int = 1;

  Layout real_layout(double m, double n) const { return {m, n, b, p_r, p_c}; }
  Layout int_layout(double m, double n) const {
    return {m, n, double(b_int), double(p_r_int), double(p_c_int)};
  }
};

OptimalLayout optimal_layout(double m, double n, double p);

/// The two equivalent forms of the optimal b:
/// (1/4) log2^-2(sqrt(mP/n)) sqrt(mn/P) and log2^-2(mP/n) sqrt(mn/P).
double optimal_b_quarter_form(double m, double n, double p);
double optimal_b_direct_form(double m, double n, double p);

/// Leading terms for a square n x n matrix at the optimal layout
/// (pdgetrf is not modelled there and throws DimensionError).
CostReport optimal_leading_terms(CostAlgorithm alg, double n, double p);

struct LowerBounds {
  double words = 0.0;
  double messages = 0.0;
};

/// n^3 / sqrt(mem) and n^3 / mem^(3/2), with the asymptotic constants set
/// to 1.
LowerBounds lower_bounds(double n, double mem);

/// alpha * messages + beta * words + gamma * flops.
double total_time(const CostReport& r, const MachineModel& machine);

}  // namespace prrp
