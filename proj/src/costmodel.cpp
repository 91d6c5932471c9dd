#include "prrp/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "prrp/error.hpp"

namespace prrp {

namespace {

void require_dims(double m, double n, double b, const char* who) {
  if (!(b >= 1.0 && n >= b && m >= n)) throw DimensionError(std::string(who) + ": need m >= n >= b >= 1");
}

std::size_t floor_clamp(double v, double hi) {
  double f = std::floor(v);
  if (!(f >= 1.0)) f = 1.0;
  if (f > hi) f = std::max(1.0, std::floor(hi));
  return static_cast<std::size_t>(f);
}

}  // namespace

double flops_luprrp(double m, double n, double b) {
  require_dims(m, n, b, "flops_luprrp");
  return m * n * n + 2.0 * m * n * b + 2.0 * n * b * b - 0.5 * n * n * b - n * n * n / 3.0;
}

std::int64_t flops_luprrp_steps_thirds(std::size_t m, std::size_t n, std::size_t b) {
  require_dims(double(m), double(n), double(b), "flops_luprrp_steps");
  std::int64_t total = 0;
  for (std::size_t j0 = 0; j0 < n; j0 += b) {
    const auto w = static_cast<std::int64_t>(std::min(b, n - j0));
    const auto mrem = static_cast<std::int64_t>(m - j0);
    const auto right = static_cast<std::int64_t>(n - j0) - w;
    total += charge::qr_panel(w, mrem) + charge::update(w, mrem - w, right) +
             charge::gepp_block(w, right);
  }
  return total;
}

double flops_luprrp_steps(std::size_t m, std::size_t n, std::size_t b) {
  return static_cast<double>(flops_luprrp_steps_thirds(m, n, b)) / 3.0;
}

double flops_gepp(double m, double n) { return m * n * n - n * n * n / 3.0; }

double instrumented_flops(const ElimStats& stats) { return stats.flops.charged(); }

std::string to_string(CostAlgorithm a) {
  switch (a) {
    case CostAlgorithm::caluprrp: return "caluprrp";
    case CostAlgorithm::calu: return "calu";
    case CostAlgorithm::pdgetrf: return "pdgetrf";
  }
  return "?";
}

CostAlgorithm parse_cost_algorithm(const std::string& s) {
  if (s == "caluprrp") return CostAlgorithm::caluprrp;
  if (s == "calu") return CostAlgorithm::calu;
  if (s == "pdgetrf") return CostAlgorithm::pdgetrf;
  throw ParseError("unknown cost algorithm '" + s + "'");
}

CostReport perf_model(CostAlgorithm alg, const Layout& l) {
  require_dims(l.m, l.n, l.b, "perf_model");
  if (!(l.p_r >= 1.0 && l.p_c >= 1.0)) throw DimensionError("perf_model: grid sides must be >= 1");
  const double m = l.m, n = l.n, b = l.b, pr = l.p_r, pc = l.p_c;
  const double p = pr * pc;
  const double lr = std::log2(pr);
  const double lc = std::log2(pc);
  const double base_flops = (m * n * n - n * n * n / 3.0) / p;
  const double panel_words = (m * n - n * n / 2.0) / pr * lc;

  CostReport r;
  r.algorithm = alg;
  r.layout = l;
  switch (alg) {
    case CostAlgorithm::caluprrp:
      r.messages = 3.0 * n / b * lr + 2.0 * n / b * lc;
      r.words = (n * b + 1.5 * n * n / pc) * lr + panel_words;
      r.flops = base_flops + 2.0 / pr * (2.0 * m * n - n * n) * b + n * n * b / (2.0 * pc) +
                10.0 * n * b * b / 3.0 * lr;
      break;
    case CostAlgorithm::calu:
      r.messages = 3.0 * n / b * lr + 3.0 * n / b * lc;
      r.words = (n * b + 1.5 * n * n / pc) * lr + panel_words;
      r.flops = base_flops + 1.0 / pr * (2.0 * m * n - n * n) * b + n * n * b / (2.0 * pc) +
                n * b * b / 3.0 * (5.0 * lr - 1.0);
      break;
    case CostAlgorithm::pdgetrf:
      r.messages = 2.0 * n * (1.0 + 2.0 / b) * lr + 3.0 * n / b * lc;
      r.words = (n * b / 2.0 + 1.5 * n * n / pc) * lr + panel_words;
      r.flops = base_flops + 1.0 / pr * (m * n - n * n / 2.0) * b + n * n * b / (2.0 * pc);
      break;
  }
  return r;
}

double optimal_b_quarter_form(double m, double n, double p) {
  const double l = std::log2(std::sqrt(m * p / n));
  return 0.25 / (l * l) * std::sqrt(m * n / p);
}

double optimal_b_direct_form(double m, double n, double p) {
  const double l = std::log2(m * p / n);
  return 1.0 / (l * l) * std::sqrt(m * n / p);
}

OptimalLayout optimal_layout(double m, double n, double p) {
  if (!(m >= n && n >= 1.0 && p >= 1.0)) throw DimensionError("optimal_layout: need m >= n >= 1, P >= 1");
  OptimalLayout o;
  o.p_r = std::sqrt(m * p / n);
  o.p_c = std::sqrt(n * p / m);
  o.b = std::log2(m * p / n) > 0.0 ? optimal_b_direct_form(m, n, p) : n;
  o.p_r_int = floor_clamp(o.p_r, p);
  o.p_c_int = floor_clamp(o.p_c, p);
  o.b_int = floor_clamp(o.b, n);
  return o;
}

CostReport optimal_leading_terms(CostAlgorithm alg, double n, double p) {
  if (alg == CostAlgorithm::pdgetrf) throw DimensionError("optimal_leading_terms: pdgetrf is not modelled");
  if (!(p > 1.0 && n >= 1.0)) throw DimensionError("optimal_leading_terms: need P > 1");
  const double lp = std::log2(p);
  const double sp = std::sqrt(p);
  CostReport r;
  r.algorithm = alg;
  const auto o = optimal_layout(n, n, p);
  r.layout = o.real_layout(n, n);
  r.words = n * n / sp * (0.5 / lp + lp);
  const double n3p = n * n * n / p;
  if (alg == CostAlgorithm::caluprrp) {
    r.messages = 2.5 * sp * lp * lp * lp;
    r.flops = 2.0 * n3p / 3.0 + 2.5 * n3p / (lp * lp) + 5.0 * n3p / (3.0 * lp * lp * lp);
  } else {
    r.messages = 3.0 * sp * lp * lp * lp;
    r.flops = 2.0 * n3p / 3.0 + 1.5 * n3p / (lp * lp) + 5.0 * n3p / (6.0 * lp * lp * lp);
  }
  return r;
}

LowerBounds lower_bounds(double n, double mem) {
  if (!(n > 0.0 && mem > 0.0)) throw DimensionError("lower_bounds: need n, mem > 0");
  const double n3 = n * n * n;
  return {n3 / std::sqrt(mem), n3 / (mem * std::sqrt(mem))};
}

double total_time(const CostReport& r, const MachineModel& mm) {
  return mm.alpha * r.messages + mm.beta * r.words + mm.gamma * r.flops;
}

}  // namespace prrp
