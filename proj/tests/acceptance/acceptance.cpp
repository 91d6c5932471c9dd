// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "../unit/oracles.hpp"
#include "prrp/block_variants.hpp"
#include "prrp/costmodel.hpp"
#include "prrp/experiment.hpp"
#include "prrp/gepp.hpp"
#include "prrp/luprrp.hpp"
#include "prrp/matgen.hpp"
#include "prrp/metrics.hpp"
#include "prrp/pivoted_qr.hpp"
#include "prrp/tournament.hpp"

using namespace prrp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    pass = false;
    if (detail.size() < 600) detail += (detail.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

MatrixSpec spec(const std::string& family, std::size_t n, std::map<std::string, double> params = {}) {
  MatrixSpec s;
  s.family = family;
  s.n = n;
  s.params = std::move(params);
  return s;
}

SweepPoint pt(const MatrixSpec& m, Algorithm alg, std::size_t b, std::size_t p = 1, double tau = 2.0) {
  return {m, RunConfig{alg, b, p, tau, 1, 10}, 1};
}

std::string where(const RunRecord& r) {
  return r.matrix + " " + to_string(r.cfg.alg) + " b=" + std::to_string(r.cfg.b) +
         (r.cfg.p > 1 ? " p=" + std::to_string(r.cfg.p) : "");
}

// log10 of (1 + tau b)^e.
double log10_bound(double tau, double b, double e) { return e * std::log10(1.0 + tau * b); }

bool is_calu_prrp(Algorithm a) { return a == Algorithm::caluprrp_bt || a == Algorithm::caluprrp_ft; }

// ---------------------------------------------------------------------------
// Shared random grid: GEPP, LU_PRRP, CALU_PRRP (both trees) and the two block
// variants on randn n in {256, 512, 1024}, b in {8, 16, 32, 64}.

const std::vector<std::size_t> kGridN = {256, 512, 1024};
const std::vector<std::size_t> kGridB = {8, 16, 32, 64};
constexpr std::size_t kGridLeaves = 16;

const std::vector<RunRecord>& random_grid() {
  static const std::vector<RunRecord> recs = [] {
    std::vector<SweepPoint> pts;
    for (auto n : kGridN) {
      const auto m = spec("randn", n, {{"seed", double(n)}});
      pts.push_back(pt(m, Algorithm::gepp, 1));
      for (auto b : kGridB) {
        pts.push_back(pt(m, Algorithm::luprrp, b));
        pts.push_back(pt(m, Algorithm::caluprrp_bt, b, kGridLeaves));
        pts.push_back(pt(m, Algorithm::caluprrp_ft, b));
        pts.push_back(pt(m, Algorithm::block_parallel, b, 4));
        pts.push_back(pt(m, Algorithm::block_pairwise, b));
      }
    }
    return run_records(pts);
  }();
  return recs;
}

// Pathological suite at n = 2048.
const std::vector<std::pair<std::size_t, std::size_t>> kTreePairs = {{128, 8}, {64, 16}, {64, 8},
                                                                     {32, 32}, {32, 16}, {32, 8}};
const std::vector<std::size_t> kPanels = {8, 16, 32, 64, 128};

const MatrixSpec& foster2048() {
  static const MatrixSpec s = spec("foster", 2048, {{"c", 1}, {"h", 1}, {"k", 2.0 / 3.0}});
  return s;
}
const MatrixSpec& wright2048() {
  static const MatrixSpec s = spec("wright", 2048, {{"h", 0.3}});
  return s;
}

const std::vector<RunRecord>& patho_runs() {
  static const std::vector<RunRecord> recs = [] {
    std::vector<SweepPoint> pts;
    const auto wilk = spec("wilkinson", 2048);
    for (auto b : kPanels) {
      pts.push_back(pt(wilk, Algorithm::luprrp, b));
      pts.push_back(pt(foster2048(), Algorithm::luprrp, b));
      pts.push_back(pt(wright2048(), Algorithm::luprrp, b));
      pts.push_back(pt(foster2048(), Algorithm::caluprrp_ft, b));
      pts.push_back(pt(wright2048(), Algorithm::caluprrp_ft, b));
    }
    for (auto [p, b] : kTreePairs) {
      pts.push_back(pt(foster2048(), Algorithm::caluprrp_bt, b, p));
      pts.push_back(pt(wright2048(), Algorithm::caluprrp_bt, b, p));
    }
    return run_records(pts);
  }();
  return recs;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const double taus[] = {1.1, 2.0, 3.0};
  std::size_t small = 0, swaps = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const double tau = taus[t % 3];
    // A third of the instances are small enough for exhaustive enumeration.
    std::size_t rows, cols;
    if (t % 3 == 0) {
      rows = 1 + rng() % 8;
      cols = rows + 1 + rng() % (12 - rows);
    } else {
      rows = 1 + rng() % 32;
      cols = rows + 1 + rng() % (128 - rows);
    }
    const auto a = testutil::random_matrix(rows, cols, 7000 + t);
    const auto r = strong_rrqr(a, rows, tau, FormQ::no);
    swaps += r.swap_count;
    std::vector<std::size_t> sel(r.qr.perm.map().begin(), r.qr.perm.map().begin() + rows);
    const double lib = testutil::max_abs(r.l_block);
    const double indep = oracle::subset_max_ratio(a, sel);
    worst = std::max(worst, indep / tau);
    o.require(lib <= tau, "instance " + std::to_string(t) + ": max|R11^-1 R12| = " + sci(lib) + " > tau");
    // Independent recomputation by Gauss-Jordan differs from the library in rounding only.
    o.require(indep <= tau * (1 + 1e-10), "instance " + std::to_string(t) + ": oracle ratio " + sci(indep));
    if (cols <= 12) {
      ++small;
      const bool lib_feasible = lib <= tau;
      const bool oracle_feasible = oracle::best_subset_ratio(a) <= tau;
      o.require(lib_feasible == oracle_feasible, "feasibility disagrees on instance " + std::to_string(t));
    }
  }
  o.require(small > 0, "no exhaustive instances");
  o.note("200 instances, " + std::to_string(small) + " exhaustive, " + std::to_string(swaps) +
         " interchanges, max ratio/tau " + sci(worst));
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& r : random_grid()) {
    if (r.cfg.alg != Algorithm::gepp && r.cfg.alg != Algorithm::luprrp && !is_calu_prrp(r.cfg.alg)) continue;
    ++count;
    o.require(r.status == "ok", where(r) + ": " + r.status);
    worst = std::max(worst, r.report.rel_fact_error);
    o.require(r.report.rel_fact_error <= 1e-13, where(r) + ": " + sci(r.report.rel_fact_error));
  }
  o.note(std::to_string(count) + " runs, max ||PA-LU||_F/||A||_F " + sci(worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::map<std::string, double> gepp;
  for (const auto& r : random_grid())
    if (r.cfg.alg == Algorithm::gepp) gepp[r.matrix] = r.report.g_w;
  std::size_t lu_runs = 0, below_gepp = 0;
  for (const auto& r : random_grid()) {
    if (r.cfg.alg == Algorithm::gepp) continue;
    o.require(r.status == "ok", where(r) + ": " + r.status);
    const double n = double(r.rows), b = double(r.cfg.b);
    const double lg = std::log10(r.report.g_w);
    double exponent = std::ceil(n / b);
    if (is_calu_prrp(r.cfg.alg)) exponent = n / b * double(r.height + 1) - 1.0;
    o.require(lg <= log10_bound(r.cfg.tau, b, exponent), where(r) + ": g_W " + sci(r.report.g_w) + " above bound");
    if (r.cfg.alg == Algorithm::luprrp) {
      ++lu_runs;
      o.require(lg < (n - 1) * std::log10(2.0), where(r) + ": g_W not below 2^(n-1)");
      if (r.report.g_w < gepp.at(r.matrix)) ++below_gepp;
    }
  }
  o.require(10 * below_gepp >= 9 * lu_runs, "LU_PRRP g_W below GEPP's on " + std::to_string(below_gepp) + "/" +
                                                std::to_string(lu_runs) + " runs (need 90%)");
  o.note("LU_PRRP below GEPP on " + std::to_string(below_gepp) + "/" + std::to_string(lu_runs));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto& recs = patho_runs();
  double worst_err = 0.0;
  for (const auto& r : recs) {
    o.require(r.status == "ok", where(r) + ": " + r.status);
    const double g = r.report.g_w;
    const std::string fam = r.matrix.substr(0, r.matrix.find(':'));
    if (r.cfg.alg == Algorithm::luprrp) {
      if (fam == "wilkinson" || fam == "wright") o.require(g == 1.0, where(r) + ": g_W " + sci(g) + ", expected 1");
      if (fam == "foster") o.require(std::fabs(g - 2.66) <= 0.01, where(r) + ": g_W " + sci(g) + ", expected 2.66");
    } else {
      if (fam == "foster") o.require(std::fabs(g - 1.33) <= 0.01, where(r) + ": g_W " + sci(g) + ", expected 1.33");
      if (fam == "wright") o.require(g == 1.0, where(r) + ": g_W " + sci(g) + ", expected 1");
    }
    worst_err = std::max(worst_err, r.report.rel_fact_error);
    o.require(r.report.rel_fact_error <= 1e-14, where(r) + ": relative error " + sci(r.report.rel_fact_error));
  }

  const auto g16 = gepp_factor(gen_foster(16, 1, 1, 2.0 / 3.0));
  const double want16 = 2.0 / 3.0 * (std::ldexp(1.0, 15) - 1.0);
  const double got16 = g16.intermediate_max / g16.original_max;
  o.require(got16 == want16, "GEPP Foster n=16: " + sci(got16) + " vs " + sci(want16));
  const auto g64 = gepp_factor(gen_foster(64, 1, 1, 2.0 / 3.0));
  const double log_want64 = std::log2(2.0 / 3.0) + std::log2(std::ldexp(1.0, 63) - 1.0);
  const double log_g64 = std::log2(g64.intermediate_max) - std::log2(g64.original_max);
  o.require(std::fabs(log_g64 - log_want64) <= 1e-12 * log_want64, "GEPP Foster n=64: log2 g " + sci(log_g64));

  const DenseMatrix gw = generate(spec("genwilk", 1024, {{"r", 1}, {"seed", 0}}));
  const auto calu = calu_factor(gw, 128, ReductionTree::flat());
  const double lg = std::log10(calu.stats.intermediate_max) - std::log10(calu.stats.original_max);
  o.require(lg > 100.0, "CALU flat b=128 on genwilk n=1024: log10 g_W " + sci(lg));
  o.note(std::to_string(recs.size()) + " pathological runs, max relative error " + sci(worst_err) +
         ", CALU genwilk log10 g_W " + sci(lg));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double ceiling[3] = {8.09, 8.04e-2, 1.60e-2};
  double worst[3] = {0, 0, 0};
  std::size_t solves = 0;
  auto check = [&](const RunRecord& r, bool random) {
    if (r.status != "ok" || std::isnan(r.report.hpl[0])) return;
    if (r.cfg.alg != Algorithm::gepp && r.cfg.alg != Algorithm::luprrp && !is_calu_prrp(r.cfg.alg)) return;
    ++solves;
    for (int i = 0; i < 3; ++i) {
      o.require(r.report.hpl[i] < 16.0, where(r) + ": HPL" + std::to_string(i + 1) + " = " + sci(r.report.hpl[i]));
      if (random) worst[i] = std::max(worst[i], r.report.hpl[i]);
    }
  };
  for (const auto& r : random_grid()) check(r, true);
  for (const auto& r : patho_runs()) check(r, false);
  for (int i = 0; i < 3; ++i)
    o.require(worst[i] <= 10 * ceiling[i], "random HPL" + std::to_string(i + 1) + " max " + sci(worst[i]) +
                                               " exceeds 10x " + sci(ceiling[i]));
  o.note(std::to_string(solves) + " solves, random maxima " + sci(worst[0]) + " / " + sci(worst[1]) + " / " +
         sci(worst[2]));
  return o;
}

Outcome criterion6() {
  Outcome o;
  double eta = 0, w = 0, nir = 0;
  for (const auto& r : random_grid()) {
    if (r.rows != 1024 || (r.cfg.alg != Algorithm::luprrp && !is_calu_prrp(r.cfg.alg))) continue;
    o.require(r.status == "ok", where(r) + ": " + r.status);
    const double wmax = std::max(r.report.w_before, r.report.w);
    o.require(r.report.eta <= 1e-13, where(r) + ": eta " + sci(r.report.eta));
    o.require(wmax <= 1e-13, where(r) + ": w " + sci(wmax));
    o.require(r.report.n_ir <= 3, where(r) + ": N_IR " + sci(r.report.n_ir));
    eta = std::max(eta, r.report.eta);
    w = std::max(w, wmax);
    nir = std::max(nir, r.report.n_ir);
  }
  o.note("n=1024 maxima: eta " + sci(eta) + ", w " + sci(w) + ", N_IR " + sci(nir));
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (auto [n, b] : {std::pair<std::size_t, std::size_t>{64, 8}, {128, 16}, {256, 32}}) {
    // A huge threshold leaves the column-pivoted QR untouched.
    const auto f = luprrp_factor(gen_randn(n, n, 11), b, 1e300);
    o.require(f.stats.total_swaps() == 0, "swaps occurred at n=" + std::to_string(n));
    const double charged = f.stats.flops.charged();
    const double closed = flops_luprrp(double(n), double(n), double(b));
    const bool integral = closed == std::floor(closed);
    o.require(integral && double(f.stats.flops.charged_thirds) == 3.0 * closed,
              "n=" + std::to_string(n) + " b=" + std::to_string(b) + ": charged " + sci(charged) +
                  " (3x = " + std::to_string(f.stats.flops.charged_thirds) + "), closed form " + sci(closed) +
                  (integral ? "" : " (not an integer)"));
  }
  o.note("charged flops equal the closed form");
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const double n = double(64 + rng() % 16384);
    const Layout l{n + double(rng() % 16384), n, double(1 + rng() % 64), double(1 + rng() % 128),
                   double(1 + rng() % 128)};
    const double a = perf_model(CostAlgorithm::caluprrp, l).words;
    const double c = perf_model(CostAlgorithm::calu, l).words;
    o.require(a == c, "layout " + std::to_string(t) + ": words " + sci(a) + " vs " + sci(c));
  }
  std::string ratios;
  for (double n : {65536.0, 1048576.0}) {
    const double p = 1024;
    const auto lay = optimal_layout(n, n, p).int_layout(n, n);
    const double unit = std::sqrt(p) * std::pow(std::log2(p), 3);
    const double rp = perf_model(CostAlgorithm::caluprrp, lay).messages / unit;
    const double rc = perf_model(CostAlgorithm::calu, lay).messages / unit;
    o.require(std::fabs(rp / 2.5 - 1) <= 0.15, "CALU_PRRP messages ratio " + sci(rp));
    o.require(std::fabs(rc / 3.0 - 1) <= 0.15, "CALU messages ratio " + sci(rc));
    ratios += " " + sci(rp) + "/" + sci(rc);
  }
  for (int k = 2; k <= 20; ++k)
    for (double n : {4096.0, 65536.0}) {
      const double p = std::ldexp(1.0, k);
      const double q = optimal_b_quarter_form(n, n, p), d = optimal_b_direct_form(n, n, p);
      o.require(std::fabs(q - d) <= 1e-12 * std::fabs(d), "b forms differ at P=2^" + std::to_string(k));
    }
  o.note("words equal on 50 layouts; messages/(sqrt(P) log^3 P) at P=2^10:" + ratios);
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (std::size_t n : {256u, 512u})
    for (std::size_t b : {4u, 8u, 16u}) {
      const DenseMatrix a = gen_randn(n, n, 90 + n);
      const double g1 = growth_factor(block_parallel_luprrp(a, b, 2.0, 1).stats);
      const double g2 = growth_factor(luprrp_factor(a, b, 2.0).stats);
      o.require(std::fabs(g1 - g2) <= 1e-10 * g2, "p=1 n=" + std::to_string(n) + " b=" + std::to_string(b) +
                                                      ": " + sci(g1) + " vs " + sci(g2));
    }
  const DenseMatrix a = gen_randn(1024, 1024, 0);
  const double gp = growth_factor(block_parallel_luprrp(a, 2, 2.0, 32).stats);
  const double gl = growth_factor(luprrp_factor(a, 2, 2.0).stats);
  o.require(gp > gl, "block parallel g_W " + sci(gp) + " not above LU_PRRP " + sci(gl));
  double worst = 0.0;
  for (std::size_t n : {1024u, 2048u})
    for (std::size_t b : {2u, 4u, 8u, 16u, 32u}) {
      const double g = growth_factor(block_pairwise_luprrp(gen_randn(n, n, n + b), b, 2.0).stats);
      worst = std::max(worst, g / double(n));
      o.require(g < double(n), "block pairwise n=" + std::to_string(n) + " b=" + std::to_string(b) + ": " + sci(g));
    }
  o.note("block parallel p=32 " + sci(gp) + " vs LU_PRRP " + sci(gl) + "; pairwise max g_W/n " + sci(worst));
  return o;
}

Outcome criterion10() {
  Outcome o;
  PresetOptions one;
  one.max_n = 128;
  PresetOptions two = one;
  two.jobs = 2;
  for (const auto& p : presets()) {
    const std::string x = run_preset(p.name, one);
    const std::string y = run_preset(p.name, two);
    o.require(x == y, "preset " + p.name + " differs between runs");
    o.require(x.rfind("# prrp1\n", 0) == 0, "preset " + p.name + " lacks the schema line");
  }
  o.note(std::to_string(presets().size()) + " presets byte-identical at max_n=128");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"strong RRQR bound", criterion1},       {"factorization residual", criterion2},
      {"growth envelopes", criterion3},        {"pathological suite", criterion4},
      {"HPL gate", criterion5},                {"backward-error ceilings", criterion6},
      {"flop-count identity", criterion7},     {"cost model", criterion8},
      {"block variants", criterion9},          {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
