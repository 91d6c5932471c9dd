#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "prrp/costmodel.hpp"
#include "prrp/experiment.hpp"
#include "prrp/luprrp.hpp"
#include "prrp/tournament.hpp"

namespace prrp {

namespace {

using Sizes = std::vector<std::size_t>;

const Sizes kPanels = {8, 16, 32, 64, 128};
constexpr std::uint64_t kRhsSeed = 1;

MatrixSpec spec(const std::string& family, std::size_t n, std::map<std::string, double> params = {}) {
  MatrixSpec s;
  s.family = family;
  s.n = n;
  s.params = std::move(params);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  if (std::isnan(v))
    std::snprintf(buf, sizeof buf, "nan");
  else
    std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string schema_line() { return std::string("# ") + kReportSchema + "\n"; }

std::vector<MatrixSpec> special_suite(std::size_t n) {
  static const std::set<std::string> excluded = {"identity", "randn", "wilkinson", "genwilk", "foster", "wright"};
  std::vector<MatrixSpec> out;
  for (const auto& f : matrix_families())
    if (!excluded.count(f)) out.push_back(spec(f, n));
  return out;
}

std::vector<MatrixSpec> randn_suite(const Sizes& ns) {
  std::vector<MatrixSpec> out;
  for (auto n : ns) out.push_back(spec("randn", n, {{"seed", 0}}));
  return out;
}

SweepPoint point(MatrixSpec m, Algorithm alg, std::size_t b, std::size_t p = 1, std::size_t samples = 1) {
  return {std::move(m), RunConfig{alg, b, p, 2.0, kRhsSeed, 10}, samples};
}

std::vector<SweepPoint> append(std::vector<SweepPoint> a, const std::vector<SweepPoint>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Binary-tree (P, b) pairs of the pathological CALU_PRRP tables.
const std::vector<std::pair<std::size_t, std::size_t>> kTreePairs = {{128, 8}, {64, 16}, {64, 8},
                                                                     {32, 32}, {32, 16}, {32, 8}};

std::vector<SweepPoint> tree_pairs(const MatrixSpec& m, Algorithm alg,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<SweepPoint> out;
  for (auto [p, b] : pairs) out.push_back(point(m, alg, b, p));
  return out;
}

// Sizes above max_n are clamped; points that become identical are dropped.
std::vector<SweepPoint> clamp(std::vector<SweepPoint> pts, std::size_t max_n) {
  if (max_n == 0) return pts;
  std::vector<SweepPoint> out;
  std::set<std::tuple<std::string, int, std::size_t, std::size_t, std::size_t>> seen;
  for (auto& pt : pts) {
    pt.matrix.n = std::min(pt.matrix.n, max_n);
    auto key = std::make_tuple(pt.matrix.to_string(), int(pt.cfg.alg), pt.cfg.b, pt.cfg.p, pt.samples);
    if (seen.insert(key).second) out.push_back(std::move(pt));
  }
  return out;
}

std::string bounds_luprrp_base() {
  std::string out = schema_line() + "b,tau,base\n";
  for (auto b : kPanels) {
    const double base = std::pow(1.0 + 2.0 * double(b), 1.0 / double(b));
    out += std::to_string(b) + ",2," + fmt(base) + "\n";
  }
  return out;
}

std::string bounds_table() {
  std::string out = schema_line() + "algorithm,shape,n,b,height,tau,log10_bound,condition_holds\n";
  const double n = 2048, tau = 2;
  for (auto b : kPanels)
    for (std::size_t h : {1u, 3u, 5u, 7u}) {
      const double B = double(b), H = double(h), l2 = std::log10(2.0), lt = std::log10(1.0 + tau * B);
      const std::string cond = growth_condition(b, tau, h) ? "1" : "0";
      auto row = [&](const char* alg, const char* shape, double log10v, const std::string& c) {
        out += std::string(alg) + "," + shape + "," + std::to_string(std::size_t(n)) + "," + std::to_string(b) +
               "," + std::to_string(h) + ",2," + fmt(log10v) + "," + c + "\n";
      };
      row("tslu", "m_x_b+1", B * (H + 1) * l2, "");
      row("caluprrp_panel", "m_x_b+1", (H + 1) * lt, cond);
      row("gepp", "m_x_b+1", B * l2, "");
      row("luprrp", "m_x_b+1", lt, "");
      row("calu", "m_x_n", (n * (H + 1) - 1) * l2, "");
      row("caluprrp", "m_x_n", (n * (H + 1) / B - 1) * lt, cond);
      row("gepp", "m_x_n", (n - 1) * l2, "");
      row("luprrp", "m_x_n", n / B * lt, "");
    }
  return out;
}

std::string cost_table() {
  std::string out = schema_line() + "algorithm,m,n,b,p_r,p_c,messages,words,flops\n";
  for (double n : {4096.0, 16384.0})
    for (double mf : {1.0, 4.0})
      for (double b : {16.0, 64.0})
        for (auto [pr, pc] : {std::pair{2.0, 2.0}, {4.0, 4.0}, {8.0, 8.0}, {16.0, 16.0}, {32.0, 32.0}, {16.0, 4.0}})
          for (auto alg : {CostAlgorithm::caluprrp, CostAlgorithm::calu, CostAlgorithm::pdgetrf}) {
            const auto r = perf_model(alg, Layout{mf * n, n, b, pr, pc});
            out += to_string(alg) + "," + fmt(mf * n) + "," + fmt(n) + "," + fmt(b) + "," + fmt(pr) + "," +
                   fmt(pc) + "," + fmt(r.messages) + "," + fmt(r.words) + "," + fmt(r.flops) + "\n";
          }
  return out;
}

std::string optimal_table() {
  std::string out = schema_line() +
                    "algorithm,n,P,p_r,p_c,b,messages,messages_leading,messages_per_sqrtP_log3P,words,"
                    "words_leading,words_lower,flops,flops_leading,flops_lower\n";
  for (double n : {65536.0, 1048576.0})
    for (int k : {4, 6, 8, 10, 12, 14})
      for (auto alg : {CostAlgorithm::caluprrp, CostAlgorithm::calu}) {
        const double p = std::ldexp(1.0, k);
        const auto o = optimal_layout(n, n, p);
        const auto r = perf_model(alg, o.int_layout(n, n));
        const auto lead = optimal_leading_terms(alg, n, p);
        const auto lb = lower_bounds(n, n * n / p);
        const double lp = std::log2(p);
        out += to_string(alg) + "," + fmt(n) + "," + fmt(p) + "," + std::to_string(o.p_r_int) + "," +
               std::to_string(o.p_c_int) + "," + std::to_string(o.b_int) + "," + fmt(r.messages) + "," +
               fmt(lead.messages) + "," + fmt(r.messages / (std::sqrt(p) * lp * lp * lp)) + "," + fmt(r.words) +
               "," + fmt(lead.words) + "," + fmt(lb.words / p) + "," + fmt(r.flops) + "," + fmt(lead.flops) + "," +
               fmt(2.0 * n * n * n / (3.0 * p)) + "\n";
      }
  return out;
}

// Ratio of max(error, 2^-53) between each algorithm and GEPP on the same
// matrix; the componentwise error is the unrefined one.
std::string ratio_table(const std::vector<MatrixSpec>& mats, const std::vector<SweepPoint>& candidates,
                        const PresetOptions& opt) {
  std::vector<SweepPoint> pts;
  for (const auto& m : mats) pts.push_back(point(m, Algorithm::gepp, 1));
  pts = append(std::move(pts), candidates);
  pts = clamp(std::move(pts), opt.max_n);
  const auto recs = run_records(pts, {opt.jobs, opt.log});
  std::map<std::string, const RunRecord*> gepp;
  for (const auto& r : recs)
    if (r.cfg.alg == Algorithm::gepp) gepp[r.matrix] = &r;
  auto floor_eps = [](double v) { return std::max(v, kRatioEps); };
  std::string out = schema_line() + "matrix,alg,b,p,status,ratio_fact,ratio_eta,ratio_w\n";
  for (const auto& r : recs) {
    if (r.cfg.alg == Algorithm::gepp) continue;
    const auto it = gepp.find(r.matrix);
    double rf = NAN, re = NAN, rw = NAN;
    std::string status = r.status;
    if (it == gepp.end() || it->second->status != "ok") {
      status = "gepp unavailable";
    } else if (r.status == "ok") {
      const auto& g = it->second->report;
      rf = floor_eps(r.report.rel_fact_error) / floor_eps(g.rel_fact_error);
      re = floor_eps(r.report.eta) / floor_eps(g.eta);
      rw = floor_eps(r.report.w_before) / floor_eps(g.w_before);
    }
    for (char& ch : status)
      if (ch == ',') ch = ';';
    out += r.matrix + "," + to_string(r.cfg.alg) + "," + std::to_string(r.cfg.b) + "," + std::to_string(r.cfg.p) +
           "," + status + "," + fmt(rf) + "," + fmt(re) + "," + fmt(rw) + "\n";
  }
  return out;
}

std::vector<SweepPoint> over_panels(const MatrixSpec& m, Algorithm alg, const Sizes& bs = kPanels) {
  std::vector<SweepPoint> out;
  for (auto b : bs) out.push_back(point(m, alg, b));
  return out;
}

std::vector<SweepPoint> stability_points(const std::string& name) {
  const auto wilk = spec("wilkinson", 2048);
  const auto genwilk = spec("genwilk", 2048, {{"r", 1}, {"seed", 0}});
  const auto foster = spec("foster", 2048, {{"c", 1}, {"h", 1}, {"k", 2.0 / 3.0}});
  const auto wright = spec("wright", 2048, {{"h", 0.3}});
  const Sizes rand_sizes = {256, 512, 1024};

  if (name == "table2") return over_panels(wilk, Algorithm::luprrp);
  if (name == "table3") return over_panels(genwilk, Algorithm::luprrp);
  if (name == "table4") return over_panels(foster, Algorithm::luprrp);
  if (name == "table5") return over_panels(wright, Algorithm::luprrp);
  if (name == "ftpatho") return over_panels(genwilk, Algorithm::caluprrp_ft);
  if (name == "btpatho") return tree_pairs(genwilk, Algorithm::caluprrp_bt, kTreePairs);
  if (name == "ftfoster") return over_panels(foster, Algorithm::caluprrp_ft);
  if (name == "btfoster") return tree_pairs(foster, Algorithm::caluprrp_bt, kTreePairs);
  if (name == "ftwright") return over_panels(wright, Algorithm::caluprrp_ft);
  if (name == "btwright") return tree_pairs(wright, Algorithm::caluprrp_bt, kTreePairs);

  std::vector<SweepPoint> pts;
  if (name == "randn_luprrp" || name == "randn_ft" || name == "randn_bt") {
    for (const auto& m : randn_suite(rand_sizes)) {
      if (name == "randn_luprrp")
        for (auto b : kPanels) pts.push_back(point(m, Algorithm::luprrp, b, 1, 3));
      if (name == "randn_ft")
        for (auto b : kPanels) pts.push_back(point(m, Algorithm::caluprrp_ft, b, 1, 3));
      if (name == "randn_bt")
        for (std::size_t p : {16u, 32u, 64u})
          for (std::size_t b : {8u, 16u, 32u}) pts.push_back(point(m, Algorithm::caluprrp_bt, b, p, 3));
      pts.push_back(point(m, Algorithm::gepp, 1, 1, 3));
    }
    return pts;
  }
  if (name == "special_gepp" || name == "special_luprrp" || name == "special_ft" || name == "special_bt") {
    const std::size_t n = 512;
    for (const auto& m : special_suite(n)) {
      if (name == "special_gepp") pts.push_back(point(m, Algorithm::gepp, 1));
      if (name == "special_luprrp") pts.push_back(point(m, Algorithm::luprrp, 8));
      if (name == "special_ft") pts.push_back(point(m, Algorithm::caluprrp_ft, 8));
      // Leaves of 64 x 8 as in the reference layout.
      if (name == "special_bt") pts.push_back(point(m, Algorithm::caluprrp_bt, 8, n / 64));
    }
    return pts;
  }
  if (name == "solver_bt") {
    const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> grid = {
        {2048, 128, 16}, {2048, 64, 32}, {2048, 64, 16}, {1024, 64, 16}};
    for (auto [n, p, b] : grid) {
      const auto m = spec("randn", n, {{"seed", 0}});
      pts.push_back(point(m, Algorithm::caluprrp_bt, b, p));
      pts.push_back(point(m, Algorithm::calu_bt, b, p));
    }
    for (const auto& m : randn_suite({2048, 1024})) pts.push_back(point(m, Algorithm::gepp, 1));
    return pts;
  }
  if (name == "solver_ft") {
    for (const auto& m : randn_suite({2048, 1024})) {
      for (std::size_t b : {8u, 16u, 32u, 64u}) {
        pts.push_back(point(m, Algorithm::caluprrp_ft, b));
        pts.push_back(point(m, Algorithm::calu_ft, b));
      }
      pts.push_back(point(m, Algorithm::gepp, 1));
    }
    return pts;
  }
  if (name == "growth_luprrp") {
    for (const auto& m : randn_suite({256, 512, 1024, 2048})) {
      for (auto b : kPanels) pts.push_back(point(m, Algorithm::luprrp, b));
      pts.push_back(point(m, Algorithm::gepp, 1));
    }
    return pts;
  }
  if (name == "growth_bt") {
    for (const auto& m : randn_suite({256, 512, 1024, 2048})) {
      for (std::size_t p : {16u, 32u, 64u})
        for (std::size_t b : {8u, 16u, 32u}) pts.push_back(point(m, Algorithm::caluprrp_bt, b, p));
      pts.push_back(point(m, Algorithm::luprrp, 64));
      pts.push_back(point(m, Algorithm::gepp, 1));
    }
    return pts;
  }
  if (name == "growth_ft") {
    for (const auto& m : randn_suite({256, 512, 1024, 2048})) {
      for (auto b : kPanels) pts.push_back(point(m, Algorithm::caluprrp_ft, b));
      pts.push_back(point(m, Algorithm::luprrp, 64));
      pts.push_back(point(m, Algorithm::gepp, 1));
    }
    return pts;
  }
  if (name == "fig5") {
    for (const auto& m : randn_suite({64, 128, 256, 512, 1024, 2048}))
      for (std::size_t b : {2u, 4u, 8u, 16u}) {
        pts.push_back(point(m, Algorithm::luprrp, b));
        for (std::size_t p : {16u, 32u}) pts.push_back(point(m, Algorithm::block_parallel, b, p));
      }
    return pts;
  }
  if (name == "fig6") {
    for (const auto& m : randn_suite({1024, 2048}))
      for (std::size_t b : {2u, 4u, 8u, 16u, 32u}) pts.push_back(point(m, Algorithm::block_pairwise, b));
    return pts;
  }
  throw ParseError("unknown preset '" + name + "'");
}

}  // namespace

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> v = {
      {"table1", "growth bound base (1 + tau b)^(1/b) of LU_PRRP, tau = 2"},
      {"table2", "LU_PRRP on the Wilkinson matrix, n = 2048, b = 8..128"},
      {"table3", "LU_PRRP on a generalized Wilkinson matrix, n = 2048"},
      {"table4", "LU_PRRP on the Foster matrix (c = 1, h = 1, k = 2/3), n = 2048"},
      {"table5", "LU_PRRP on the Wright matrix (h = 0.3), n = 2048"},
      {"table6", "log10 growth bounds of TSLU, CALU_PRRP, CALU, GEPP and LU_PRRP"},
      {"table7", "parallel cost model of CALU_PRRP, CALU and PDGETRF over 2D layouts"},
      {"table8", "costs at the optimal layout against leading terms and lower bounds"},
      {"ftpatho", "flat-tree CALU_PRRP on a generalized Wilkinson matrix, n = 2048"},
      {"btpatho", "binary-tree CALU_PRRP on a generalized Wilkinson matrix, n = 2048"},
      {"ftfoster", "flat-tree CALU_PRRP on the Foster matrix, n = 2048"},
      {"btfoster", "binary-tree CALU_PRRP on the Foster matrix, n = 2048"},
      {"ftwright", "flat-tree CALU_PRRP on the Wright matrix, n = 2048"},
      {"btwright", "binary-tree CALU_PRRP on the Wright matrix, n = 2048"},
      {"randn_luprrp", "LU_PRRP and GEPP on random matrices, 3 samples"},
      {"special_gepp", "GEPP on the special-matrix suite, n = 512"},
      {"special_luprrp", "LU_PRRP (b = 8) on the special-matrix suite, n = 512"},
      {"solver_bt", "linear solver: binary-tree CALU_PRRP, CALU and GEPP"},
      {"solver_ft", "linear solver: flat-tree CALU_PRRP, CALU and GEPP"},
      {"randn_ft", "flat-tree CALU_PRRP and GEPP on random matrices, 3 samples"},
      {"special_ft", "flat-tree CALU_PRRP (b = 8) on the special-matrix suite, n = 512"},
      {"randn_bt", "binary-tree CALU_PRRP and GEPP on random matrices, 3 samples"},
      {"special_bt", "binary-tree CALU_PRRP (b = 8, leaves of 64 rows) on the special-matrix suite"},
      {"growth_luprrp", "growth of LU_PRRP against GEPP on random matrices"},
      {"growth_bt", "growth of binary-tree CALU_PRRP on random matrices"},
      {"growth_ft", "growth of flat-tree CALU_PRRP on random matrices"},
      {"summary", "LU_PRRP / GEPP backward error ratios, random and special matrices"},
      {"casummary", "CALU_PRRP / GEPP backward error ratios, random and special matrices"},
      {"fig5", "block parallel LU_PRRP growth, P = 16 and 32, b = 2..16"},
      {"fig6", "block pairwise LU_PRRP growth, b = 2..32"},
  };
  return v;
}

std::string run_preset(const std::string& name, const PresetOptions& opt) {
  if (name == "table1") return bounds_luprrp_base();
  if (name == "table6") return bounds_table();
  if (name == "table7") return cost_table();
  if (name == "table8") return optimal_table();
  if (name == "summary" || name == "casummary") {
    std::vector<MatrixSpec> mats = randn_suite({256, 512, 1024});
    for (auto& m : special_suite(512)) mats.push_back(m);
    std::vector<SweepPoint> cand;
    for (const auto& m : mats) {
      if (name == "summary") {
        cand.push_back(point(m, Algorithm::luprrp, 8));
      } else {
        cand.push_back(point(m, Algorithm::caluprrp_ft, 8));
        cand.push_back(point(m, Algorithm::caluprrp_bt, 8, std::max<std::size_t>(1, m.n / 64)));
      }
    }
    return ratio_table(mats, cand, opt);
  }
  return run_sweep(clamp(stability_points(name), opt.max_n), {opt.jobs, opt.log});
}

}  // namespace prrp
