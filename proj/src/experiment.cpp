#include <algorithm>
#include "prrp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <ostream>
#include <thread>

#include "prrp/blas.hpp"
#include "prrp/block_variants.hpp"
#include "prrp/gepp.hpp"
#include "prrp/luprrp.hpp"
#include "prrp/matrix_io.hpp"
#include "prrp/tournament.hpp"

namespace prrp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Factored {
  PermutationVec perm;
  DenseMatrix l;
  DenseMatrix u;
  ElimStats stats;
  Solver solve;
  std::size_t height = 0;
};

bool uses_binary_tree(Algorithm a) {
  return a == Algorithm::caluprrp_bt || a == Algorithm::calu_bt || a == Algorithm::block_parallel;
}
bool uses_flat_tree(Algorithm a) {
  return a == Algorithm::caluprrp_ft || a == Algorithm::calu_ft || a == Algorithm::block_pairwise;
}

Factored from_block(BlockLUFactors f) {
  Factored r;
  r.perm = f.perm;
  r.l = std::move(f.l);
  r.u = std::move(f.u);
  r.stats = std::move(f.stats);
  auto perm = r.perm;
  auto l = std::make_shared<DenseMatrix>(r.l);
  auto u = std::make_shared<DenseMatrix>(r.u);
  r.solve = [perm, l, u](const DenseMatrix& rhs) { return lu_solve(perm, *l, *u, rhs); };
  return r;
}

Factored from_variant(BlockVariantFactors f, std::size_t m) {
  Factored r;
  r.perm = f.perm;
  r.l = reconstruct_l(f, m);
  r.u = f.u;
  r.stats = f.stats;
  auto shared = std::make_shared<BlockVariantFactors>(std::move(f));
  r.solve = [shared](const DenseMatrix& rhs) { return block_variant_solve(*shared, rhs); };
  return r;
}

Factored factor(const DenseMatrix& a, const RunConfig& c) {
  Factored f;
  switch (c.alg) {
    case Algorithm::gepp: {
      GeppFactors g = gepp_factor(a);
      ElimStats st;
      st.original_max = g.original_max;
      st.intermediate_max = g.intermediate_max;
      BlockLUFactors b{g.perm, std::move(g.l), std::move(g.u), 1, st};
      f = from_block(std::move(b));
      break;
    }
    case Algorithm::luprrp: f = from_block(luprrp_factor(a, c.b, c.tau)); break;
    case Algorithm::caluprrp_bt:
      f = from_block(caluprrp_factor(a, c.b, c.tau, ReductionTree::binary(c.p)));
      break;
    case Algorithm::caluprrp_ft: f = from_block(caluprrp_factor(a, c.b, c.tau, ReductionTree::flat())); break;
    case Algorithm::calu_bt: f = from_block(calu_factor(a, c.b, ReductionTree::binary(c.p))); break;
    case Algorithm::calu_ft: f = from_block(calu_factor(a, c.b, ReductionTree::flat())); break;
    case Algorithm::block_parallel:
      f = from_variant(block_parallel_luprrp(a, c.b, c.tau, c.p), a.rows());
      break;
    case Algorithm::block_pairwise: f = from_variant(block_pairwise_luprrp(a, c.b, c.tau), a.rows()); break;
  }
  if (uses_binary_tree(c.alg)) f.height = ReductionTree::binary(c.p).height(a.rows(), c.b);
  if (uses_flat_tree(c.alg)) f.height = ReductionTree::flat().height(a.rows(), c.b);
  return f;
}

bool is_unit_lower_square(const DenseMatrix& l) {
  if (l.rows() != l.cols()) return false;
  for (std::size_t j = 0; j < l.cols(); ++j) {
    if (l(j, j) != 1.0) return false;
    for (std::size_t i = 0; i < j; ++i)
      if (l(i, j) != 0.0) return false;
  }
  return true;
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return s;
}

void put(std::string& out, double v) {
  char buf[32];
  if (std::isnan(v))
    std::snprintf(buf, sizeof buf, "nan");
  else
    std::snprintf(buf, sizeof buf, "%.6e", v);
  out += buf;
}

void nan_report(StabilityReport& r) {
  r.g_w = r.rel_fact_error = r.eta = r.w_before = r.w = r.n_ir = kNaN;
  r.hpl = {kNaN, kNaN, kNaN};
  r.norm_l1 = r.norm_linv1 = r.norm_u1 = r.norm_uinv1 = kNaN;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gepp: return "gepp";
    case Algorithm::luprrp: return "luprrp";
    case Algorithm::caluprrp_bt: return "caluprrp_bt";
    case Algorithm::caluprrp_ft: return "caluprrp_ft";
    case Algorithm::calu_bt: return "calu_bt";
    case Algorithm::calu_ft: return "calu_ft";
    case Algorithm::block_parallel: return "block_parallel";
    case Algorithm::block_pairwise: return "block_pairwise";
  }
  return "?";
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> v = {
      Algorithm::gepp,    Algorithm::luprrp,  Algorithm::caluprrp_bt,    Algorithm::caluprrp_ft,
      Algorithm::calu_bt, Algorithm::calu_ft, Algorithm::block_parallel, Algorithm::block_pairwise};
  return v;
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : all_algorithms())
    if (to_string(a) == s) return a;
  throw ParseError("unknown algorithm '" + s + "'");
}

RunRecord run_factorization(const DenseMatrix& a, const std::string& label, const RunConfig& cfg) {
  RunRecord rec;
  rec.matrix = label;
  rec.rows = a.rows();
  rec.cols = a.cols();
  rec.cfg = cfg;
  const Factored f = factor(a, cfg);
  rec.height = f.height;
  rec.swaps = static_cast<double>(f.stats.total_swaps());
  rec.charged_flops = f.stats.flops.charged();

  StabilityReport& r = rec.report;
  if (a.rows() == a.cols()) {
    const DenseMatrix rhs = gen_randn(a.rows(), 1, cfg.rhs_seed);
    r = solve_report(a, f.solve, f.stats, rhs, cfg.max_ir);
  } else {
    nan_report(r);
    r.g_w = growth_factor(f.stats);
  }
  r.rel_fact_error = rel_factorization_error(a, f.perm, f.l, f.u);
  r.norm_u1 = norm(f.u, NormKind::one);
  r.norm_uinv1 = norm(inverse_upper(f.u), NormKind::one);
  r.norm_l1 = norm(f.l, NormKind::one);
  r.norm_linv1 = is_unit_lower_square(f.l) ? norm(inverse_lower_unit(f.l), NormKind::one) : kNaN;
  return rec;
}

RunRecord run_guarded(const DenseMatrix& a, const std::string& label, const RunConfig& cfg) {
  try {
    return run_factorization(a, label, cfg);
  } catch (const NumericalError& e) {
    RunRecord rec;
    rec.matrix = label;
    rec.rows = a.rows();
    rec.cols = a.cols();
    rec.cfg = cfg;
    rec.status = std::string("failed: ") + e.what();
    nan_report(rec.report);
    rec.swaps = rec.charged_flops = kNaN;
    return rec;
  }
}

std::string run_csv_header() {
  return std::string("# ") + kReportSchema + "\nmatrix,rows,cols,alg,b,p,height,tau,samples,status," +
         report_csv_header() + ",swaps,charged_flops";
}

std::string run_csv_row(const RunRecord& r) {
  std::string out = sanitize(r.matrix);
  out += ',' + std::to_string(r.rows) + ',' + std::to_string(r.cols) + ',' + to_string(r.cfg.alg) + ',' +
         std::to_string(r.cfg.b) + ',' + std::to_string(r.cfg.p) + ',' + std::to_string(r.height) + ',' +
         format_double(r.cfg.tau) + ',' + std::to_string(r.samples) + ',' + sanitize(r.status) + ',';
  out += report_csv_row(r.report);
  out += ',';
  put(out, r.swaps);
  out += ',';
  put(out, r.charged_flops);
  return out;
}

std::optional<std::string> skip_reason(const SweepPoint& pt) {
  const std::size_t n = pt.matrix.n;
  if (pt.cfg.b == 0) return "panel width 0";
  if (pt.cfg.b > n) return "b = " + std::to_string(pt.cfg.b) + " exceeds n = " + std::to_string(n);
  if ((uses_binary_tree(pt.cfg.alg)) && pt.cfg.p == 0) return "zero leaves";
  if (pt.samples == 0) return "zero samples";
  if (pt.cfg.tau <= 1.0 && pt.cfg.alg != Algorithm::gepp && pt.cfg.alg != Algorithm::calu_bt &&
      pt.cfg.alg != Algorithm::calu_ft)
    return "tau must exceed 1";
  return std::nullopt;
}

namespace {

RunRecord run_point(const SweepPoint& pt) {
  RunRecord mean;
  const std::string label = pt.matrix.to_string();
  for (std::size_t s = 0; s < pt.samples; ++s) {
    MatrixSpec spec = pt.matrix;
    if (pt.samples > 1) spec.params["seed"] = pt.matrix.param("seed", 0.0) + double(s);
    RunConfig cfg = pt.cfg;
    cfg.rhs_seed = pt.cfg.rhs_seed + s;
    const RunRecord r = run_guarded(generate(spec), label, cfg);
    if (r.status != "ok") {
      RunRecord failed = r;
      failed.cfg = pt.cfg;
      failed.samples = pt.samples;
      return failed;
    }
    if (s == 0) {
      mean = r;
      mean.cfg = pt.cfg;
      mean.samples = pt.samples;
      continue;
    }
    StabilityReport& m = mean.report;
    const StabilityReport& x = r.report;
    m.g_w += x.g_w;
    m.rel_fact_error += x.rel_fact_error;
    m.eta += x.eta;
    m.w_before += x.w_before;
    m.w += x.w;
    for (int i = 0; i < 3; ++i) m.hpl[i] += x.hpl[i];
    m.n_ir += x.n_ir;
    m.norm_l1 += x.norm_l1;
    m.norm_linv1 += x.norm_linv1;
    m.norm_u1 += x.norm_u1;
    m.norm_uinv1 += x.norm_uinv1;
    m.diverged = m.diverged || x.diverged;
    mean.swaps += r.swaps;
    mean.charged_flops += r.charged_flops;
  }
  if (pt.samples > 1) {
    const double k = double(pt.samples);
    StabilityReport& m = mean.report;
    for (double* v : {&m.g_w, &m.rel_fact_error, &m.eta, &m.w_before, &m.w, &m.hpl[0], &m.hpl[1], &m.hpl[2],
                      &m.n_ir, &m.norm_l1, &m.norm_linv1, &m.norm_u1, &m.norm_uinv1, &mean.swaps,
                      &mean.charged_flops})
      *v /= k;
  }
  return mean;
}

}  // namespace

std::vector<RunRecord> run_records(const std::vector<SweepPoint>& points, const SweepOptions& opt) {
  std::vector<const SweepPoint*> valid;
  for (const auto& pt : points) {
    if (auto why = skip_reason(pt)) {
      if (opt.log) *opt.log << "skip " << pt.matrix.to_string() << " " << to_string(pt.cfg.alg) << ": " << *why << "\n";
      continue;
    }
    valid.push_back(&pt);
  }
  std::vector<std::optional<RunRecord>> rows(valid.size());
  std::vector<std::string> skipped(valid.size());
  std::vector<std::exception_ptr> errors(valid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < valid.size(); i = next++) {
      try {
        rows[i] = run_point(*valid[i]);
      } catch (const DimensionError& e) {
        skipped[i] = e.what();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, valid.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RunRecord> out;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (rows[i]) {
      out.push_back(std::move(*rows[i]));
    } else if (opt.log) {
      *opt.log << "skip " << valid[i]->matrix.to_string() << " " << to_string(valid[i]->cfg.alg) << ": "
               << skipped[i] << "\n";
    }
  }
  return out;
}

std::string run_sweep(const std::vector<SweepPoint>& points, const SweepOptions& opt) {
  std::string out = run_csv_header() + "\n";
  for (const auto& r : run_records(points, opt)) out += run_csv_row(r) + "\n";
  return out;
}

std::vector<SweepPoint> make_grid(const std::vector<MatrixSpec>& matrices, const std::vector<Algorithm>& algs,
                                  const std::vector<std::size_t>& bs, const std::vector<std::size_t>& ps,
                                  double tau, std::uint64_t rhs_seed, std::size_t samples) {
  std::vector<SweepPoint> out;
  for (const auto& m : matrices)
    for (Algorithm a : algs) {
      // GEPP has no panel or tree parameter: one point per matrix.
      const std::vector<std::size_t> one{1};
      const auto& bl = a == Algorithm::gepp ? one : bs;
      const auto& pl = uses_binary_tree(a) ? ps : one;
      for (std::size_t b : bl)
        for (std::size_t p : pl) out.push_back({m, RunConfig{a, b, p, tau, rhs_seed, 10}, samples});
    }
  return out;
}

}  // namespace prrp
