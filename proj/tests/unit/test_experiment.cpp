#include <cmath>
#include <sstream>

#include "doctest.h"
#include "prrp/experiment.hpp"

using namespace prrp;

namespace {

MatrixSpec randn(std::size_t n, double seed = 0) {
  MatrixSpec s;
  s.family = "randn";
  s.n = n;
  s.params["seed"] = seed;
  return s;
}

std::size_t count_lines(const std::string& s) {
  std::size_t k = 0;
  for (char c : s) k += c == '\n';
  return k;
}

}  // namespace

TEST_CASE("algorithm names round trip") {
  for (auto a : all_algorithms()) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("lu"), ParseError);
}

TEST_CASE("empty grid gives the header only") {
  const std::string csv = run_sweep({});
  CHECK(csv.rfind("# prrp1\nmatrix,", 0) == 0);
  CHECK(count_lines(csv) == 2);
}

TEST_CASE("sweeps are deterministic and independent of the thread count") {
  const auto grid = make_grid({randn(48), randn(64, 3)},
                              {Algorithm::gepp, Algorithm::luprrp, Algorithm::caluprrp_bt, Algorithm::caluprrp_ft,
                               Algorithm::calu_bt, Algorithm::block_parallel, Algorithm::block_pairwise},
                              {4, 8}, {2, 4}, 2.0, 1);
  const std::string one = run_sweep(grid, {1, nullptr});
  CHECK(one == run_sweep(grid, {1, nullptr}));
  CHECK(one == run_sweep(grid, {4, nullptr}));
  CHECK(one.find("failed") == std::string::npos);
  // gepp once per matrix; leaf-count algorithms once per p.
  CHECK(grid.size() == 2 * (1 + 2 * (1 + 2 + 1 + 2 + 2 + 1)));
}

TEST_CASE("invalid points are logged and dropped") {
  std::ostringstream log;
  std::vector<SweepPoint> pts = {{randn(16), RunConfig{Algorithm::luprrp, 32}, 1},
                                 {randn(16), RunConfig{Algorithm::luprrp, 4}, 1}};
  const auto recs = run_records(pts, {1, &log});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].cfg.b == 4);
  CHECK(log.str().find("skip") != std::string::npos);
}

TEST_CASE("numerical failure becomes a failed record") {
  DenseMatrix a = gen_randn(6, 6, 2);
  for (std::size_t i = 0; i < 6; ++i) a(i, 2) = 0.0;
  CHECK_THROWS_AS(run_factorization(a, "zero column", RunConfig{Algorithm::gepp, 1}), NumericalError);
  const auto r = run_guarded(a, "zero column", RunConfig{Algorithm::gepp, 1});
  CHECK(r.status.rfind("failed:", 0) == 0);
  CHECK(std::isnan(r.report.g_w));
  CHECK(run_csv_row(r).find("nan") != std::string::npos);
}

TEST_CASE("samples are averaged over consecutive seeds") {
  const RunConfig cfg{Algorithm::luprrp, 8};
  const auto mean = run_records({{randn(40, 5), cfg, 2}});
  REQUIRE(mean.size() == 1);
  CHECK(mean[0].samples == 2);
  RunConfig c1 = cfg;
  c1.rhs_seed += 1;
  const auto r0 = run_factorization(gen_randn(40, 40, 5), "", cfg);
  const auto r1 = run_factorization(gen_randn(40, 40, 6), "", c1);
  CHECK(mean[0].report.g_w == doctest::Approx((r0.report.g_w + r1.report.g_w) / 2).epsilon(1e-14));
  CHECK(mean[0].report.eta == doctest::Approx((r0.report.eta + r1.report.eta) / 2).epsilon(1e-14));
}

TEST_CASE("rectangular runs report growth and factorization error only") {
  const auto r = run_factorization(gen_randn(60, 20, 1), "tall", RunConfig{Algorithm::luprrp, 5});
  CHECK(r.report.g_w >= 1.0);
  CHECK(r.report.rel_fact_error < 1e-13);
  CHECK(std::isnan(r.report.eta));
}

TEST_CASE("presets are listed and analytic ones are exact") {
  CHECK(presets().size() >= 30);
  CHECK_THROWS_AS(run_preset("table99"), ParseError);
  const std::string t1 = run_preset("table1");
  CHECK(t1.find("8,2,1.424") != std::string::npos);
  CHECK(run_preset("table8").rfind("# prrp1\n", 0) == 0);
  PresetOptions small;
  small.max_n = 32;
  const std::string t2 = run_preset("table2", small);
  // Panel widths above the clamped order are skipped.
  CHECK(count_lines(t2) == 2 + 3);
  CHECK(t2 == run_preset("table2", small));
}
