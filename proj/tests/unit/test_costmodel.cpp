#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "prrp/costmodel.hpp"
#include "prrp/luprrp.hpp"
#include "prrp/matgen.hpp"

using namespace prrp;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Step-k charges summed by hand, in exact rational form times 3.
long long hand_steps_thirds(long long m, long long n, long long b) {
  long long t = 0;
  for (long long k = 1; k * b <= n; ++k) {
    t += 6 * (m - (k - 1) * b) * b * b - 2 * b * b * b;  // panel QR
    t += 6 * b * (m - k * b) * (n - k * b);              // trailing update
    t += 2 * b * b * b + 3 * (n - k * b) * b * b;        // diagonal GEPP
  }
  return t;
}

}  // namespace

TEST_CASE("closed-form LU_PRRP flops") {
  for (double n : {64.0, 100.0, 1024.0})
    for (double b : {1.0, 8.0, 32.0}) {
      const double sq = 2.0 / 3.0 * n * n * n + 1.5 * n * n * b + 2.0 * n * b * b;
      CHECK(rel(flops_luprrp(n, n, b), sq) < 1e-14);
    }
  // b = 1 differs from GEPP only in lower-order terms.
  const double m = 3000, n = 2000;
  CHECK(flops_luprrp(m, n, 1) - flops_gepp(m, n) == doctest::Approx(2 * m * n + 2 * n - n * n / 2));
  CHECK_THROWS_AS(flops_luprrp(10, 20, 4), DimensionError);
  CHECK_THROWS_AS(flops_luprrp(20, 10, 11), DimensionError);
  CHECK_THROWS_AS(flops_luprrp(20, 10, 0), DimensionError);
}

TEST_CASE("step charges match the hand sum and the instrumented counter") {
  for (auto [m, n, b] : {std::tuple{64, 64, 8}, {128, 128, 16}, {256, 256, 32}, {32, 32, 32}, {90, 60, 6}}) {
    CHECK(flops_luprrp_steps_thirds(m, n, b) == hand_steps_thirds(m, n, b));
    const auto f = luprrp_factor(gen_randn(m, n, 5), b);
    CHECK(f.stats.flops.charged_thirds == flops_luprrp_steps_thirds(m, n, b));
    CHECK(instrumented_flops(f.stats) == flops_luprrp_steps(m, n, b));
  }
  // Square: 2/3 n^3 + 1/2 n^2 b + 5/6 n b^2.
  CHECK(flops_luprrp_steps_thirds(64, 64, 8) == 2 * 64 * 64 * 64 + 64 * 64 * 8 * 3 / 2 + 5 * 64 * 8 * 8 / 2);
  // Single panel n = b: the three k = 1 terms.
  CHECK(flops_luprrp_steps_thirds(32, 32, 32) == 6 * 32 * 32 * 32 - 2 * 32 * 32 * 32 + 2 * 32 * 32 * 32);
  // A trailing panel narrower than b is charged with its own width.
  CHECK(flops_luprrp_steps_thirds(10, 10, 4) ==
        charge::qr_panel(4, 10) + charge::update(4, 6, 6) + charge::gepp_block(4, 6) +
            charge::qr_panel(4, 6) + charge::update(4, 2, 2) + charge::gepp_block(4, 2) +
            charge::qr_panel(2, 2) + charge::gepp_block(2, 0));
}

TEST_CASE("interchanges increase executed work but not charges") {
  const DenseMatrix a = gen_randn(96, 3);
  const auto loose = luprrp_factor(a, 16, 100.0);
  const auto tight = luprrp_factor(a, 16, 1.01);
  CHECK(loose.stats.flops.charged_thirds == tight.stats.flops.charged_thirds);
  REQUIRE(tight.stats.total_swaps() > loose.stats.total_swaps());
  CHECK(tight.stats.flops.executed > loose.stats.flops.executed);
}

TEST_CASE("perf model formulas") {
  const Layout l{4096, 4096, 64, 8, 8};
  CHECK(perf_model(CostAlgorithm::caluprrp, l).messages == 960.0);
  CHECK(perf_model(CostAlgorithm::calu, l).messages == 3 * 64 * 3 + 3 * 64 * 3);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const double pr = double(1 + rng() % 64), pc = double(1 + rng() % 64);
    const double n = double(64 + rng() % 8192);
    const double m = n + double(rng() % 8192);
    const double b = double(1 + rng() % 64);
    const Layout ly{m, n, b, pr, pc};
    const auto cp = perf_model(CostAlgorithm::caluprrp, ly);
    const auto ca = perf_model(CostAlgorithm::calu, ly);
    const auto pd = perf_model(CostAlgorithm::pdgetrf, ly);
    CHECK(cp.words == ca.words);
    if (pc > 1) {
      const double ratio = (3 * std::log2(pr) + 3 * std::log2(pc)) / (3 * std::log2(pr) + 2 * std::log2(pc));
      CHECK(rel(ca.messages / cp.messages, ratio) < 1e-12);
      CHECK(ca.messages > cp.messages);
    }
    if (pr > 1 && b >= 2) CHECK(pd.messages > cp.messages);
    // Extra flops of CALU_PRRP over CALU.
    const double extra = (2 * m * n - n * n) * b / pr + n * b * b / 3 * (5 * std::log2(pr) + 1);
    CHECK(rel(cp.flops - ca.flops, extra) < 1e-9);
    CHECK(cp.messages >= 0);
    CHECK(pd.words >= 0);
  }
  CHECK_THROWS_AS(perf_model(CostAlgorithm::calu, Layout{100, 100, 8, 0.5, 2}), DimensionError);
  CHECK_THROWS_AS(perf_model(CostAlgorithm::calu, Layout{100, 100, 200, 2, 2}), DimensionError);
}

TEST_CASE("optimal layout") {
  const auto o16 = optimal_layout(4096, 4096, 16);
  CHECK(o16.p_r == 4.0);
  CHECK(o16.p_c == 4.0);
  CHECK(o16.b == 4096.0 / 64.0);
  CHECK(o16.b_int == 64);

  const auto o1 = optimal_layout(500, 500, 1);
  CHECK(o1.p_r_int == 1);
  CHECK(o1.p_c_int == 1);
  CHECK(o1.b_int == 500);

  for (double p : {4.0, 64.0, 1000.0, 4096.0})
    for (auto [m, n] : {std::pair{1e4, 1e4}, {4e4, 1e4}}) {
      CHECK(rel(optimal_b_quarter_form(m, n, p), optimal_b_direct_form(m, n, p)) < 1e-12);
      const auto o = optimal_layout(m, n, p);
      CHECK(rel(o.p_r * o.p_c, p) < 1e-12);
      CHECK(o.p_r_int >= 1);
      CHECK(o.b_int <= n);
    }
}

TEST_CASE("optimal layout reproduces the leading terms") {
  const double n = 1 << 16;
  for (double p : {64.0, 1024.0, 16384.0}) {
    const auto o = optimal_layout(n, n, p);
    for (auto alg : {CostAlgorithm::caluprrp, CostAlgorithm::calu}) {
      const auto r = perf_model(alg, o.real_layout(n, n));
      const auto lead = optimal_leading_terms(alg, n, p);
      CHECK(rel(r.messages, lead.messages) < 1e-12);
      CHECK(rel(r.words, lead.words) < 1e-12);
    }
  }
  // CALU_PRRP flops match exactly; CALU's leading form drops -n b^2 / 3.
  const double nb = 1 << 24, pb = 1 << 20;
  const Layout big = optimal_layout(nb, nb, pb).real_layout(nb, nb);
  CHECK(rel(perf_model(CostAlgorithm::caluprrp, big).flops,
            optimal_leading_terms(CostAlgorithm::caluprrp, nb, pb).flops) < 1e-12);
  const double dropped = perf_model(CostAlgorithm::calu, big).flops -
                         optimal_leading_terms(CostAlgorithm::calu, nb, pb).flops;
  CHECK(rel(dropped, -nb * big.b * big.b / 3.0) < 1e-3);
}

TEST_CASE("lower bounds and total time") {
  const double n = 1000, p = 16;
  const auto lb = lower_bounds(n, n * n / p);
  CHECK(rel(lb.words, n * n * std::sqrt(p)) < 1e-14);
  CHECK(rel(lower_bounds(n, 100).messages / lower_bounds(n, 200).messages, std::pow(2.0, 1.5)) < 1e-14);

  CostReport r;
  r.messages = 3;
  r.words = 5;
  r.flops = 7;
  CHECK(total_time(r, {0, 0, 0}) == 0.0);
  CHECK(total_time(r, {1, 1, 1}) == 15.0);
  CHECK(total_time(r, {2, 1, 1}) > total_time(r, {1, 1, 1}));
  CHECK_THROWS_AS(lower_bounds(0, 1), DimensionError);
}

TEST_CASE("cost algorithm names") {
  for (auto a : {CostAlgorithm::caluprrp, CostAlgorithm::calu, CostAlgorithm::pdgetrf})
    CHECK(parse_cost_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_cost_algorithm("lapack"), ParseError);
}
