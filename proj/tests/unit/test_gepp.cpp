#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "prrp/blas.hpp"
#include "prrp/gepp.hpp"
#include "prrp/matgen.hpp"

using namespace prrp;

namespace {

double residual(const DenseMatrix& a, const GeppFactors& f) {
  return testutil::fro(subtract(apply_row_perm(f.perm, a), matmul(f.l, f.u))) / testutil::fro(a);
}

double growth(const GeppFactors& f) { return f.intermediate_max / f.original_max; }

}  // namespace

TEST_CASE("gepp on the identity") {
  const auto f = gepp_factor(DenseMatrix::identity(5));
  CHECK(f.perm.is_identity());
  CHECK(f.l == DenseMatrix::identity(5));
  CHECK(f.u == DenseMatrix::identity(5));
  CHECK(f.intermediate_max == 1.0);
}

TEST_CASE("gepp growth on Wilkinson matrices") {
  CHECK(growth(gepp_factor(gen_wilkinson(8))) == 128.0);
  CHECK(growth(gepp_factor(gen_wilkinson(10))) == 512.0);
}

TEST_CASE("gepp growth on Foster matrices") {
  for (std::size_t n : {12u, 16u}) {
    const double expected = (2.0 / 3.0) * (std::ldexp(1.0, int(n) - 1) - 1.0);
    CHECK(growth(gepp_factor(gen_foster(n, 1.0, 1.0, 2.0 / 3.0))) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("gepp properties on random matrices") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::size_t n = 5 + 9 * s;
    const auto a = testutil::random_matrix(n, n, s);
    const auto f = gepp_factor(a);
    CHECK(residual(a, f) <= 1e-12);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < n; ++i) REQUIRE(std::fabs(f.l(i, j)) <= 1.0);
    CHECK(growth(f) >= 1.0);
  }
  const auto tall = testutil::random_matrix(30, 12, 99);
  const auto g = gepp_factor(tall);
  CHECK(g.l.rows() == 30);
  CHECK(residual(tall, g) <= 1e-12);
}

TEST_CASE("gepp on permutation matrices has no growth") {
  const auto p = testutil::random_perm(17, 5);
  const auto a = p.to_dense();
  const auto f = gepp_factor(a);
  CHECK(growth(f) == 1.0);
  CHECK(f.l == DenseMatrix::identity(17));
}

TEST_CASE("gepp ties pick the smallest row") {
  const auto a = DenseMatrix::from_rows({{1, 2}, {-1, 3}});
  CHECK(gepp_factor(a).perm.is_identity());
}

TEST_CASE("gepp singular column") {
  const auto a = DenseMatrix::from_rows({{1, 2, 3}, {2, 4, 5}, {3, 6, 7}});
  try {
    gepp_factor(a);
    FAIL("expected SingularError");
  } catch (const SingularError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("gepp_solve") {
  const auto b = testutil::random_matrix(4, 1, 3);
  CHECK(gepp_solve(gepp_factor(DenseMatrix::identity(4)), b) == b);
  const auto x = gepp_solve(gepp_factor(DenseMatrix::from_rows({{2, 0}, {0, 5}})),
                            DenseMatrix::from_rows({{2}, {10}}));
  CHECK(x == DenseMatrix::from_rows({{1}, {2}}));
  CHECK_THROWS_AS(gepp_solve(gepp_factor(DenseMatrix::identity(3)), DenseMatrix(2, 1)), DimensionError);
}
