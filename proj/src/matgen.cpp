#include "prrp/matgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "prrp/matrix_io.hpp"
#include "prrp/random.hpp"

namespace prrp {
namespace {

using Params = std::set<std::string>;

struct Family {
  std::string name;
  Params keys;
  std::size_t min_n;
};

// Parameter keys accepted per family; "seed" marks randomized families.
const std::vector<Family>& families() {
  static const std::vector<Family> f = {
      {"identity", {}, 1},
      {"randn", {"seed"}, 1},
      {"wilkinson", {}, 2},
      {"genwilk", {"r", "seed"}, 2},
      {"foster", {"c", "h", "k"}, 2},
      {"wright", {"h"}, 4},
      {"hadamard", {}, 1},
      {"parter", {}, 1},
      {"ris", {}, 1},
      {"kms", {"rho"}, 1},
      {"hilb", {}, 1},
      {"lotkin", {}, 1},
      {"cauchy", {"seed"}, 1},
      {"lehmer", {}, 1},
      {"minij", {}, 1},
      {"frank", {}, 1},
      {"fiedler", {"seed"}, 1},
      {"pei", {"seed", "alpha"}, 1},
      {"tridiag", {}, 1},
      {"jordbloc", {"lambda"}, 1},
      {"compan", {"seed"}, 1},
      {"kahan", {"theta", "pert"}, 1},
      {"dorr", {"theta"}, 2},
      {"demmel", {"seed"}, 1},
      {"circul", {"seed"}, 1},
      {"hankel", {"seed"}, 1},
      {"moler", {}, 1},
      {"riemann", {}, 1},
      {"chebvand", {}, 2},
      {"chebspec", {}, 1},
  };
  return f;
}

const Family* find_family(const std::string& name) {
  for (const auto& f : families())
    if (f.name == name) return &f;
  return nullptr;
}

double parse_real(std::string_view tok, const std::string& what) {
  auto one = [&](std::string_view s) {
    double v{};
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw ParseError("invalid value for " + what + ": '" + std::string(tok) + "'");
    return v;
  };
  const auto slash = tok.find('/');
  if (slash == std::string_view::npos) return one(tok);
  const double den = one(tok.substr(slash + 1));
  if (den == 0.0) throw ParseError("zero denominator for " + what);
  return one(tok.substr(0, slash)) / den;
}

std::uint64_t seed_of(const MatrixSpec& s) {
  const double v = s.param("seed", 0.0);
  if (v < 0 || v != std::floor(v)) throw ParseError("seed must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

DenseMatrix fill(std::size_t n, auto&& f) {
  DenseMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = f(i, j);
  return a;
}

std::vector<double> randn_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

double chebyshev(std::size_t k, double x) {
  double t0 = 1.0, t1 = x;
  if (k == 0) return t0;
  for (std::size_t i = 1; i < k; ++i) {
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

DenseMatrix chebspec(std::size_t n_in) {
  // Order n_in + 1 differentiation matrix with its first row and column
  // removed (the k = 1 variant, which is nonsingular).
  const std::size_t n = n_in;  // highest node index
  const std::size_t N = n + 1;
  std::vector<double> x(N), d(N, 1.0);
  for (std::size_t i = 0; i < N; ++i) x[i] = std::cos(double(i) * std::numbers::pi / double(n));
  d[0] = 2.0;
  d[n] = 2.0;
  DenseMatrix c(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      c(i, j) = (d[i] / d[j]) / (x[i] - x[j] + (i == j ? 1.0 : 0.0));
  c(0, 0) = (2.0 * double(n) * double(n) + 1.0) / 6.0;
  for (std::size_t i = 1; i < N; ++i) {
    if (i % 2 == 1) {  // even 1-based index
      for (std::size_t r = 0; r < N; ++r) c(r, i) = -c(r, i);
      for (std::size_t q = 0; q < N; ++q) c(i, q) = -c(i, q);
    }
    if (i < n)
      c(i, i) = -x[i] / (2.0 * (1.0 - x[i] * x[i]));
    else
      c(n, n) = -c(0, 0);
  }
  return c.block(1, 1, n_in, n_in);
}

DenseMatrix dorr(std::size_t n, double theta) {
  std::vector<double> c(n), e(n), d(n);
  const double h = 1.0 / double(n + 1);
  const std::size_t m = (n + 1) / 2;
  const double term = theta / (h * h);
  for (std::size_t i = 1; i <= n; ++i) {
    const double ih = double(i) * h;
    if (i <= m) {
      c[i - 1] = -term;
      e[i - 1] = c[i - 1] - (0.5 - ih) / h;
    } else {
      e[i - 1] = -term;
      c[i - 1] = e[i - 1] + (0.5 - ih) / h;
    }
    d[i - 1] = -(c[i - 1] + e[i - 1]);
  }
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = d[i];
    if (i + 1 < n) {
      a(i + 1, i) = c[i + 1];
      a(i, i + 1) = e[i];
    }
  }
  return a;
}

DenseMatrix kahan(std::size_t n, double theta, double pert) {
  const double s = std::sin(theta), c = std::cos(theta);
  DenseMatrix a(n, n);
  double si = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = si + pert * 0x1p-52 * double(n - i);
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = -c * si;
    si *= s;
  }
  return a;
}

}  // namespace

double MatrixSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string MatrixSpec::to_string() const {
  std::string out = family + ":" + std::to_string(n);
  for (const auto& [k, v] : params) out += ":" + k + "=" + format_double(v);
  return out;
}

MatrixSpec parse_matrix_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 2 || parts[0].empty())
    throw ParseError("matrix spec must look like family:n[:key=value...], got '" + std::string(text) + "'");
  MatrixSpec s;
  s.family = std::string(parts[0]);
  std::size_t n{};
  const auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), n);
  if (parts[1].empty() || ec != std::errc{} || ptr != parts[1].data() + parts[1].size() || n == 0)
    throw ParseError("matrix spec: invalid order '" + std::string(parts[1]) + "'");
  s.n = n;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("matrix spec: expected key=value, got '" + std::string(parts[i]) + "'");
    const std::string key(parts[i].substr(0, eq));
    s.params[key] = parse_real(parts[i].substr(eq + 1), key);
  }
  return s;
}

const std::vector<std::string>& matrix_families() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : families()) v.push_back(f.name);
    return v;
  }();
  return names;
}

const std::vector<std::string>& unsupported_families() {
  static const std::vector<std::string> names = {
      "randcorr", "randcolu", "randsvd", "sprandn", "poisson", "toeppd", "prolate",
      "invhess",  "house",    "toeppen", "condex",  "forsythe", "compar"};
  return names;
}

DenseMatrix gen_randn(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a(m, n);
  for (auto& v : a.data()) v = rng.normal();
  return a;
}

DenseMatrix gen_randn(std::size_t n, std::uint64_t seed) { return gen_randn(n, n, seed); }

DenseMatrix gen_rand(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a(m, n);
  for (auto& v : a.data()) v = rng.uniform();
  return a;
}

DenseMatrix gen_wilkinson(std::size_t n) {
  if (n < 2) throw DimensionError("wilkinson: n must be at least 2");
  return fill(n, [n](std::size_t i, std::size_t j) {
    if (j == n - 1 || i == j) return 1.0;
    return i > j ? -1.0 : 0.0;
  });
}

DenseMatrix generalized_wilkinson_normalized(const DenseMatrix& u, const DenseMatrix& v) {
  const std::size_t n = u.rows();
  if (n < 2 || v.rows() != n || u.cols() != v.cols())
    throw DimensionError("generalized wilkinson: u and v must both be n x r with n >= 2");
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < u.cols(); ++k) s += u(i, k) * v(j, k);
      t(i, j) = -s;
    }
  for (std::size_t k = 1; k < n; ++k) {
    double mx = 0.0;
    for (std::size_t j = k; j < n; ++j) mx = std::max(mx, std::fabs(t(k - 1, j)));
    const double umax = mx * (1.0 + 1.0 / double(n));
    for (std::size_t j = k; j < n; ++j) t(k - 1, j) /= umax;
  }
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) a(i, j) = t(j, i);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, n - 1) = 1.0;
  return a;
}

DenseMatrix generalized_wilkinson_from(const DenseMatrix& u, const DenseMatrix& v) {
  const std::size_t n = u.rows();
  if (n < 2 || v.rows() != n || u.cols() != v.cols())
    throw DimensionError("generalized wilkinson: u and v must both be n x r with n >= 2");
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < u.cols(); ++k) s += u(j, k) * v(i, k);
      a(i, j) = s;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, n - 1) = 1.0;
  return a;
}

DenseMatrix gen_generalized_wilkinson(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (r == 0) throw DimensionError("generalized wilkinson: r must be at least 1");
  Rng rng(seed);
  DenseMatrix u(n, r), v(n, r);
  for (auto& x : u.data()) x = rng.uniform();
  for (auto& x : v.data()) x = rng.uniform();
  return generalized_wilkinson_normalized(u, v);
}

DenseMatrix gen_foster(std::size_t n, double c, double h, double k) {
  if (n < 2) throw DimensionError("foster: n must be at least 2");
  if (c == 0.0) throw DimensionError("foster: c must be nonzero");
  const double kh = k * h;
  DenseMatrix a(n, n);
  a(0, 0) = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    a(i, 0) = -kh / 2.0;
    for (std::size_t j = 1; j < i; ++j) a(i, j) = -kh;
    a(i, i) = 1.0 - kh / 2.0;
  }
  for (std::size_t i = 0; i < n; ++i) a(i, n - 1) = -1.0 / c;
  a(n - 1, n - 1) = 1.0 - 1.0 / c - kh / 2.0;
  return a;
}

DenseMatrix gen_wright(std::size_t n, double h) {
  if (n < 4 || n % 2 != 0) throw DimensionError("wright: n must be even and at least 4");
  DenseMatrix a = DenseMatrix::identity(n);
  const double d = 1.0 - h / 6.0;
  for (std::size_t blk = 1; blk < n / 2; ++blk) {
    const std::size_t r = 2 * blk, c = 2 * (blk - 1);
    a(r, c) = -d;
    a(r, c + 1) = -h;
    a(r + 1, c) = -h;
    a(r + 1, c + 1) = -d;
  }
  a(0, n - 2) = 1.0;
  a(1, n - 1) = 1.0;
  return a;
}

DenseMatrix gen_special(const MatrixSpec& s) {
  const std::size_t n = s.n;
  const std::string& f = s.family;
  const auto dn = [](std::size_t i) { return static_cast<double>(i); };
  if (f == "hadamard") {
    if (n == 0 || (n & (n - 1)) != 0) throw DimensionError("hadamard: n must be a power of 2");
    DenseMatrix h(1, 1, 1.0);
    while (h.rows() < n) {
      const std::size_t k = h.rows();
      DenseMatrix g(2 * k, 2 * k);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) {
          g(i, j) = g(i + k, j) = g(i, j + k) = h(i, j);
          g(i + k, j + k) = -h(i, j);
        }
      h = std::move(g);
    }
    return h;
  }
  if (f == "parter")
    return fill(n, [&](std::size_t i, std::size_t j) { return 1.0 / (dn(i) - dn(j) + 0.5); });
  if (f == "ris")  // 1-based: 0.5 / (n - i - j + 1.5)
    return fill(n, [&](std::size_t i, std::size_t j) {
      return 0.5 / (dn(n) - dn(i + 1) - dn(j + 1) + 1.5);
    });
  if (f == "kms") {
    const double rho = s.param("rho", 0.5);
    return fill(n, [&](std::size_t i, std::size_t j) {
      return std::pow(rho, std::fabs(dn(i) - dn(j)));
    });
  }
  if (f == "hilb") return fill(n, [&](std::size_t i, std::size_t j) { return 1.0 / dn(i + j + 1); });
  if (f == "lotkin")
    return fill(n, [&](std::size_t i, std::size_t j) { return i == 0 ? 1.0 : 1.0 / dn(i + j + 1); });
  if (f == "cauchy") {
    Rng rng(seed_of(s));
    const auto x = randn_vector(rng, n);
    const auto y = randn_vector(rng, n);
    return fill(n, [&](std::size_t i, std::size_t j) { return 1.0 / (x[i] + y[j]); });
  }
  if (f == "lehmer")
    return fill(n, [&](std::size_t i, std::size_t j) {
      return dn(std::min(i, j) + 1) / dn(std::max(i, j) + 1);
    });
  if (f == "minij")
    return fill(n, [&](std::size_t i, std::size_t j) { return dn(std::min(i, j) + 1); });
  if (f == "frank")
    return fill(n, [&](std::size_t i, std::size_t j) {
      return j + 1 >= i ? dn(n - std::max(i, j)) : 0.0;
    });
  if (f == "fiedler") {
    Rng rng(seed_of(s));
    const auto c = randn_vector(rng, n);
    return fill(n, [&](std::size_t i, std::size_t j) { return std::fabs(c[i] - c[j]); });
  }
  if (f == "pei") {
    double alpha = s.param("alpha", NAN);
    if (std::isnan(alpha)) {
      Rng rng(seed_of(s));
      alpha = rng.normal();
    }
    return fill(n, [&](std::size_t i, std::size_t j) { return 1.0 + (i == j ? alpha : 0.0); });
  }
  if (f == "tridiag")
    return fill(n, [&](std::size_t i, std::size_t j) {
      if (i == j) return 2.0;
      return (i + 1 == j || j + 1 == i) ? -1.0 : 0.0;
    });
  if (f == "jordbloc") {
    const double lambda = s.param("lambda", 1.0);
    return fill(n, [&](std::size_t i, std::size_t j) {
      if (i == j) return lambda;
      return i + 1 == j ? 1.0 : 0.0;
    });
  }
  if (f == "compan") {
    Rng rng(seed_of(s));
    const auto p = randn_vector(rng, n + 1);
    DenseMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) a(0, j) = -p[j + 1] / p[0];
    for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = 1.0;
    return a;
  }
  if (f == "kahan") return kahan(n, s.param("theta", 1.2), s.param("pert", 25.0));
  if (f == "dorr") return dorr(n, s.param("theta", 0.01));
  if (f == "demmel") {
    DenseMatrix r = gen_rand(n, n, seed_of(s));
    return fill(n, [&](std::size_t i, std::size_t j) {
      const double d = std::pow(10.0, 14.0 * dn(i) / dn(n));
      return d * ((i == j ? 1.0 : 0.0) + 1e-7 * r(i, j));
    });
  }
  if (f == "circul") {
    Rng rng(seed_of(s));
    const auto v = randn_vector(rng, n);
    return fill(n, [&](std::size_t i, std::size_t j) { return v[(j + n - i) % n]; });
  }
  if (f == "hankel") {
    Rng rng(seed_of(s));
    const auto c = randn_vector(rng, n);
    auto r = randn_vector(rng, n);
    r[0] = c[n - 1];
    return fill(n, [&](std::size_t i, std::size_t j) { return i + j < n ? c[i + j] : r[i + j + 1 - n]; });
  }
  if (f == "moler")
    return fill(n, [&](std::size_t i, std::size_t j) {
      return i == j ? dn(i + 1) : dn(std::min(i, j) + 1) - 2.0;
    });
  if (f == "riemann")
    return fill(n, [&](std::size_t i, std::size_t j) { return (j + 2) % (i + 2) == 0 ? dn(i + 1) : -1.0; });
  if (f == "chebvand")
    return fill(n, [&](std::size_t i, std::size_t j) { return chebyshev(i, dn(j) / dn(n - 1)); });
  if (f == "chebspec") return chebspec(n);
  throw ParseError("unknown special matrix family '" + f + "'");
}

DenseMatrix generate(const MatrixSpec& s) {
  if (std::find(unsupported_families().begin(), unsupported_families().end(), s.family) !=
      unsupported_families().end())
    throw UnsupportedFamilyError(s.family);
  const Family* fam = find_family(s.family);
  if (!fam) throw ParseError("unknown matrix family '" + s.family + "'");
  for (const auto& [k, v] : s.params)
    if (!fam->keys.count(k))
      throw ParseError("matrix family '" + s.family + "' has no parameter '" + k + "'");
  if (s.n < fam->min_n)
    throw DimensionError("matrix family '" + s.family + "' needs n >= " + std::to_string(fam->min_n));
  if (s.family == "identity") return DenseMatrix::identity(s.n);
  if (s.family == "randn") return gen_randn(s.n, seed_of(s));
  if (s.family == "wilkinson") return gen_wilkinson(s.n);
  if (s.family == "genwilk") {
    const double r = s.param("r", 1.0);
    if (r < 1 || r != std::floor(r)) throw ParseError("genwilk: r must be a positive integer");
    return gen_generalized_wilkinson(s.n, static_cast<std::size_t>(r), seed_of(s));
  }
  if (s.family == "foster")
    return gen_foster(s.n, s.param("c", 1.0), s.param("h", 1.0), s.param("k", 2.0 / 3.0));
  if (s.family == "wright") return gen_wright(s.n, s.param("h", 0.3));
  return gen_special(s);
}

}  // namespace prrp
