#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "prrp/costmodel.hpp"
#include "prrp/error.hpp"
#include "prrp/experiment.hpp"
#include "prrp/matgen.hpp"
#include "prrp/matrix_io.hpp"

using namespace prrp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitIo = 5;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

DenseMatrix load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

// "caluprrp" and "calu" take the tree from --tree.
Algorithm resolve_algorithm(const std::string& name, const std::string& tree) {
  if (name == "caluprrp" || name == "calu") return parse_algorithm(name + "_" + tree);
  return parse_algorithm(name);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

MatrixSpec with_seed(MatrixSpec s, std::uint64_t seed, bool seed_given) {
  if (seed_given) s.params["seed"] = double(seed);
  return s;
}

std::string cost_csv(const std::vector<double>& ns, const std::vector<double>& bs,
                     const std::vector<std::string>& grids, double m_factor) {
  std::string out = std::string("# ") + kReportSchema + "\nalgorithm,m,n,b,p_r,p_c,messages,words,flops\n";
  for (double n : ns)
    for (double b : bs)
      for (const auto& g : grids) {
        const auto parts = split(g, 'x');
        if (parts.size() != 2) throw ParseError("grid '" + g + "' is not of the form PRxPC");
        double pr = 0, pc = 0;
        try {
          pr = std::stod(parts[0]);
          pc = std::stod(parts[1]);
        } catch (const std::exception&) {
          throw ParseError("grid '" + g + "' is not numeric");
        }
        for (auto alg : {CostAlgorithm::caluprrp, CostAlgorithm::calu, CostAlgorithm::pdgetrf}) {
          const auto r = perf_model(alg, Layout{m_factor * n, n, b, pr, pc});
          char line[256];
          std::snprintf(line, sizeof line, "%s,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e\n", to_string(alg).c_str(),
                        m_factor * n, n, b, pr, pc, r.messages, r.words, r.flops);
          out += line;
        }
      }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LU with panel rank revealing pivoting: factorizations and experiment runner"};
  app.require_subcommand(1);

  std::string out_path;
  std::string gen_text, in_path, alg_name = "luprrp", tree = "bt";
  std::size_t b = 8, p = 1;
  double tau = 2.0;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("gen", "write a generated matrix in text form");
  gen->add_option("spec", gen_text, "family:n[:key=value...]")->required();
  auto* gen_seed = gen->add_option("--seed", seed, "overrides the spec seed");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* fac = app.add_subcommand("factor", "factor one matrix and print its metrics as a CSV row");
  auto* src = fac->add_option_group("source");
  src->add_option("--gen", gen_text, "generator spec family:n[:key=value...]");
  src->add_option("--in", in_path, "matrix text file");
  src->require_option(1);
  fac->add_option("--alg", alg_name, "gepp, luprrp, caluprrp, calu, caluprrp_bt, ..., block_pairwise");
  fac->add_option("--b", b, "panel width")->check(CLI::PositiveNumber);
  fac->add_option("--p", p, "leaves of the binary tree / blocks of block_parallel")->check(CLI::PositiveNumber);
  fac->add_option("--tau", tau, "RRQR threshold");
  fac->add_option("--tree", tree, "tree for caluprrp/calu")->check(CLI::IsMember({"bt", "ft"}));
  auto* fac_seed = fac->add_option("--seed", seed, "matrix seed for --gen");
  std::uint64_t rhs_seed = 1;
  fac->add_option("--rhs-seed", rhs_seed, "seed of the random right-hand side");
  fac->add_option("--out", out_path, "output file (default stdout)");

  auto* sw = app.add_subcommand("sweep", "run a named preset or a cross-product grid");
  std::string preset;
  std::vector<std::string> families = {"randn"}, algs = {"luprrp"};
  std::vector<std::string> sizes;
  std::vector<std::size_t> bs = {8}, ps = {1};
  std::size_t samples = 1, jobs = 1, max_n = 0;
  bool list = false;
  sw->add_option("--preset", preset, "named preset (see --list)");
  sw->add_flag("--list", list, "list presets and exit");
  sw->add_option("--family", families, "matrix families for a grid")->delimiter(',');
  sw->add_option("--sizes", sizes, "matrix orders (may be empty)")
      ->delimiter(',')
      ->expected(0, CLI::detail::expected_max_vector_size);
  sw->add_option("--b", bs, "panel widths")->delimiter(',');
  sw->add_option("--p", ps, "leaf counts")->delimiter(',');
  sw->add_option("--alg", algs, "algorithms")->delimiter(',');
  sw->add_option("--tau", tau, "RRQR threshold");
  sw->add_option("--tree", tree, "tree for caluprrp/calu")->check(CLI::IsMember({"bt", "ft"}));
  sw->add_option("--seed", seed, "base matrix seed");
  sw->add_option("--samples", samples, "matrices per grid point")->check(CLI::PositiveNumber);
  sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--max-n", max_n, "clamp preset matrix orders");
  sw->add_option("--out", out_path, "output file (default stdout)");

  auto* co = app.add_subcommand("cost", "evaluate the parallel cost model over layouts");
  std::vector<double> cost_ns = {4096}, cost_bs = {64};
  std::vector<std::string> grids = {"2x2", "4x4", "8x8", "16x16"};
  double m_factor = 1.0;
  bool optimal = false;
  co->add_option("--n", cost_ns, "matrix orders")->delimiter(',');
  co->add_option("--b", cost_bs, "panel widths")->delimiter(',');
  co->add_option("--grid", grids, "process grids PRxPC")->delimiter(',');
  co->add_option("--m-factor", m_factor, "rows = m-factor * n")->check(CLI::Range(1.0, 1e9));
  co->add_flag("--optimal", optimal, "print the optimal-layout table instead");
  co->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      MatrixSpec s = with_seed(parse_matrix_spec(gen_text), seed, gen_seed->count() > 0);
      emit(format_matrix(generate(s)), out_path);
    } else if (*fac) {
      RunConfig cfg;
      cfg.alg = resolve_algorithm(alg_name, tree);
      cfg.b = cfg.alg == Algorithm::gepp ? 1 : b;
      cfg.p = p;
      cfg.tau = tau;
      cfg.rhs_seed = rhs_seed;
      DenseMatrix a;
      std::string label;
      if (!in_path.empty()) {
        a = load(in_path);
        label = in_path;
      } else {
        const MatrixSpec s = with_seed(parse_matrix_spec(gen_text), seed, fac_seed->count() > 0);
        a = generate(s);
        label = s.to_string();
      }
      const RunRecord r = run_factorization(a, label, cfg);
      emit(run_csv_header() + "\n" + run_csv_row(r) + "\n", out_path);
    } else if (*sw) {
      if (list) {
        std::string text;
        for (const auto& pi : presets()) text += pi.name + "  " + pi.description + "\n";
        emit(text, out_path);
        return 0;
      }
      if (!preset.empty()) {
        emit(run_preset(preset, {max_n, jobs, &std::cerr}), out_path);
      } else {
        std::vector<MatrixSpec> mats;
        for (const auto& f : families)
          for (const auto& n : sizes) {
            if (n.empty()) continue;
            MatrixSpec s = parse_matrix_spec(f + ":" + n);
            mats.push_back(with_seed(s, seed, true));
          }
        std::vector<Algorithm> as;
        for (const auto& a : algs) as.push_back(resolve_algorithm(a, tree));
        const auto grid = make_grid(mats, as, bs, ps, tau, 1, samples);
        emit(run_sweep(grid, {jobs, &std::cerr}), out_path);
      }
    } else if (*co) {
      if (optimal) {
        emit(run_preset("table8"), out_path);
      } else {
        emit(cost_csv(cost_ns, cost_bs, grids, m_factor), out_path);
      }
    }
  } catch (const IoError& e) {
    std::cerr << "prrp: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "prrp: " << e.what() << "\n";
    return kExitParse;
  } catch (const UnsupportedFamilyError& e) {
    std::cerr << "prrp: " << e.what() << "\n";
    return kExitParse;
  } catch (const NumericalError& e) {
    std::cerr << "prrp: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DimensionError& e) {
    std::cerr << "prrp: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
