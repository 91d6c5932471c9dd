#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prrp/block_variants.hpp"
#include "prrp/costmodel.hpp"
#include "prrp/experiment.hpp"
#include "prrp/gepp.hpp"
#include "prrp/luprrp.hpp"
#include "prrp/matgen.hpp"
#include "prrp/metrics.hpp"
#include "prrp/pivoted_qr.hpp"
#include "prrp/tournament.hpp"

namespace py = pybind11;
using namespace prrp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto r = a.unchecked<2>();
  DenseMatrix m(std::size_t(r.shape(0)), std::size_t(r.shape(1)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (py::ssize_t j = 0; j < r.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

Array to_array(const DenseMatrix& m) {
  Array out({py::ssize_t(m.rows()), py::ssize_t(m.cols())});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return out;
}

std::vector<std::size_t> to_list(const PermutationVec& p) { return {p.map().begin(), p.map().end()}; }

py::dict stats_dict(const ElimStats& s) {
  py::dict d;
  d["growth"] = growth_factor(s);
  d["swaps"] = s.total_swaps();
  d["charged_flops"] = s.flops.charged();
  d["executed_flops"] = s.flops.executed;
  return d;
}

py::dict block_lu(const BlockLUFactors& f) {
  py::dict d = stats_dict(f.stats);
  d["perm"] = to_list(f.perm);
  d["l"] = to_array(f.l);
  d["u"] = to_array(f.u);
  return d;
}

ReductionTree tree_of(const std::string& tree, std::size_t p) {
  if (tree == "bt") return ReductionTree::binary(p);
  if (tree == "ft") return ReductionTree::flat();
  throw ParseError("tree must be 'bt' or 'ft'");
}

py::dict report_dict(const StabilityReport& r) {
  py::dict d;
  d["g_w"] = r.g_w;
  d["rel_fact_error"] = r.rel_fact_error;
  d["eta"] = r.eta;
  d["w_before"] = r.w_before;
  d["w"] = r.w;
  d["hpl"] = std::vector<double>{r.hpl[0], r.hpl[1], r.hpl[2]};
  d["n_ir"] = r.n_ir;
  d["norm_l1"] = r.norm_l1;
  d["norm_linv1"] = r.norm_linv1;
  d["norm_u1"] = r.norm_u1;
  d["norm_uinv1"] = r.norm_uinv1;
  d["diverged"] = r.diverged;
  return d;
}

py::dict cost_dict(const CostReport& r) {
  py::dict d;
  d["messages"] = r.messages;
  d["words"] = r.words;
  d["flops"] = r.flops;
  return d;
}

}  // namespace

PYBIND11_MODULE(_prrp, m) {
  m.doc() = "LU with panel rank revealing pivoting";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<UnsupportedFamilyError>(m, "UnsupportedFamilyError", PyExc_ValueError);

  m.def("generate", [](const std::string& s) { return to_array(generate(parse_matrix_spec(s))); },
        py::arg("spec"), "Matrix for a spec such as 'randn:64:seed=3'.");
  m.def("families", &matrix_families);

  m.def("strong_rrqr", [](const Array& a, std::size_t b, double tau) {
    const auto r = strong_rrqr(to_matrix(a), b, tau);
    py::dict d;
    d["q"] = to_array(r.qr.q);
    d["r"] = to_array(r.qr.r);
    d["perm"] = to_list(r.qr.perm);
    d["l_block"] = to_array(r.l_block);
    d["max_entry"] = r.max_entry;
    d["swaps"] = r.swap_count;
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("tau") = 2.0);

  m.def("gepp", [](const Array& a) {
    const auto f = gepp_factor(to_matrix(a));
    py::dict d;
    d["perm"] = to_list(f.perm);
    d["l"] = to_array(f.l);
    d["u"] = to_array(f.u);
    d["growth"] = f.intermediate_max / f.original_max;
    return d;
  }, py::arg("a"));
  m.def("luprrp", [](const Array& a, std::size_t b, double tau) { return block_lu(luprrp_factor(to_matrix(a), b, tau)); },
        py::arg("a"), py::arg("b"), py::arg("tau") = 2.0);
  m.def("caluprrp", [](const Array& a, std::size_t b, double tau, const std::string& tree, std::size_t p) {
    return block_lu(caluprrp_factor(to_matrix(a), b, tau, tree_of(tree, p)));
  }, py::arg("a"), py::arg("b"), py::arg("tau") = 2.0, py::arg("tree") = "bt", py::arg("p") = 4);
  m.def("calu", [](const Array& a, std::size_t b, const std::string& tree, std::size_t p) {
    return block_lu(calu_factor(to_matrix(a), b, tree_of(tree, p)));
  }, py::arg("a"), py::arg("b"), py::arg("tree") = "bt", py::arg("p") = 4);
  m.def("block_parallel", [](const Array& a, std::size_t b, double tau, std::size_t p) {
    const DenseMatrix am = to_matrix(a);
    const auto f = block_parallel_luprrp(am, b, tau, p);
    py::dict d = stats_dict(f.stats);
    d["perm"] = to_list(f.perm);
    d["l"] = to_array(reconstruct_l(f, am.rows()));
    d["u"] = to_array(f.u);
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("tau") = 2.0, py::arg("p") = 4);
  m.def("block_pairwise", [](const Array& a, std::size_t b, double tau) {
    const DenseMatrix am = to_matrix(a);
    const auto f = block_pairwise_luprrp(am, b, tau);
    py::dict d = stats_dict(f.stats);
    d["perm"] = to_list(f.perm);
    d["l"] = to_array(reconstruct_l(f, am.rows()));
    d["u"] = to_array(f.u);
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("tau") = 2.0);

  m.def("run", [](const Array& a, const std::string& alg, std::size_t b, std::size_t p, double tau,
                  std::uint64_t rhs_seed) {
    RunConfig cfg;
    cfg.alg = parse_algorithm(alg);
    cfg.b = cfg.alg == Algorithm::gepp ? 1 : b;
    cfg.p = p;
    cfg.tau = tau;
    cfg.rhs_seed = rhs_seed;
    const RunRecord r = run_factorization(to_matrix(a), "array", cfg);
    py::dict d = report_dict(r.report);
    d["swaps"] = r.swaps;
    d["charged_flops"] = r.charged_flops;
    d["height"] = r.height;
    return d;
  }, py::arg("a"), py::arg("alg") = "luprrp", py::arg("b") = 8, py::arg("p") = 1, py::arg("tau") = 2.0,
     py::arg("rhs_seed") = 1, "Factor, solve with a random right-hand side and measure stability.");

  m.def("presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  m.def("run_preset", [](const std::string& name, std::size_t max_n, std::size_t jobs) {
    PresetOptions opt;
    opt.max_n = max_n;
    opt.jobs = jobs;
    py::gil_scoped_release release;
    return run_preset(name, opt);
  }, py::arg("name"), py::arg("max_n") = 0, py::arg("jobs") = 1, "CSV text of a named preset.");

  m.def("perf_model", [](const std::string& alg, double m_, double n, double b, double pr, double pc) {
    return cost_dict(perf_model(parse_cost_algorithm(alg), Layout{m_, n, b, pr, pc}));
  }, py::arg("alg"), py::arg("m"), py::arg("n"), py::arg("b"), py::arg("p_r"), py::arg("p_c"));
  m.def("optimal_layout", [](double m_, double n, double p) {
    const auto o = optimal_layout(m_, n, p);
    py::dict d;
    d["p_r"] = o.p_r;
    d["p_c"] = o.p_c;
    d["b"] = o.b;
    d["p_r_int"] = o.p_r_int;
    d["p_c_int"] = o.p_c_int;
    d["b_int"] = o.b_int;
    return d;
  }, py::arg("m"), py::arg("n"), py::arg("p"));
  m.def("flops_luprrp", &flops_luprrp, py::arg("m"), py::arg("n"), py::arg("b"));
  m.def("growth_bound_luprrp", &growth_bound_luprrp, py::arg("n"), py::arg("b"), py::arg("tau"));
  m.def("growth_bound_caluprrp", &growth_bound_caluprrp, py::arg("n"), py::arg("b"), py::arg("tau"), py::arg("h"));
}
