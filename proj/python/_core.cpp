#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "uvkv/analysis.hpp"
#include "uvkv/kv.hpp"
#include "uvkv/sim.hpp"
#include "uvkv/uuv.hpp"
#include "uvkv/version.hpp"

namespace py = pybind11;
using namespace uvkv;

namespace {

FieldRef field_of(unsigned q) {
  const auto [p, e] = prime_power(q);
  return make_field(p, e);
}

py::dict info_dict(const InfoSummary& s) {
  py::dict d;
  d["capacity"] = s.capacity;
  d["bhattacharyya"] = s.bhattacharyya;
  d["kv_capacity"] = s.kv_capacity;
  return d;
}

// q x n array of column probabilities
ReliabilityMatrix to_pi(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw std::invalid_argument("reliability matrix must be 2-d (q x n)");
  ReliabilityMatrix pi(a.shape(0), a.shape(1));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) pi(i, j) = r(i, j);
  return pi;
}

std::vector<Symbol> coeffs(const UniPoly& p, std::size_t k) {
  std::vector<Symbol> c = p.coeffs();
  c.resize(k, 0);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Iterated (U|U+V) codes with Koetter-Vardy decoding of the Reed-Solomon leaves";
  m.attr("__version__") = kVersion;

  m.def("gs_baseline", &gs_baseline, py::arg("p"));
  m.def("kv_qsc_capacity", &kv_qsc_capacity, py::arg("p"), py::arg("q"));
  m.def("c_uv_depth", &c_uv_depth, py::arg("depth"), py::arg("p"));
  m.def("leaf_closed_form", &leaf_closed_form, py::arg("path"), py::arg("p"));
  m.def(
      "gs_crossing",
      [](unsigned d) -> py::object {
        auto c = gs_crossing(d);
        if (!c) return py::none();
        return py::make_tuple(c->p, c->rate);
      },
      py::arg("depth"), "(p, rate) where the depth-d curve first exceeds (1-p)^2");
  m.def(
      "curve",
      [](const std::string& name, unsigned q, unsigned grid) {
        std::vector<std::pair<double, double>> out;
        for (auto& pt : curve(name, q, grid)) out.emplace_back(pt.p, pt.value);
        return out;
      },
      py::arg("name"), py::arg("q") = 256, py::arg("grid") = 101);

  m.def(
      "qsc_info", [](unsigned q, double p) { return info_dict(info(qsc(field_of(q), p))); }, py::arg("q"),
      py::arg("p"));
  m.def(
      "leaf_info",
      [](unsigned q, double p, unsigned depth) {
        py::list out;
        auto infos = all_path_info(qsc(field_of(q), p), depth);
        for (std::size_t i = 0; i < infos.size(); ++i) {
          auto d = info_dict(infos[i].info);
          d["path"] = depth ? path_string(i, depth) : std::string();
          d["method"] = infos[i].method;
          out.append(d);
        }
        return out;
      },
      py::arg("q"), py::arg("p"), py::arg("depth"), "C, Z and C_KV of every leaf channel of the q-SC");
  m.def(
      "finite_length_capacity",
      [](unsigned q, double p, unsigned ell) { return finite_length_capacity(qsc(field_of(q), p), ell).value; },
      py::arg("q"), py::arg("p"), py::arg("ell"));

  m.def("ag_delta_bound", &ag_delta_bound, py::arg("C"), py::arg("m"), py::arg("g"));
  m.def("ag_list_bound", &ag_list_bound, py::arg("C"), py::arg("m"), py::arg("g"));
  m.def("ag_soft_factor", &ag_soft_factor, py::arg("L"), py::arg("rtilde"), py::arg("gtilde"), py::arg("q"));
  m.def("ag_required_list", &ag_required_list, py::arg("delta"), py::arg("rtilde"), py::arg("gtilde"), py::arg("q"));
  m.def("rs_required_list", &rs_required_list, py::arg("delta"), py::arg("rstar"), py::arg("q"));
  m.def("rhs_bound", &rhs_bound, py::arg("k"), py::arg("L"), py::arg("q"), py::arg("n"));

  m.def(
      "rs_encode",
      [](unsigned q, std::size_t n, const std::vector<Symbol>& message) {
        auto f = field_of(q);
        return rs_new(f, n, message.size()).encode(UniPoly(f, message));
      },
      py::arg("q"), py::arg("n"), py::arg("message"), "evaluations of the message polynomial at 0, 1, ..., n-1");
  m.def(
      "kv_decode",
      [](unsigned q, std::size_t k, py::array_t<double, py::array::c_style | py::array::forcecast> pi, double L) {
        auto P = to_pi(pi);
        if (P.rows() != q) throw std::invalid_argument("reliability matrix must have q rows");
        auto code = rs_new(field_of(q), P.cols(), k);
        auto r = kv_decode(code, P, L);
        py::list out;
        for (auto& c : r.list) out.append(py::make_tuple(coeffs(c.message, k), c.codeword, c.log_likelihood));
        return out;
      },
      py::arg("q"), py::arg("k"), py::arg("pi"), py::arg("L"),
      "ranked list of (message, codeword, log-likelihood) for the [n, k] RS code, n = pi.shape[1]");

  m.def(
      "design",
      [](unsigned q, double p, unsigned depth, double epsilon, std::size_t n0) {
        auto d = design_rates(qsc(field_of(q), p), depth, DesignPolicy{DesignPolicy::kv_margin, epsilon}, n0);
        std::ostringstream spec;
        write_tree_spec(spec, tree_from_design(d));
        py::dict r;
        r["rate"] = d.rate;
        r["fer_proxy"] = d.fer_proxy;
        std::vector<std::size_t> ks;
        for (auto& l : d.leaves) ks.push_back(l.k);
        r["k"] = ks;
        r["tree_spec"] = spec.str();
        return r;
      },
      py::arg("q"), py::arg("p"), py::arg("depth"), py::arg("epsilon"), py::arg("n0"), "kv_margin leaf design");
  m.def(
      "simulate",
      [](const std::string& tree_spec, double p, std::uint64_t trials, std::uint64_t seed, double L, unsigned workers,
         bool genie) {
        std::istringstream is(tree_spec);
        auto t = read_tree_spec(is);
        SimConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.L = L;
        cfg.workers = workers;
        cfg.genie = genie;
        SimResult r;
        {
          py::gil_scoped_release nogil;
          r = simulate(t, qsc(t.field(), p), cfg);
        }
        py::dict d;
        d["trials"] = r.trials;
        d["frame_errors"] = r.frame_errors;
        d["fer"] = r.fer;
        d["interval"] = py::make_tuple(r.lo, r.hi);
        d["leaf_errors"] = r.leaf_errors;
        d["fallbacks"] = r.fallbacks;
        return d;
      },
      py::arg("tree_spec"), py::arg("p"), py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("L") = 16,
      py::arg("workers") = 1, py::arg("genie") = false);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int rc = cli::run(args, out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "runs the command-line tool in process; returns (exit code, stdout, stderr)");
}
