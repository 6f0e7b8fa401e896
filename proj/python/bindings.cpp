// Python module _sing. Samples are (n, p) float arrays in original labels;
// graphs are lists of (j, k) pairs with j < k.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sing/datagen.hpp"
#include "sing/error.hpp"
#include "sing/estimate.hpp"
#include "sing/graph.hpp"
#include "sing/precision.hpp"
#include "sing/scaling.hpp"
#include "sing/sing.hpp"

namespace py = pybind11;
using namespace sing;

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList edge_list(const Graph& g) { return {g.edges.begin(), g.edges.end()}; }

Graph make_graph(int p, const EdgeList& edges) {
  Graph g(p);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

py::tuple dataset(const Dataset& d) {
  return py::make_tuple(d.samples.data(), d.samples.names(), edge_list(d.truth));
}

py::dict estimate(const SampleMatrix& data, int max_degree, bool standardize, int quadrature_order) {
  PrecisionEstimate est;
  {
    py::gil_scoped_release release;
    SampleSet samples(data);
    if (standardize) samples = samples.standardized();
    const FitResult fit = fit_map(samples, SparsityPattern::dense(samples.cols()), max_degree, quadrature_order);
    est = estimate_precision(fit, samples);
  }
  py::dict out;
  out["omega"] = est.omega;
  out["rho"] = est.rho;
  out["n"] = est.n;
  out["pseudo_inverse_used"] = est.pseudo_inverse_used;
  return out;
}

py::dict sing_run(const SampleMatrix& data, int max_degree, double delta, const std::string& ordering,
                  int max_iterations, int quadrature_order) {
  SingConfig cfg;
  cfg.max_degree = max_degree;
  cfg.delta = delta;
  cfg.ordering = parse_ordering(ordering);
  cfg.max_iterations = max_iterations;
  cfg.quadrature_order = quadrature_order;
  SingResult r;
  {
    py::gil_scoped_release release;
    r = run_sing(SampleSet(data), cfg);
  }
  py::list trace;
  for (const auto& it : r.trace) {
    py::dict d;
    d["iteration"] = it.iteration;
    d["permutation"] = it.pattern.order;
    d["inactive_pairs"] = static_cast<int>(it.pattern.inactive.size());
    d["edge_count"] = it.edges.edge_count();
    d["edges"] = edge_list(it.edges);
    d["omega"] = it.omega;
    d["rho"] = it.rho;
    trace.append(d);
  }
  py::dict out;
  out["edges"] = edge_list(r.edges);
  out["trace"] = trace;
  out["hit_max_iterations"] = r.hit_max_iterations;
  out["omega"] = r.trace.empty() ? Eigen::MatrixXd() : r.trace.back().omega;
  out["rho"] = r.trace.empty() ? Eigen::MatrixXd() : r.trace.back().rho;
  return out;
}

}  // namespace

PYBIND11_MODULE(_sing, m) {
  m.doc() = "Sparse Markov graph learning with monotone triangular transport maps";
  m.attr("__version__") = "0.1.0";

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
  static py::exception<IoError> io(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical.ptr(), e.what());
    } catch (const IoError& e) {
      PyErr_SetString(io.ptr(), e.what());
    }
  });

  m.def("gen_modified_rademacher", [](int r, int n, std::uint64_t seed) { return dataset(gen_modified_rademacher(r, n, seed)); },
        py::arg("r"), py::arg("n"), py::arg("seed"),
        "Pairs (X, W X) with independent standard normal X, W. Returns (samples, names, edges).");
  m.def("gen_stochastic_volatility",
        [](int T, int n, std::uint64_t seed, bool zero_phi) {
          return dataset(gen_stochastic_volatility(T, n, seed, zero_phi));
        },
        py::arg("T"), py::arg("n"), py::arg("seed"), py::arg("zero_phi") = false,
        "Prior draws of (mu, phi, Z1..ZT). Returns (samples, names, edges).");
  m.def("gen_gaussian",
        [](const Eigen::MatrixXd& precision, int n, std::uint64_t seed) {
          return dataset(gen_gaussian(precision, n, seed));
        },
        py::arg("precision"), py::arg("n"), py::arg("seed"));
  m.def("grid_precision", &grid_precision, py::arg("side"), py::arg("gamma") = 0.3);

  m.def("estimate_precision", &estimate, py::arg("samples"), py::arg("max_degree") = 2, py::arg("standardize") = true,
        py::arg("quadrature_order") = kDefaultQuadratureOrder,
        "Fit a dense map and return omega, rho and the pseudo-inverse flag.");
  m.def("run_sing", &sing_run, py::arg("samples"), py::arg("max_degree") = 2, py::arg("delta") = 2.0,
        py::arg("ordering") = "reverse-cholesky", py::arg("max_iterations") = 20,
        py::arg("quadrature_order") = kDefaultQuadratureOrder);

  m.def("induced_graph",
        [](int p, const EdgeList& edges, std::vector<int> order) {
          return edge_list(induced_graph(make_graph(p, edges), Ordering{std::move(order)}));
        },
        py::arg("p"), py::arg("edges"), py::arg("order"),
        "Graph after eliminating positions p-1..0 under order[position] = label; edges in positions.");

  m.def("delta_star", &delta_star, py::arg("p"), py::arg("m"));
  m.def("n_star_from_rho",
        [](const Eigen::MatrixXd& rho, int n, double kappa, double conf) {
          const NStarReport r = n_star_from_rho(rho, n, kappa, conf);
          py::dict out;
          out["delta_star"] = r.delta_star;
          out["pairwise"] = r.pairwise;
          out["n_star"] = r.n_star;
          out["argmax"] = r.argmax;
          return out;
        },
        py::arg("rho"), py::arg("n"), py::arg("kappa"), py::arg("m"));
}
