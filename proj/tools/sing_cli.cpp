// Command-line front end: gen, fit, sing, nstar, report.
// Exit codes: 0 ok, 2 usage, 3 numerical failure, 4 I/O.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "sing/datagen.hpp"
#include "sing/error.hpp"
#include "sing/estimate.hpp"
#include "sing/io.hpp"
#include "sing/parallel.hpp"
#include "sing/precision.hpp"
#include "sing/scaling.hpp"
#include "sing/sing.hpp"
#include "sing/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sing;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

json versions() {
  return {{"sing", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                       "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json file_record(const fs::path& path) { return {{"path", path.string()}, {"fnv1a", io::fnv1a_hex(io::read_file(path))}}; }

fs::path truth_path_for(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".truth.json");
  return p;
}

// gen ---------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  int r = 5;
  int T = 6;
  int grid = 4;
  double gamma = 0.3;
  int n = 2000;
  std::uint64_t seed = 0;
  bool zero_phi = false;
  std::uint64_t shuffle = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  Dataset d = [&] {
    if (a.kind == "modrad") return gen_modified_rademacher(a.r, a.n, a.seed);
    if (a.kind == "sv") return gen_stochastic_volatility(a.T, a.n, a.seed, a.zero_phi);
    if (a.kind == "gaussian") return gen_gaussian(grid_precision(a.grid, a.gamma), a.n, a.seed);
    throw InvalidArgument("unknown --kind '" + a.kind + "'");
  }();
  if (a.shuffle) d = shuffle_columns(d, a.shuffle);
  const fs::path out(a.out);
  io::write_samples_csv(out, d.samples);
  const fs::path truth = truth_path_for(out);
  io::write_file(truth, io::graph_to_json(d.truth, d.samples.names()).dump(2) + "\n");
  json manifest{{"command", "gen"},
                {"config",
                 {{"kind", a.kind}, {"r", a.r}, {"T", a.T}, {"grid", a.grid}, {"gamma", a.gamma}, {"n", a.n},
                  {"seed", a.seed}, {"zero_phi", a.zero_phi}, {"shuffle_seed", a.shuffle}}},
                {"outputs", {file_record(out), file_record(truth)}},
                {"versions", versions()},
                {"timings", {{"total_seconds", seconds_since(start)}}}};
  std::cout << manifest.dump(2) << "\n";
  return kOk;
}

// fit ---------------------------------------------------------------------

struct FitArgs {
  std::string data;
  int beta = 2;
  int quad_order = kDefaultQuadratureOrder;
  std::string graph;
  std::string ordering = "reverse-cholesky";
  std::string out;
};

int run_fit(const FitArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const SampleSet raw = io::read_samples_csv(a.data);
  const SampleSet samples = raw.standardized();
  SparsityPattern pattern = SparsityPattern::dense(samples.cols());
  if (!a.graph.empty()) {
    const Graph g = io::graph_from_json(json::parse(io::read_file(a.graph)));
    if (g.p != samples.cols()) throw InvalidArgument("graph size does not match the number of columns");
    const Ordering o = compute_ordering(g, parse_ordering(a.ordering));
    pattern = sparsity_pattern(induced_graph(g, o), o);
  }
  const FitResult fit = fit_map(samples, pattern, a.beta, a.quad_order);
  json doc = io::fit_to_json(fit);
  doc["names"] = samples.names();
  io::write_file(a.out, doc.dump(2) + "\n");
  json manifest{{"command", "fit"},
                {"config", {{"beta", a.beta}, {"quadrature_order", a.quad_order}, {"graph", a.graph},
                            {"ordering", a.ordering}}},
                {"inputs", {file_record(a.data)}},
                {"outputs", {file_record(a.out)}},
                {"versions", versions()},
                {"timings", {{"total_seconds", seconds_since(start)}}}};
  std::cout << manifest.dump(2) << "\n";
  return kOk;
}

// sing --------------------------------------------------------------------

struct SingArgs {
  std::string data;
  int beta = 2;
  double delta = 2.0;
  std::string ordering = "reverse-cholesky";
  int max_iter = 20;
  int quad_order = kDefaultQuadratureOrder;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_sing_cmd(const SingArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const SampleSet samples = io::read_samples_csv(a.data);
  SingConfig cfg;
  cfg.max_degree = a.beta;
  cfg.delta = a.delta;
  cfg.ordering = parse_ordering(a.ordering);
  cfg.max_iterations = a.max_iter;
  cfg.quadrature_order = a.quad_order;
  cfg.seed = a.seed;
  const SingResult result = run_sing(samples, cfg);
  const double total = seconds_since(start);

  const fs::path dir(a.out_dir);
  const auto& names = samples.names();
  const auto& last = result.trace.back();
  // omega and rho of the iteration whose graph is returned
  const SingIteration* chosen = &last;
  for (const auto& it : result.trace)
    if (it.edges == result.edges) chosen = &it;

  PrecisionEstimate est;
  est.omega = chosen->omega;
  est.rho = chosen->rho;
  est.n = samples.rows();
  est.pseudo_inverse_used = chosen->pseudo_inverse_used;
  est.standardization = result.standardization;

  const std::vector<fs::path> outputs{dir / "adjacency.json", dir / "adjacency.csv", dir / "omega.csv",
                                      dir / "rho.csv",        dir / "precision.json", dir / "trace.jsonl"};
  json adj = io::graph_to_json(result.edges, names);
  adj["iteration"] = chosen->iteration;
  adj["hit_max_iterations"] = result.hit_max_iterations;
  io::write_file(outputs[0], adj.dump(2) + "\n");
  io::write_file(outputs[1], io::format_graph_csv(result.edges, names));
  io::write_file(outputs[2], io::format_matrix_csv(est.omega, names));
  io::write_file(outputs[3], io::format_matrix_csv(est.rho, names));
  io::write_file(outputs[4], io::precision_to_json(est, names).dump(2) + "\n");
  io::write_file(outputs[5], io::format_trace_jsonl(result));

  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(file_record(p));
  json iteration_times = json::array();
  for (const auto& it : result.trace) iteration_times.push_back(it.wall_seconds);
  json manifest{{"command", "sing"},
                {"config",
                 {{"beta", cfg.max_degree}, {"delta", cfg.delta}, {"ordering", to_string(cfg.ordering)},
                  {"quadrature_order", cfg.quadrature_order}, {"max_iterations", cfg.max_iterations},
                  {"seed", cfg.seed}, {"gradient_tolerance", cfg.fit.gradient_tolerance},
                  {"newton_max_iterations", cfg.fit.max_iterations}, {"armijo_c", cfg.fit.armijo_c},
                  {"backtrack", cfg.fit.backtrack}}},
                {"inputs", {file_record(a.data)}},
                {"outputs", outs},
                {"result", {{"edge_count", result.edges.edge_count()}, {"iterations", result.trace.size()},
                            {"hit_max_iterations", result.hit_max_iterations}}},
                {"versions", versions()},
                {"threads", worker_count()},
                {"timings", {{"total_seconds", total}, {"iteration_seconds", iteration_times}}}};
  io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << manifest.dump(2) << "\n";
  return kOk;
}

// nstar -------------------------------------------------------------------

struct NStarArgs {
  std::string map;
  std::string data;
  double kappa = 0.0;
  double m = 0.05;
};

int run_nstar(const NStarArgs& a) {
  if (!fs::exists(a.map)) throw IoError("map file '" + a.map + "' does not exist");
  const json doc = json::parse(io::read_file(a.map));
  FitResult fit = io::fit_from_json(doc);
  const SampleSet raw = io::read_samples_csv(a.data);
  const SampleSet samples = fit.standardization ? raw.standardized_with(*fit.standardization) : raw;
  if (samples.cols() != fit.map.dimension()) throw InvalidArgument("map dimension does not match the data");
  // information is recomputed from the samples supplied here
  const SampleSet permuted = samples.permuted(fit.map.pattern().order);
  fit.information.clear();
  for (const auto& comp : fit.map.components())
    fit.information.push_back(observed_information(comp, permuted.data()));
  const NStarReport r = n_star(fit, samples, a.kappa, a.m);
  json pairs = json::array();
  const auto& names = samples.names();
  for (int j = 0; j < samples.cols(); ++j)
    for (int k = j + 1; k < samples.cols(); ++k)
      pairs.push_back({{"j", j}, {"k", k}, {"name_j", names[j]}, {"name_k", names[k]}, {"n_star", r.pairwise(j, k)}});
  json out{{"delta_star", r.delta_star},
           {"kappa", a.kappa},
           {"m", a.m},
           {"n_star", r.n_star},
           {"n_star_ceil", r.n_star_ceil},
           {"argmax", {r.argmax.first, r.argmax.second}},
           {"pseudo_inverse_used", r.pseudo_inverse_used},
           {"pairwise", pairs}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

// report ------------------------------------------------------------------

int report_edges(const std::string& trace, const std::string& out) {
  const auto recs = io::parse_trace_jsonl(io::read_file(trace));
  std::string csv = "iteration,edge_count,pattern_size\n";
  for (const auto& r : recs) {
    csv += std::to_string(r.at("iteration").get<int>()) + "," + std::to_string(r.at("edge_count").get<int>()) + "," +
           std::to_string(r.value("pattern_size", 0)) + "\n";
  }
  io::write_file(out, csv);
  return kOk;
}

int report_heatmap(const std::string& precision, const std::string& out) {
  const json doc = json::parse(io::read_file(precision));
  std::string csv = "j,k,name_j,name_k,omega,rho\n";
  try {
    const auto names = doc.at("names").get<std::vector<std::string>>();
    const auto omega = doc.at("omega");
    const auto rho = doc.at("rho");
    for (std::size_t j = 0; j < names.size(); ++j) {
      for (std::size_t k = 0; k < names.size(); ++k) {
        csv += std::to_string(j) + "," + std::to_string(k) + "," + names[j] + "," + names[k] + "," +
               io::format_double(omega.at(j).at(k).get<double>()) + "," +
               io::format_double(rho.at(j).at(k).get<double>()) + "\n";
      }
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("precision JSON schema mismatch: ") + e.what());
  }
  io::write_file(out, csv);
  return kOk;
}

int report_variance(const VarianceStudyConfig& cfg, const std::string& out) {
  const auto rows = variance_study(cfg);
  std::string csv = "pattern,n,replicates,coefficients,variance,bias\n";
  for (const auto& r : rows) {
    csv += r.pattern + "," + std::to_string(r.n) + "," + std::to_string(r.replicates) + "," +
           std::to_string(r.coefficients) + "," + io::format_double(r.variance) + "," + io::format_double(r.bias) +
           "\n";
  }
  io::write_file(out, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse graph learning with triangular transport maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a sample CSV and its truth graph");
  g->add_option("--kind", gen.kind, "modrad | sv | gaussian")->required()->check(CLI::IsMember({"modrad", "sv", "gaussian"}));
  g->add_option("--r", gen.r, "Modified Rademacher pairs")->check(CLI::PositiveNumber);
  g->add_option("--T", gen.T, "Stochastic volatility length")->check(CLI::Range(2, 100000));
  g->add_option("--grid", gen.grid, "Lattice side for the Gaussian grid")->check(CLI::Range(2, 1000));
  g->add_option("--gamma", gen.gamma, "Lattice coupling")->check(CLI::PositiveNumber);
  g->add_option("--n", gen.n, "Number of samples")->check(CLI::Range(2, 100000000));
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_flag("--zero-phi", gen.zero_phi, "Fix the volatility persistence at 0");
  g->add_option("--shuffle", gen.shuffle, "Shuffle columns with this seed (0 keeps the order)");
  g->add_option("--out", gen.out, "Output CSV")->required();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a transport map to standardized samples");
  f->add_option("--data", fit.data, "Sample CSV")->required();
  f->add_option("--beta", fit.beta, "Maximum degree")->check(CLI::Range(1, 10));
  f->add_option("--quad-order", fit.quad_order, "Gauss-Legendre order")->check(CLI::Range(1, 512));
  f->add_option("--graph", fit.graph, "Graph JSON whose induced pattern the map follows (default dense)");
  f->add_option("--ordering", fit.ordering, "Ordering used with --graph")
      ->check(CLI::IsMember({"min-degree", "min-fill", "reverse-cholesky", "identity"}));
  f->add_option("--out", fit.out, "Output fit JSON")->required();

  SingArgs sa;
  auto* s = app.add_subcommand("sing", "Run the SING graph-learning loop");
  s->add_option("--data", sa.data, "Sample CSV")->required();
  s->add_option("--beta", sa.beta, "Maximum degree")->check(CLI::Range(1, 10));
  s->add_option("--delta", sa.delta, "Threshold multiplier")->check(CLI::PositiveNumber);
  s->add_option("--ordering", sa.ordering, "Ordering heuristic")
      ->check(CLI::IsMember({"min-degree", "min-fill", "reverse-cholesky", "identity"}));
  s->add_option("--max-iter", sa.max_iter, "Iteration cap")->check(CLI::Range(1, 1000));
  s->add_option("--quad-order", sa.quad_order, "Gauss-Legendre order")->check(CLI::Range(1, 512));
  s->add_option("--seed", sa.seed, "Recorded in the manifest");
  s->add_option("--out-dir", sa.out_dir, "Output directory")->required();

  NStarArgs ns;
  auto* n = app.add_subcommand("nstar", "Sample-size estimate for one pass with a fitted map");
  n->add_option("--map", ns.map, "Fit JSON written by 'fit'")->required();
  n->add_option("--data", ns.data, "Sample CSV")->required();
  n->add_option("--kappa", ns.kappa, "Smallest true edge weight")->required()->check(CLI::PositiveNumber);
  n->add_option("--m", ns.m, "Allowed probability of a wrong graph")->check(CLI::Range(1e-300, 1.0));

  auto* r = app.add_subcommand("report", "Emit plot-ready CSV tables");
  r->require_subcommand(1);
  std::string trace, precision, out_edges, out_heat, out_var, sizes = "500,1000,2000,4000";
  VarianceStudyConfig vcfg;
  auto* re = r->add_subcommand("edges", "Edge count per iteration from a trace");
  re->add_option("--trace", trace, "trace.jsonl")->required();
  re->add_option("--out", out_edges, "Output CSV")->required();
  auto* rh = r->add_subcommand("heatmap", "Long-format omega/rho table");
  rh->add_option("--precision", precision, "precision.json")->required();
  rh->add_option("--out", out_heat, "Output CSV")->required();
  auto* rv = r->add_subcommand("variance", "Omega-hat variance and bias versus n for three map patterns");
  rv->add_option("--grid", vcfg.side, "Lattice side")->check(CLI::Range(2, 100));
  rv->add_option("--n", sizes, "Comma-separated sample sizes");
  rv->add_option("--reps", vcfg.replicates, "Replicates per cell")->check(CLI::Range(2, 100000));
  rv->add_option("--beta", vcfg.max_degree, "Maximum degree")->check(CLI::Range(1, 10));
  rv->add_option("--seed", vcfg.seed, "Random seed");
  rv->add_option("--out", out_var, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*f) return run_fit(fit);
    if (*s) return run_sing_cmd(sa);
    if (*n) return run_nstar(ns);
    if (*re) return report_edges(trace, out_edges);
    if (*rh) return report_heatmap(precision, out_heat);
    if (*rv) {
      vcfg.sample_sizes.clear();
      std::stringstream ss(sizes);
      std::string item;
      while (std::getline(ss, item, ',')) vcfg.sample_sizes.push_back(std::stoi(item));
      return report_variance(vcfg, out_var);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const json::exception& e) {
    std::cerr << "I/O error: malformed JSON: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
