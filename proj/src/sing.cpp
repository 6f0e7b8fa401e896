#include "sing/sing.hpp"

#include <chrono>
#include <cstring>
#include <cstdio>

#include "sing/error.hpp"

namespace sing {

std::string to_string(OrderingHeuristic h) {
  switch (h) {
    case OrderingHeuristic::MinDegree:
      return "min-degree";
    case OrderingHeuristic::MinFill:
      return "min-fill";
    case OrderingHeuristic::ReverseCholesky:
      return "reverse-cholesky";
    case OrderingHeuristic::Identity:
      return "identity";
  }
  return "unknown";
}

OrderingHeuristic parse_ordering(const std::string& name) {
  if (name == "min-degree") return OrderingHeuristic::MinDegree;
  if (name == "min-fill") return OrderingHeuristic::MinFill;
  if (name == "reverse-cholesky") return OrderingHeuristic::ReverseCholesky;
  if (name == "identity") return OrderingHeuristic::Identity;
  throw InvalidArgument("unknown ordering heuristic '" + name + "'");
}

Ordering compute_ordering(const Graph& g, OrderingHeuristic h) {
  switch (h) {
    case OrderingHeuristic::MinDegree:
      return order_min_degree(g);
    case OrderingHeuristic::MinFill:
      return order_min_fill(g);
    case OrderingHeuristic::ReverseCholesky:
      return order_reverse_cholesky(g);
    case OrderingHeuristic::Identity:
      break;
  }
  return Ordering::identity(g.p);
}

void SingConfig::validate() const {
  if (max_degree < 1) throw InvalidArgument("beta must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (quadrature_order < 1) throw InvalidArgument("quadrature order must be >= 1");
}

std::string matrix_checksum(const Eigen::MatrixXd& m) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

SingResult run_sing(const SampleSet& samples, const SingConfig& config) {
  return run_sing(samples, config, SparsityPattern::dense(samples.cols()));
}

SingResult run_sing(const SampleSet& samples, const SingConfig& config, const SparsityPattern& initial) {
  config.validate();
  const int p = samples.cols();
  if (p < 2) throw InvalidArgument("SING needs at least two variables");
  if (initial.dimension != p) throw InvalidArgument("initial pattern dimension does not match samples");

  const SampleSet standardized = samples.standardized();
  SingResult result;
  result.standardization = *standardized.standardization();

  SparsityPattern pattern = initial;
  Graph previous = Graph::complete(p);
  for (int l = 1;; ++l) {
    const auto start = std::chrono::steady_clock::now();
    SingIteration it;
    it.iteration = l;
    it.pattern = pattern;
    try {
      const FitResult fit = fit_map(standardized, pattern, config.max_degree, config.quadrature_order, config.fit);
      const PrecisionEstimate est = estimate_precision(fit, standardized);
      it.omega = est.omega;
      it.rho = est.rho;
      it.pseudo_inverse_used = est.pseudo_inverse_used;
      it.diagnostics = fit.diagnostics;
      it.edges = threshold(est, config.delta);
    } catch (const NumericalError&) {
      rethrow_with_context("SING iteration " + std::to_string(l) + ": ");
    }
    it.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.push_back(it);

    const Graph& current = result.trace.back().edges;
    if (current.edge_count() >= previous.edge_count()) {
      // Equal counts return the current graph as is; an increase falls back
      // to the sparser graph of the previous iteration.
      result.edges = current.edge_count() == previous.edge_count() ? current : previous;
      break;
    }
    if (l >= config.max_iterations) {
      result.edges = current;
      result.hit_max_iterations = true;
      break;
    }
    const Ordering ordering = compute_ordering(current, config.ordering);
    pattern = sparsity_pattern(induced_graph(current, ordering), ordering);
    previous = current;
  }
  return result;
}

}  // namespace sing
