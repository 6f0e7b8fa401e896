#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sing/estimate.hpp"
#include "sing/graph.hpp"
#include "sing/precision.hpp"
#include "sing/samples.hpp"

namespace sing {

enum class OrderingHeuristic { MinDegree, MinFill, ReverseCholesky, Identity };

std::string to_string(OrderingHeuristic h);
/// Accepts "min-degree", "min-fill", "reverse-cholesky", "identity".
OrderingHeuristic parse_ordering(const std::string& name);
Ordering compute_ordering(const Graph& g, OrderingHeuristic h);

struct SingConfig {
  int max_degree = 2;
  double delta = 2.0;
  OrderingHeuristic ordering = OrderingHeuristic::ReverseCholesky;
  int quadrature_order = kDefaultQuadratureOrder;
  int max_iterations = 20;
  std::uint64_t seed = 0;  // recorded for provenance; the algorithm itself is deterministic
  FitOptions fit;

  void validate() const;
};

struct SingIteration {
  int iteration = 0;           // 1-based
  SparsityPattern pattern;     // pattern the map was fit with (order = permutation in force)
  Eigen::MatrixXd omega;       // original labels, standardized scale
  Eigen::MatrixXd rho;
  Graph edges;                 // thresholded graph, original labels
  std::vector<ComponentDiagnostics> diagnostics;
  bool pseudo_inverse_used = false;
  double wall_seconds = 0.0;
};

struct SingResult {
  Graph edges;  // returned edge set, original labels
  std::vector<SingIteration> trace;
  bool hit_max_iterations = false;
  Standardization standardization;
};

/// Iterates fit -> generalized precision -> threshold -> reorder -> induced
/// sparsity pattern while the number of edges keeps decreasing.
SingResult run_sing(const SampleSet& samples, const SingConfig& config);

/// Same loop started from a given pattern instead of the dense one.
SingResult run_sing(const SampleSet& samples, const SingConfig& config, const SparsityPattern& initial);

/// FNV-1a hash of the IEEE-754 bytes in row-major order, as 16 hex digits.
std::string matrix_checksum(const Eigen::MatrixXd& m);

}  // namespace sing
