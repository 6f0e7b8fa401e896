#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sing/graph.hpp"
#include "sing/map.hpp"

namespace sing {

/// One cell of the sparsity/variance experiment on a Gaussian lattice.
struct VarianceRow {
  std::string pattern;  // "dense", "exact" or "diagonal"
  int n = 0;
  int replicates = 0;
  int coefficients = 0;   // total map coefficients for this pattern
  double variance = 0.0;  // mean squared Frobenius distance of omega-hat from its replicate mean
  double bias = 0.0;      // Frobenius distance of the replicate mean from the true |Theta|
};

struct VarianceStudyConfig {
  int side = 4;  // p = side^2
  double gamma = 0.3;
  std::vector<int> sample_sizes{500, 1000, 2000, 4000};
  int replicates = 30;
  int max_degree = 1;
  std::uint64_t seed = 1;
};

/// The three map patterns of the experiment for a given true graph: dense,
/// the induced pattern of the truth under reverse-Cholesky ordering, diagonal.
std::vector<std::pair<std::string, SparsityPattern>> study_patterns(const Graph& truth);

/// Omega-hat variance and bias on the scale of the raw draws, one row per
/// (pattern, n), patterns outermost. Replicate r at size n uses its own
/// sample stream derived from the seed, shared across patterns.
std::vector<VarianceRow> variance_study(const VarianceStudyConfig& config);

}  // namespace sing
