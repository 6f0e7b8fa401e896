#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "sing/graph.hpp"
#include "sing/samples.hpp"

namespace sing {

/// Normal and uniform draws on top of std::mt19937_64, whose output sequence
/// is fixed by the C++ standard. Uniforms use the top 53 bits; normals use the
/// Box-Muller transform and consume draws in pairs, so streams can be
/// reproduced outside C++.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double uniform();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Dataset {
  SampleSet samples;
  Graph truth;
};

/// r pairs (X, Y = W X) with X, W independent standard normals; columns
/// X1, Y1, ..., Xr, Yr and truth graph of r disjoint edges.
Dataset gen_modified_rademacher(int r, int n, std::uint64_t seed);

/// Stochastic volatility prior: columns mu, phi, Z1..ZT. With `zero_phi` the
/// persistence is fixed at 0 (diagnostic mode); the truth graph then loses the
/// chain and phi edges.
Dataset gen_stochastic_volatility(int T, int n, std::uint64_t seed, bool zero_phi = false);

/// Truth graph of the stochastic volatility model on (mu, phi, Z1..ZT).
Graph stochastic_volatility_graph(int T);

/// Samples from N(0, precision^{-1}); the truth graph is the off-diagonal support.
Dataset gen_gaussian(const Eigen::MatrixXd& precision, int n, std::uint64_t seed);

/// I + gamma * Laplacian of a side x side lattice (row-major vertex labels).
Eigen::MatrixXd grid_precision(int side, double gamma = 0.3);

/// Random permutation of the columns (and truth labels), for experiments that
/// start from scrambled variable labels.
Dataset shuffle_columns(const Dataset& data, std::uint64_t seed);

}  // namespace sing
