#pragma once

#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sing/map.hpp"

namespace sing {

/// Undirected graph on vertices 0..p-1. Edges are stored as (min, max).
struct Graph {
  int p = 0;
  std::set<std::pair<int, int>> edges;

  Graph() = default;
  explicit Graph(int vertices) : p(vertices) {}
  Graph(int vertices, std::initializer_list<std::pair<int, int>> edge_list);

  static Graph complete(int p);

  void add_edge(int a, int b);
  bool has_edge(int a, int b) const;
  int edge_count() const { return static_cast<int>(edges.size()); }
  std::vector<std::vector<int>> adjacency_lists() const;
  /// Dense symmetric 0/1 matrix.
  Eigen::MatrixXi adjacency_matrix() const;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// The adjacency estimated by thresholding is an ordinary graph.
using Adjacency = Graph;

/// A permutation of the variables: order[position] = original label.
struct Ordering {
  std::vector<int> order;

  static Ordering identity(int p);
  std::vector<int> position_of() const;
  Ordering inverse() const;
  void validate(int p) const;

  friend bool operator==(const Ordering&, const Ordering&) = default;
};

/// Relabel original labels to positions: edge (a, b) becomes (pos[a], pos[b]).
Graph permute(const Graph& g, const Ordering& ordering);
/// Relabel positions back to original labels.
Graph unpermute(const Graph& g, const Ordering& ordering);
/// Symmetric relabelling of a p x p matrix: out(pos[a], pos[b]) = m(a, b).
Eigen::MatrixXd permute(const Eigen::MatrixXd& m, const Ordering& ordering);
Eigen::MatrixXd unpermute(const Eigen::MatrixXd& m, const Ordering& ordering);

/// Relabel by `ordering`, then eliminate positions p-1 down to 0, connecting
/// the remaining (lower) neighbours of each eliminated node. The result holds
/// the original plus fill-in edges, in positions.
Graph induced_graph(const Graph& g, const Ordering& ordering);

/// Number of fill-in edges created by induced_graph.
int fill_in(const Graph& g, const Ordering& ordering);

/// Inactive pairs are the non-edges of the induced graph (given in positions).
SparsityPattern sparsity_pattern(const Graph& induced, const Ordering& ordering);
SparsityPattern sparsity_pattern(const Graph& induced);

/// Greedy elimination sequences (first eliminated first), ties broken by the
/// lowest label.
std::vector<int> elimination_sequence_min_degree(const Graph& g);
std::vector<int> elimination_sequence_min_fill(const Graph& g);

/// Map orderings from the greedy heuristics. Because elimination runs from the
/// last position down, the first eliminated vertex is placed last. Ties go to
/// the highest label here, so a graph without edges keeps the identity order.
Ordering order_min_degree(const Graph& g);
Ordering order_min_fill(const Graph& g);
/// Reverse of the min-degree sparse-Cholesky elimination order.
Ordering order_reverse_cholesky(const Graph& g);

}  // namespace sing
