#include "sing/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sing/error.hpp"

namespace sing {

Graph::Graph(int vertices, std::initializer_list<std::pair<int, int>> edge_list) : p(vertices) {
  for (const auto& [a, b] : edge_list) add_edge(a, b);
}

Graph Graph::complete(int p) {
  Graph g(p);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) g.edges.emplace(a, b);
  return g;
}

void Graph::add_edge(int a, int b) {
  if (a == b) throw InvalidArgument("graphs have no self-loops");
  if (a < 0 || b < 0 || a >= p || b >= p) throw InvalidArgument("edge endpoint out of range");
  edges.emplace(std::min(a, b), std::max(a, b));
}

bool Graph::has_edge(int a, int b) const { return edges.contains({std::min(a, b), std::max(a, b)}); }

std::vector<std::vector<int>> Graph::adjacency_lists() const {
  std::vector<std::vector<int>> out(p);
  for (const auto& [a, b] : edges) {
    out[a].push_back(b);
    out[b].push_back(a);
  }
  for (auto& l : out) std::sort(l.begin(), l.end());
  return out;
}

Eigen::MatrixXi Graph::adjacency_matrix() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(p, p);
  for (const auto& [a, b] : edges) m(a, b) = m(b, a) = 1;
  return m;
}

Ordering Ordering::identity(int p) {
  Ordering o;
  o.order.resize(p);
  std::iota(o.order.begin(), o.order.end(), 0);
  return o;
}

std::vector<int> Ordering::position_of() const {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

Ordering Ordering::inverse() const { return Ordering{position_of()}; }

void Ordering::validate(int p) const {
  if (static_cast<int>(order.size()) != p) throw InvalidArgument("ordering has wrong length");
  std::vector<bool> seen(p, false);
  for (int v : order) {
    if (v < 0 || v >= p || seen[v]) throw InvalidArgument("ordering is not a permutation");
    seen[v] = true;
  }
}

Graph permute(const Graph& g, const Ordering& ordering) {
  ordering.validate(g.p);
  const auto pos = ordering.position_of();
  Graph out(g.p);
  for (const auto& [a, b] : g.edges) out.add_edge(pos[a], pos[b]);
  return out;
}

Graph unpermute(const Graph& g, const Ordering& ordering) {
  ordering.validate(g.p);
  Graph out(g.p);
  for (const auto& [a, b] : g.edges) out.add_edge(ordering.order[a], ordering.order[b]);
  return out;
}

Eigen::MatrixXd permute(const Eigen::MatrixXd& m, const Ordering& ordering) {
  const int p = static_cast<int>(m.rows());
  ordering.validate(p);
  Eigen::MatrixXd out(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) out(a, b) = m(ordering.order[a], ordering.order[b]);
  return out;
}

Eigen::MatrixXd unpermute(const Eigen::MatrixXd& m, const Ordering& ordering) {
  const int p = static_cast<int>(m.rows());
  ordering.validate(p);
  Eigen::MatrixXd out(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) out(ordering.order[a], ordering.order[b]) = m(a, b);
  return out;
}

Graph induced_graph(const Graph& g, const Ordering& ordering) {
  Graph out = permute(g, ordering);
  auto adj = out.adjacency_lists();
  std::vector<std::set<int>> nbrs(g.p);
  for (int v = 0; v < g.p; ++v) nbrs[v].insert(adj[v].begin(), adj[v].end());
  for (int m = g.p - 1; m >= 0; --m) {
    std::vector<int> lower;
    for (int u : nbrs[m])
      if (u < m) lower.push_back(u);
    for (std::size_t i = 0; i < lower.size(); ++i) {
      for (std::size_t j = i + 1; j < lower.size(); ++j) {
        if (nbrs[lower[i]].insert(lower[j]).second) {
          nbrs[lower[j]].insert(lower[i]);
          out.add_edge(lower[i], lower[j]);
        }
      }
    }
  }
  return out;
}

int fill_in(const Graph& g, const Ordering& ordering) {
  return induced_graph(g, ordering).edge_count() - g.edge_count();
}

SparsityPattern sparsity_pattern(const Graph& induced, const Ordering& ordering) {
  ordering.validate(induced.p);
  SparsityPattern s;
  s.dimension = induced.p;
  s.order = ordering.order;
  for (int k = 0; k < induced.p; ++k)
    for (int j = 0; j < k; ++j)
      if (!induced.has_edge(j, k)) s.inactive.emplace(j, k);
  return s;
}

SparsityPattern sparsity_pattern(const Graph& induced) { return sparsity_pattern(induced, Ordering::identity(induced.p)); }

namespace {

enum class Criterion { Degree, Fill };

std::vector<int> greedy_elimination(const Graph& g, Criterion criterion, bool prefer_high_labels) {
  const auto adj = g.adjacency_lists();
  std::vector<std::set<int>> nbrs(g.p);
  for (int v = 0; v < g.p; ++v) nbrs[v].insert(adj[v].begin(), adj[v].end());
  std::vector<bool> removed(g.p, false);
  std::vector<int> sequence;
  sequence.reserve(g.p);

  auto score = [&](int v) {
    if (criterion == Criterion::Degree) return static_cast<long>(nbrs[v].size());
    long fill = 0;
    for (auto i = nbrs[v].begin(); i != nbrs[v].end(); ++i)
      for (auto j = std::next(i); j != nbrs[v].end(); ++j)
        if (!nbrs[*i].contains(*j)) ++fill;
    return fill;
  };

  for (int step = 0; step < g.p; ++step) {
    int best = -1;
    long best_score = std::numeric_limits<long>::max();
    for (int v = 0; v < g.p; ++v) {
      if (removed[v]) continue;
      const long s = score(v);
      if (s < best_score || (prefer_high_labels && s == best_score)) {
        best = v;
        best_score = s;
      }
    }
    for (auto i = nbrs[best].begin(); i != nbrs[best].end(); ++i) {
      for (auto j = std::next(i); j != nbrs[best].end(); ++j) {
        nbrs[*i].insert(*j);
        nbrs[*j].insert(*i);
      }
    }
    for (int u : nbrs[best]) nbrs[u].erase(best);
    nbrs[best].clear();
    removed[best] = true;
    sequence.push_back(best);
  }
  return sequence;
}

Ordering from_elimination_sequence(std::vector<int> sequence) {
  std::reverse(sequence.begin(), sequence.end());
  return Ordering{std::move(sequence)};
}

}  // namespace

std::vector<int> elimination_sequence_min_degree(const Graph& g) {
  return greedy_elimination(g, Criterion::Degree, false);
}

std::vector<int> elimination_sequence_min_fill(const Graph& g) { return greedy_elimination(g, Criterion::Fill, false); }

// Positions are filled from the top down, so on ties the highest label takes
// the highest free position; an edgeless graph keeps the identity ordering.
Ordering order_min_degree(const Graph& g) {
  return from_elimination_sequence(greedy_elimination(g, Criterion::Degree, true));
}

Ordering order_min_fill(const Graph& g) { return from_elimination_sequence(greedy_elimination(g, Criterion::Fill, true)); }

Ordering order_reverse_cholesky(const Graph& g) {
  // The Cholesky ordering eliminates position 0 first; reversing it makes the
  // map's elimination (last position first) follow the same sequence.
  return from_elimination_sequence(elimination_sequence_min_degree(g));
}

}  // namespace sing
