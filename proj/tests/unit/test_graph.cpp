#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sing/error.hpp"
#include "sing/graph.hpp"
#include "sing/sing.hpp"

using namespace sing;

namespace {

// Fill-path characterization: positions a < b are adjacent in the induced
// graph iff some path joins them whose interior vertices all sit above b.
Graph induced_by_paths(const Graph& g, const Ordering& ordering) {
  const Graph h = permute(g, ordering);
  const auto adj = h.adjacency_lists();
  Graph out(g.p);
  for (int a = 0; a < g.p; ++a) {
    for (int b = a + 1; b < g.p; ++b) {
      std::vector<bool> seen(g.p, false);
      std::vector<int> stack{a};
      seen[a] = true;
      bool found = false;
      while (!stack.empty() && !found) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : adj[v]) {
          if (u == b) {
            found = true;
            break;
          }
          if (!seen[u] && u > b) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
      if (found) out.add_edge(a, b);
    }
  }
  return out;
}

Graph random_graph(int p, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  Graph g(p);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

}  // namespace

TEST_CASE("graph basics") {
  Graph g(4, {{2, 0}, {1, 3}});
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK(g.edge_count() == 2);
  CHECK_THROWS_AS(g.add_edge(1, 1), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(0, 4), InvalidArgument);
  CHECK(Graph::complete(5).edge_count() == 10);
  const auto m = g.adjacency_matrix();
  CHECK(m(0, 2) == 1);
  CHECK(m(2, 0) == 1);
  CHECK(m.sum() == 4);
}

TEST_CASE("orderings and relabelling") {
  Ordering o{{2, 0, 3, 1}};
  o.validate(4);
  CHECK(o.position_of() == std::vector<int>{1, 3, 0, 2});
  CHECK(o.inverse().inverse() == o);
  CHECK_THROWS_AS(Ordering({0, 0, 1}).validate(3), InvalidArgument);

  Graph g(4, {{0, 1}, {2, 3}});
  const Graph h = permute(g, o);
  CHECK(h.has_edge(1, 3));  // labels 0, 1 sit at positions 1, 3
  CHECK(h.has_edge(0, 2));
  CHECK(unpermute(h, o) == g);

  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  Ordering q{{1, 2, 0}};
  const Eigen::MatrixXd pm = permute(m, q);
  CHECK(pm(0, 0) == 4);  // position 0 holds label 1
  CHECK(pm(0, 1) == 5);
  CHECK(unpermute(pm, q) == m);
}

TEST_CASE("Figure-1 style five-node graph") {
  // 1-2, 1-3, 2-3, 3-4, 4-5 in 1-based labels
  Graph g(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}});
  const auto id = Ordering::identity(5);
  const Graph induced = induced_graph(g, id);
  CHECK(induced == g);
  CHECK(fill_in(g, id) == 0);
  const auto pattern = sparsity_pattern(induced, id);
  const std::set<std::pair<int, int>> expected{{0, 3}, {1, 3}, {0, 4}, {1, 4}, {2, 4}};
  CHECK(pattern.inactive == expected);
  CHECK(pattern.active_inputs(3) == std::vector<int>{2, 3});
  CHECK(pattern.active_inputs(4) == std::vector<int>{3, 4});

  // a bad ordering puts node 3 last and fills in its neighbourhood
  Ordering bad{{0, 1, 3, 4, 2}};
  const Graph worse = induced_graph(g, bad);
  CHECK(worse.edge_count() > g.edge_count());
  CHECK(sparsity_pattern(worse, bad).inactive.size() < expected.size());
}

TEST_CASE("induced graph matches the fill-path oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(2, 7);
  std::uniform_real_distribution<double> dens(0.1, 0.7);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = size(rng);
    const Graph g = random_graph(p, dens(rng), rng);
    std::vector<Ordering> orderings{Ordering::identity(p), order_min_degree(g), order_min_fill(g),
                                    order_reverse_cholesky(g)};
    Ordering shuffled = Ordering::identity(p);
    std::shuffle(shuffled.order.begin(), shuffled.order.end(), rng);
    orderings.push_back(shuffled);
    for (const auto& o : orderings) {
      o.validate(p);
      const Graph induced = induced_graph(g, o);
      CHECK(induced == induced_by_paths(g, o));
      // original edges survive the relabelling
      for (const auto& [a, b] : g.edges) CHECK(induced.has_edge(o.position_of()[a], o.position_of()[b]));
    }
  }
}

TEST_CASE("ordering heuristics") {
  SUBCASE("a path has a zero-fill min-degree ordering") {
    for (int p = 2; p <= 8; ++p) {
      Graph path(p);
      for (int v = 0; v + 1 < p; ++v) path.add_edge(v, v + 1);
      CHECK(fill_in(path, order_min_degree(path)) == 0);
      CHECK(fill_in(path, order_min_fill(path)) == 0);
      CHECK(fill_in(path, order_reverse_cholesky(path)) == 0);
    }
  }
  SUBCASE("chordal graphs get perfect orderings from min-fill") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = random_graph(6, 0.5, rng);
      const Graph chordal = unpermute(induced_graph(g, Ordering::identity(6)), Ordering::identity(6));
      CHECK(fill_in(chordal, order_min_fill(chordal)) == 0);
    }
  }
  SUBCASE("edgeless graph keeps the identity") {
    const Graph empty(5);
    CHECK(order_min_degree(empty) == Ordering::identity(5));
    CHECK(order_min_fill(empty) == Ordering::identity(5));
  }
  SUBCASE("elimination sequences break ties by the lowest label") {
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(elimination_sequence_min_degree(star) == std::vector<int>{1, 2, 0, 3});
    const auto rc = order_reverse_cholesky(star);
    CHECK(rc.order == std::vector<int>{3, 0, 2, 1});
    CHECK(fill_in(star, rc) == 0);
  }
  SUBCASE("names") {
    for (auto h : {OrderingHeuristic::MinDegree, OrderingHeuristic::MinFill, OrderingHeuristic::ReverseCholesky,
                   OrderingHeuristic::Identity})
      CHECK(parse_ordering(to_string(h)) == h);
    CHECK_THROWS_AS(parse_ordering("amd"), InvalidArgument);
  }
}
