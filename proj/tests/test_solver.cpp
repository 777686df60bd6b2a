#include <doctest.h>

#include "itree/solver.hpp"

using namespace itree;

TEST_CASE("brute force on small named graphs") {
  CHECK(max_induced_tree_bruteforce(Graph::complete(4)).size == 2);
  CHECK(max_induced_tree_bruteforce(Graph::path(5)).size == 5);
  CHECK(max_induced_tree_bruteforce(Graph::star(7)).size == 8);
  CHECK(max_induced_tree_bruteforce(Graph::complete_bipartite(2, 3)).size == 4);
  CHECK(max_induced_tree_bruteforce(Graph{}).size == 0);
  CHECK_THROWS(max_induced_tree_bruteforce(Graph::path(21)));
}

TEST_CASE("branch and bound on small named graphs") {
  CHECK(max_induced_tree(Graph::cycle(5)).size == 4);
  CHECK(max_induced_tree(Graph::complete_bipartite(2, 3)).size == 4);
  CHECK(max_induced_tree(Graph::complete(6)).size == 2);
  CHECK(max_induced_tree(Graph::path(30)).size == 30);
  const auto iso = max_induced_tree(Graph(5, {}));
  CHECK(iso.size == 1);
  CHECK(iso.optimal);
  for (const Graph &g : {Graph::cycle(5), Graph::complete(6), Graph::star(9)})
    CHECK(certify(g, max_induced_tree(g)));
}

TEST_CASE("oracle equivalence on random graphs up to n = 16") {
  int checked = 0;
  for (std::uint64_t s = 0; s < 150; ++s) {
    for (double p : {0.2, 0.5, 0.8}) {
      const std::size_t n = 6 + s % 11;
      const Graph g = sample_gnp(n, p, Seed{100, s});
      const auto bb = max_induced_tree(g);
      const auto bf = max_induced_tree_bruteforce(g);
      REQUIRE(bb.optimal);
      CHECK(bb.size == bf.size);
      CHECK(certify(g, bb));
      CHECK(certify(g, bf));
      ++checked;
    }
  }
  CHECK(checked == 450);
}

TEST_CASE("isolated vertex does not change an optimum of at least two") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Graph g = sample_gnp(12, 0.5, Seed{55, s});
    auto edges = g.edges();
    const Graph h(13, edges);
    const auto a = max_induced_tree(g).size, b = max_induced_tree(h).size;
    CHECK(b == std::max<std::size_t>(a, 1));
  }
}

TEST_CASE("budget exhaustion yields a certified lower bound") {
  const Graph g = sample_gnp(60, 0.4, Seed{9, 9});
  const auto r = max_induced_tree(g, 50);
  CHECK_FALSE(r.optimal);
  CHECK(r.nodes_explored == 50);
  CHECK(r.size >= 1);
  CHECK(certify(g, r));
  CHECK(max_induced_tree(g, 50).witness == r.witness);
}

TEST_CASE("wide graphs use the dynamic bitset path") {
  const Graph g = sample_gnp(600, 0.9, Seed{2, 4});
  const auto r = max_induced_tree(g, 200000);
  CHECK(certify(g, r));
  CHECK(r.size >= 2);
}

TEST_CASE("greedy lower bound") {
  CHECK(greedy_tree_lower_bound(Graph::path(5), 1, Seed{1, 1}).size == 5);
  const auto e = greedy_tree_lower_bound(Graph(5, {}), 3, Seed{1, 1});
  CHECK(e.size == 1);
  CHECK_FALSE(e.optimal);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = sample_gnp(40, 0.4, Seed{77, s});
    const auto gr = greedy_tree_lower_bound(g, 100, Seed{78, s});
    const auto ex = max_induced_tree(g);
    CHECK(certify(g, gr));
    CHECK(gr.size <= ex.size);
    CHECK_FALSE(gr.optimal);
    const auto again = greedy_tree_lower_bound(g, 100, Seed{78, s});
    CHECK(again.witness == gr.witness);
  }
}

TEST_CASE("induced tree counts") {
  CHECK(count_induced_trees(Graph::complete(5), 2) == 10);
  CHECK(count_induced_trees(Graph::complete(5), 3) == 0);
  CHECK(count_induced_trees(Graph::cycle(5), 4) == 5);
  CHECK(count_induced_trees(Graph::path(4), 1) == 4);
  CHECK(count_induced_trees(Graph::star(3), 4) == 1);
  CHECK_THROWS(count_induced_trees(Graph::path(65), 2));
  // agrees with subset enumeration through induced_subgraph
  const Graph g = sample_gnp(10, 0.4, Seed{3, 3});
  for (std::size_t k = 1; k <= 6; ++k) {
    std::uint64_t slow = 0;
    for (std::uint32_t m = 0; m < (1u << 10); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != k)
        continue;
      VertexSet s(10);
      for (std::size_t v = 0; v < 10; ++v)
        if (m >> v & 1)
          s.insert(v);
      slow += is_tree(induced_subgraph(g, s));
    }
    CHECK(count_induced_trees(g, k) == slow);
  }
}

TEST_CASE("certify rejects bad witnesses") {
  const Graph g = Graph::cycle(5);
  SolveResult r;
  r.size = 5;
  r.witness = VertexSet::full(5);
  CHECK_FALSE(certify(g, r));
  r.size = 3;
  CHECK_FALSE(certify(g, r));
}
