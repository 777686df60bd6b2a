#include <doctest.h>

#include <cmath>
#include <sstream>

#include "itree/graph.hpp"

using namespace itree;

namespace {

VertexSet set_of(std::size_t n, std::initializer_list<std::size_t> members) {
  std::vector<std::size_t> m(members);
  return VertexSet::from_members(n, m);
}

} // namespace

TEST_CASE("sampler extremes") {
  const Graph empty = sample_gnp(5, 0.0, Seed{3, 1});
  CHECK(empty.order() == 5);
  CHECK(empty.edge_count() == 0);
  CHECK(sample_gnp(5, 1.0, Seed{3, 1}) == Graph::complete(5));
  CHECK(sample_gnp(0, 0.5, Seed{}).order() == 0);
}

TEST_CASE("sampler rejects bad parameters") {
  CHECK_THROWS(sample_gnp(5, -0.1, Seed{}));
  CHECK_THROWS(sample_gnp(5, 1.5, Seed{}));
  CHECK_THROWS(sample_gnp(5, std::nan(""), Seed{}));
  CHECK_THROWS(sample_gnp(kMaxVertices + 1, 0.5, Seed{}));
}

TEST_CASE("sampler is deterministic and well formed") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph a = sample_gnp(70, 0.3, Seed{11, s});
    CHECK(well_formed(a));
    CHECK(a == sample_gnp(70, 0.3, Seed{11, s}));
  }
  CHECK(sample_gnp(70, 0.3, Seed{11, 0}) != sample_gnp(70, 0.3, Seed{11, 1}));
}

TEST_CASE("mean edge count of G(100, 0.5)") {
  const int seeds = 10000;
  double sum = 0;
  for (int s = 0; s < seeds; ++s)
    sum += static_cast<double>(sample_gnp(100, 0.5, Seed{5, std::uint64_t(s)})
                                   .edge_count());
  const double pairs = 4950, mean = pairs * 0.5;
  const double se = std::sqrt(pairs * 0.25 / seeds);
  CHECK(std::abs(sum / seeds - mean) < 3 * se);
}

TEST_CASE("geometric skipping above the threshold") {
  const std::size_t n = kGeometricSkipThreshold + 100;
  const double p = 0.001;
  const Graph g = sample_gnp(n, p, Seed{8, 2});
  CHECK(well_formed(g));
  CHECK(g == sample_gnp(n, p, Seed{8, 2}));
  const double pairs = n * (n - 1) / 2.0;
  CHECK(std::abs(g.edge_count() - pairs * p) < 5 * std::sqrt(pairs * p));
}

TEST_CASE("induced subgraphs") {
  CHECK(induced_subgraph(Graph::complete(4), set_of(4, {0, 1})) ==
        Graph::path(2));
  CHECK(induced_subgraph(Graph::cycle(5), VertexSet(5)).order() == 0);
  CHECK(induced_subgraph(Graph::cycle(5), set_of(5, {0, 1, 2, 3})) ==
        Graph::path(4));
  const Graph g = sample_gnp(30, 0.4, Seed{2, 2});
  CHECK(induced_subgraph(g, VertexSet::full(30)) == g);
  CHECK_THROWS(induced_subgraph(g, VertexSet(31)));
  VertexSet s(5);
  CHECK_THROWS(s.insert(5));
}

TEST_CASE("tree and forest predicates") {
  CHECK(is_tree(Graph::path(5)));
  CHECK_FALSE(is_tree(Graph::cycle(5)));
  CHECK_FALSE(is_forest(Graph::cycle(5)));
  const std::vector<Edge> two{{0, 1}, {2, 3}};
  const Graph matching(4, two);
  CHECK_FALSE(is_tree(matching));
  CHECK(is_forest(matching));
  CHECK(is_tree(Graph::path(1)));
  CHECK_FALSE(is_tree(Graph{}));
  CHECK_FALSE(is_forest(Graph{}));
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Graph g = sample_gnp(8, 0.25, Seed{4, s});
    if (is_tree(g))
      CHECK(is_forest(g));
    if (is_forest(g) && g.edge_count() + 1 == g.order())
      CHECK(is_tree(g));
  }
}

TEST_CASE("builder and constructor validation") {
  GraphBuilder b(3);
  CHECK(b.add_edge(0, 1));
  CHECK_FALSE(b.add_edge(1, 0));
  CHECK_THROWS(b.add_edge(2, 2));
  CHECK_THROWS(b.add_edge(0, 3));
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  CHECK_THROWS(Graph(3, dup));
  CHECK(Graph::star(7).order() == 8);
  CHECK(Graph::complete_bipartite(2, 3).edge_count() == 6);
}

TEST_CASE("text format round trip and errors") {
  const Graph g = sample_gnp(40, 0.2, Seed{7, 7});
  std::stringstream ss;
  write_graph(ss, g);
  CHECK(read_graph(ss) == g);

  auto parse = [](const std::string &s) {
    std::istringstream in(s);
    return read_graph(in);
  };
  CHECK(parse("3 1\n0 2\n").edge_count() == 1);
  CHECK_THROWS(parse("3 1\n2 0\n"));
  CHECK_THROWS(parse("3 2\n0 1\n0 1\n"));
  CHECK_THROWS(parse("3 2\n0 1\n"));
  CHECK_THROWS(parse("3 1\n0 3\n"));
  CHECK_THROWS(parse("3 1\n0 1\n1 2\n"));
  CHECK_THROWS(parse("x\n"));
}
