#ifndef ITREE_GRAPH_HPP
#define ITREE_GRAPH_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itree/rng.hpp"

namespace itree {

/// Largest vertex count accepted by the sampler and the text reader.
inline constexpr std::size_t kMaxVertices = 65536;

/// Below this many vertices the sampler draws one uniform per pair.
inline constexpr std::size_t kGeometricSkipThreshold = 4096;

inline constexpr std::size_t words_for(std::size_t bits) {
  return (bits + 63) / 64;
}

/// Subset of [n] stored as a bitset of width n.
class VertexSet {
public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe)
      : universe_(universe), words_(words_for(universe), 0) {}

  static VertexSet full(std::size_t universe);
  static VertexSet from_members(std::size_t universe,
                                std::span<const std::size_t> members);

  std::size_t universe() const { return universe_; }
  std::size_t size() const;
  bool empty() const;

  bool contains(std::size_t v) const {
    return v < universe_ && ((words_[v / 64] >> (v % 64)) & 1u);
  }
  void insert(std::size_t v);
  void erase(std::size_t v);

  /// Members in increasing order.
  std::vector<std::size_t> members() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  friend bool operator==(const VertexSet &, const VertexSet &) = default;

private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph on [n] with one adjacency bitset row per vertex.
/// Values are immutable once built; mutate only through GraphBuilder.
class Graph {
public:
  Graph() = default;

  /// Builds from an edge list; rejects loops, duplicates and out-of-range ends.
  Graph(std::size_t n, std::span<const Edge> edges);

  static Graph complete(std::size_t n);
  static Graph path(std::size_t n);
  static Graph cycle(std::size_t n);
  static Graph star(std::size_t leaves);
  static Graph complete_bipartite(std::size_t a, std::size_t b);

  std::size_t order() const { return n_; }
  std::size_t edge_count() const { return edges_; }
  std::size_t words_per_row() const { return stride_; }

  bool adjacent(std::size_t u, std::size_t v) const {
    return (rows_[u * stride_ + v / 64] >> (v % 64)) & 1u;
  }
  std::size_t degree(std::size_t v) const;

  std::span<const std::uint64_t> row(std::size_t v) const {
    return {rows_.data() + v * stride_, stride_};
  }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph &, const Graph &) = default;

private:
  friend class GraphBuilder;

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Mutable staging area used by the sampler and the reader.
class GraphBuilder {
public:
  explicit GraphBuilder(std::size_t n);

  /// Sets edge {u, v}; returns false if it was already present.
  bool add_edge(std::size_t u, std::size_t v);
  Graph build() &&;

private:
  Graph g_;
};

/// G(n, p): every pair joined independently with probability p. Identical
/// (n, p, seed) gives the identical graph.
Graph sample_gnp(std::size_t n, double p, Seed seed);

/// Subgraph induced by s, relabelled in increasing order of original index.
Graph induced_subgraph(const Graph &g, const VertexSet &s);

std::size_t component_count(const Graph &g);
bool is_connected(const Graph &g);

/// Connected with n - 1 edges. The one-vertex graph is a tree; n = 0 is not.
bool is_tree(const Graph &g);
/// Acyclic and non-empty.
bool is_forest(const Graph &g);

/// Checks the adjacency invariants (symmetry, no loops, edge tally).
bool well_formed(const Graph &g);

/// Text format: "n m" then m lines "u v" with u < v.
void write_graph(std::ostream &out, const Graph &g);
Graph read_graph(std::istream &in);
Graph read_graph_file(const std::string &path);
void write_graph_file(const std::string &path, const Graph &g);

} // namespace itree

#endif // ITREE_GRAPH_HPP
