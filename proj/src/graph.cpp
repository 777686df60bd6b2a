#include "itree/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace itree {

VertexSet VertexSet::full(std::size_t universe) {
  VertexSet s(universe);
  for (std::size_t v = 0; v < universe; ++v)
    s.insert(v);
  return s;
}

VertexSet VertexSet::from_members(std::size_t universe,
                                  std::span<const std::size_t> members) {
  VertexSet s(universe);
  for (auto v : members)
    s.insert(v);
  return s;
}

std::size_t VertexSet::size() const {
  std::size_t total = 0;
  for (auto w : words_)
    total += std::popcount(w);
  return total;
}

bool VertexSet::empty() const {
  for (auto w : words_)
    if (w)
      return false;
  return true;
}

void VertexSet::insert(std::size_t v) {
  if (v >= universe_)
    throw std::out_of_range("VertexSet: member " + std::to_string(v) +
                            " outside universe " + std::to_string(universe_));
  words_[v / 64] |= std::uint64_t{1} << (v % 64);
}

void VertexSet::erase(std::size_t v) {
  if (v < universe_)
    words_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
}

std::vector<std::size_t> VertexSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (auto w = words_[i]; w; w &= w - 1)
      out.push_back(i * 64 + std::countr_zero(w));
  }
  return out;
}

GraphBuilder::GraphBuilder(std::size_t n) {
  if (n > kMaxVertices)
    throw std::invalid_argument("graph order " + std::to_string(n) +
                                " exceeds maximum " +
                                std::to_string(kMaxVertices));
  g_.n_ = n;
  g_.stride_ = words_for(n);
  g_.rows_.assign(n * g_.stride_, 0);
}

bool GraphBuilder::add_edge(std::size_t u, std::size_t v) {
  if (u >= g_.n_ || v >= g_.n_)
    throw std::out_of_range("edge endpoint out of range");
  if (u == v)
    throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
  auto &word = g_.rows_[u * g_.stride_ + v / 64];
  const std::uint64_t bit = std::uint64_t{1} << (v % 64);
  if (word & bit)
    return false;
  word |= bit;
  g_.rows_[v * g_.stride_ + u / 64] |= std::uint64_t{1} << (u % 64);
  ++g_.edges_;
  return true;
}

Graph GraphBuilder::build() && { return std::move(g_); }

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
  GraphBuilder b(n);
  for (auto [u, v] : edges) {
    if (!b.add_edge(u, v))
      throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " +
                                  std::to_string(v));
  }
  *this = std::move(b).build();
}

Graph Graph::complete(std::size_t n) {
  GraphBuilder b(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      b.add_edge(u, v);
  return std::move(b).build();
}

Graph Graph::path(std::size_t n) {
  GraphBuilder b(n);
  for (std::size_t v = 1; v < n; ++v)
    b.add_edge(v - 1, v);
  return std::move(b).build();
}

Graph Graph::cycle(std::size_t n) {
  if (n < 3)
    throw std::invalid_argument("cycle needs at least 3 vertices");
  GraphBuilder b(n);
  for (std::size_t v = 0; v < n; ++v)
    b.add_edge(v, (v + 1) % n);
  return std::move(b).build();
}

Graph Graph::star(std::size_t leaves) {
  GraphBuilder b(leaves + 1);
  for (std::size_t v = 1; v <= leaves; ++v)
    b.add_edge(0, v);
  return std::move(b).build();
}

Graph Graph::complete_bipartite(std::size_t a, std::size_t b) {
  GraphBuilder gb(a + b);
  for (std::size_t u = 0; u < a; ++u)
    for (std::size_t v = a; v < a + b; ++v)
      gb.add_edge(u, v);
  return std::move(gb).build();
}

std::size_t Graph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (auto w : row(v))
    d += std::popcount(w);
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (std::size_t u = 0; u < n_; ++u) {
    const auto r = row(u);
    for (std::size_t i = u / 64; i < stride_; ++i) {
      auto w = r[i];
      if (i == u / 64)
        w &= ~((std::uint64_t{2} << (u % 64)) - 1); // keep bits > u
      for (; w; w &= w - 1)
        out.emplace_back(u, i * 64 + std::countr_zero(w));
    }
  }
  return out;
}

namespace {

void sample_per_pair(GraphBuilder &b, std::size_t n, double p,
                     PhiloxStream &rng) {
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.uniform() < p)
        b.add_edge(u, v);
}

// Geometric skipping over the same lexicographic pair order.
void sample_skipping(GraphBuilder &b, std::size_t n, double p,
                     PhiloxStream &rng) {
  const double log_q = std::log1p(-p);
  std::size_t u = 0, v = 1;
  while (u + 1 < n) {
    const double draw = 1.0 - rng.uniform(); // (0, 1]
    double skip = std::floor(std::log(draw) / log_q);
    // advance (u, v) by `skip` pairs
    while (skip > 0 && u + 1 < n) {
      const double left_in_row = static_cast<double>(n - v);
      if (skip < left_in_row) {
        v += static_cast<std::size_t>(skip);
        skip = 0;
      } else {
        skip -= left_in_row;
        ++u;
        v = u + 1;
      }
    }
    if (u + 1 >= n)
      break;
    b.add_edge(u, v);
    if (++v == n) {
      ++u;
      v = u + 1;
    }
  }
}

} // namespace

Graph sample_gnp(std::size_t n, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_gnp: p must lie in [0, 1]");
  GraphBuilder b(n); // enforces kMaxVertices
  PhiloxStream rng(seed);
  if (p == 0.0)
    return std::move(b).build();
  if (n >= kGeometricSkipThreshold && p < 0.5)
    sample_skipping(b, n, p, rng);
  else
    sample_per_pair(b, n, p, rng);
  return std::move(b).build();
}

Graph induced_subgraph(const Graph &g, const VertexSet &s) {
  if (s.universe() != g.order())
    throw std::invalid_argument("induced_subgraph: set over " +
                                std::to_string(s.universe()) +
                                " vertices, graph has " +
                                std::to_string(g.order()));
  const auto members = s.members();
  GraphBuilder b(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (g.adjacent(members[i], members[j]))
        b.add_edge(i, j);
  return std::move(b).build();
}

std::size_t component_count(const Graph &g) {
  const std::size_t n = g.order();
  const std::size_t stride = g.words_per_row();
  std::vector<std::uint64_t> unseen(stride, 0);
  for (std::size_t v = 0; v < n; ++v)
    unseen[v / 64] |= std::uint64_t{1} << (v % 64);

  std::size_t components = 0;
  std::vector<std::size_t> stack;
  for (std::size_t w = 0; w < stride; ++w) {
    while (unseen[w]) {
      const std::size_t root = w * 64 + std::countr_zero(unseen[w]);
      unseen[w] &= unseen[w] - 1;
      ++components;
      stack.assign(1, root);
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        const auto r = g.row(x);
        for (std::size_t i = 0; i < stride; ++i) {
          auto fresh = r[i] & unseen[i];
          unseen[i] &= ~fresh;
          for (; fresh; fresh &= fresh - 1)
            stack.push_back(i * 64 + std::countr_zero(fresh));
        }
      }
    }
  }
  return components;
}

bool is_connected(const Graph &g) { return component_count(g) <= 1; }

bool is_tree(const Graph &g) {
  return g.order() >= 1 && g.edge_count() + 1 == g.order() && is_connected(g);
}

bool is_forest(const Graph &g) {
  return g.order() >= 1 && g.edge_count() + component_count(g) == g.order();
}

bool well_formed(const Graph &g) {
  std::size_t bits = 0;
  for (std::size_t u = 0; u < g.order(); ++u) {
    if (g.adjacent(u, u))
      return false;
    const auto r = g.row(u);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (auto w = r[i]; w; w &= w - 1) {
        const std::size_t v = i * 64 + std::countr_zero(w);
        if (v >= g.order() || !g.adjacent(v, u))
          return false;
        ++bits;
      }
    }
  }
  return bits == 2 * g.edge_count();
}

void write_graph(std::ostream &out, const Graph &g) {
  out << g.order() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges())
    out << u << ' ' << v << '\n';
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string &what) {
  throw std::runtime_error("graph text line " + std::to_string(line) + ": " +
                           what);
}

bool parse_two(const std::string &text, unsigned long long &a,
               unsigned long long &b) {
  std::istringstream ss(text);
  std::string extra;
  if (!(ss >> a >> b))
    return false;
  return !(ss >> extra);
}

} // namespace

Graph read_graph(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    parse_error(1, "missing header");
  unsigned long long n = 0, m = 0;
  if (line.find('-') != std::string::npos || !parse_two(line, n, m))
    parse_error(1, "expected \"n m\"");
  if (n > kMaxVertices)
    parse_error(1, "n exceeds maximum " + std::to_string(kMaxVertices));
  if (m > n * (n - (n ? 1 : 0)) / 2)
    parse_error(1, "more edges than vertex pairs");
  GraphBuilder b(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lineno = i + 2;
    if (!std::getline(in, line))
      parse_error(lineno, "expected " + std::to_string(m) + " edges");
    unsigned long long u = 0, v = 0;
    if (line.find('-') != std::string::npos || !parse_two(line, u, v))
      parse_error(lineno, "expected \"u v\"");
    if (!(u < v && v < n))
      parse_error(lineno, "edge must satisfy 0 <= u < v < n");
    if (!b.add_edge(u, v))
      parse_error(lineno, "duplicate edge");
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      parse_error(m + 2, "trailing content after edge list");
  return std::move(b).build();
}

Graph read_graph_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

void write_graph_file(const std::string &path, const Graph &g) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_graph(out, g);
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

} // namespace itree
