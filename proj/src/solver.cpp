#include "itree/solver.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace itree {

namespace {

// Bitset over the vertex range. W > 0 fixes the word count at compile time;
// W == 0 sizes it at run time for very large graphs.
template <std::size_t W> class Bits {
  using Storage = std::conditional_t<W == 0, std::vector<std::uint64_t>,
                                     std::array<std::uint64_t, W>>;

public:
  explicit Bits(std::size_t words) {
    if constexpr (W == 0)
      w_.assign(words, 0);
    else
      w_.fill(0);
  }

  std::size_t words() const { return w_.size(); }

  void load(std::span<const std::uint64_t> row) {
    for (std::size_t i = 0; i < words(); ++i)
      w_[i] = row[i];
  }
  void set(std::size_t v) { w_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(std::size_t v) { w_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool test(std::size_t v) const { return (w_[v / 64] >> (v % 64)) & 1u; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_)
      c += std::popcount(x);
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x)
        return true;
    return false;
  }
  std::size_t first() const {
    for (std::size_t i = 0; i < words(); ++i)
      if (w_[i])
        return i * 64 + std::countr_zero(w_[i]);
    return words() * 64;
  }
  // Index of the j-th set bit, j < count().
  std::size_t select(std::size_t j) const {
    for (std::size_t i = 0; i < words(); ++i) {
      auto x = w_[i];
      const std::size_t c = std::popcount(x);
      if (j < c) {
        while (j--)
          x &= x - 1;
        return i * 64 + std::countr_zero(x);
      }
      j -= c;
    }
    return words() * 64;
  }

  // this = (this & ~mask)
  void remove(std::span<const std::uint64_t> mask) {
    for (std::size_t i = 0; i < words(); ++i)
      w_[i] &= ~mask[i];
  }
  void remove(const Bits &mask) { remove(mask.span()); }
  void keep(std::span<const std::uint64_t> mask) {
    for (std::size_t i = 0; i < words(); ++i)
      w_[i] &= mask[i];
  }
  void add(const Bits &other) {
    for (std::size_t i = 0; i < words(); ++i)
      w_[i] |= other.w_[i];
  }
  std::size_t union_count(const Bits &other) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words(); ++i)
      c += std::popcount(w_[i] | other.w_[i]);
    return c;
  }
  std::size_t intersect_count(std::span<const std::uint64_t> row) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words(); ++i)
      c += std::popcount(w_[i] & row[i]);
    return c;
  }

  std::span<const std::uint64_t> span() const { return {w_.data(), words()}; }
  std::uint64_t word(std::size_t i) const { return w_[i]; }
  std::uint64_t &word(std::size_t i) { return w_[i]; }

private:
  Storage w_;
};

template <std::size_t W>
VertexSet to_vertex_set(const Bits<W> &b, std::size_t n) {
  VertexSet s(n);
  auto out = s.words();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = b.word(i);
  return s;
}

// One level of the search: the current tree, the frontier (vertices with
// exactly one tree neighbour that have not been excluded) and the untouched
// vertices (no tree neighbour, not excluded, not in the tree). Vertices with
// two or more tree neighbours are in neither set and never return.
template <std::size_t W> struct Frame {
  Bits<W> tree;
  Bits<W> frontier;
  Bits<W> untouched;
  std::size_t size;

  explicit Frame(std::size_t words)
      : tree(words), frontier(words), untouched(words), size(0) {}
};

template <std::size_t W> class TreeSearch {
public:
  TreeSearch(const Graph &g, std::uint64_t budget)
      : g_(g), n_(g.order()), words_(g.words_per_row()), budget_(budget),
        best_tree_(words_), reach_(words_), wave_(words_), next_(words_) {}

  SolveResult run() {
    SolveResult result;
    result.witness = VertexSet(n_);
    if (n_ == 0) {
      result.optimal = true;
      return result;
    }
    best_size_ = 1;
    best_tree_.set(0);

    std::vector<Frame<W>> stack;
    stack.reserve(n_ + 1);
    bool exhausted = false;

    for (std::size_t root = 0; root < n_ && !exhausted; ++root) {
      // Trees rooted here only use vertices >= root.
      if (n_ - root <= best_size_)
        break;
      Frame<W> f(words_);
      f.tree.set(root);
      f.size = 1;
      for (std::size_t v = root + 1; v < n_; ++v) {
        if (g_.adjacent(root, v))
          f.frontier.set(v);
        else
          f.untouched.set(v);
      }
      if (!enter(f)) {
        exhausted = true;
        break;
      }
      stack.push_back(std::move(f));

      while (!stack.empty()) {
        auto &top = stack.back();
        if (!top.frontier.any() || bound(top) <= best_size_) {
          stack.pop_back();
          continue;
        }
        const std::size_t v = pick(top);
        top.frontier.reset(v); // the exclude branch continues in this frame

        Frame<W> child = top;
        const auto nv = g_.row(v);
        child.tree.set(v);
        ++child.size;
        // Frontier vertices adjacent to v now see two tree vertices.
        child.frontier.remove(nv);
        Bits<W> fresh = child.untouched;
        fresh.keep(nv);
        child.untouched.remove(nv);
        child.frontier.add(fresh);

        if (!enter(child)) {
          exhausted = true;
          break;
        }
        stack.push_back(std::move(child));
      }
    }

    result.size = best_size_;
    result.witness = to_vertex_set(best_tree_, n_);
    result.nodes_explored = nodes_;
    result.optimal = !exhausted;
    return result;
  }

private:
  bool enter(const Frame<W> &f) {
    if (nodes_ >= budget_)
      return false;
    ++nodes_;
    if (f.size > best_size_) {
      best_size_ = f.size;
      best_tree_ = f.tree;
    }
    return true;
  }

  // Admissible bound: tree size plus every vertex that can still be reached
  // from the frontier through untouched vertices.
  std::size_t bound(const Frame<W> &f) {
    const std::size_t cheap = f.size + f.frontier.union_count(f.untouched);
    if (cheap <= best_size_)
      return cheap;
    reach_ = f.frontier;
    wave_ = f.frontier;
    Bits<W> pool = f.untouched;
    while (wave_.any()) {
      next_ = Bits<W>(words_);
      for (std::size_t i = 0; i < words_; ++i) {
        for (auto w = wave_.word(i); w; w &= w - 1) {
          const auto r = g_.row(i * 64 + std::countr_zero(w));
          for (std::size_t j = 0; j < words_; ++j)
            next_.word(j) |= r[j] & pool.word(j);
        }
      }
      pool.remove(next_);
      reach_.add(next_);
      wave_ = next_;
    }
    return f.size + reach_.count();
  }

  // Branch on the frontier vertex with the most addable neighbours; the
  // include branch then tends to find large trees early.
  std::size_t pick(const Frame<W> &f) const {
    std::size_t best = f.frontier.first();
    std::size_t best_score = 0;
    bool first = true;
    for (std::size_t i = 0; i < words_; ++i) {
      for (auto w = f.frontier.word(i); w; w &= w - 1) {
        const std::size_t v = i * 64 + std::countr_zero(w);
        const auto r = g_.row(v);
        const std::size_t gain = f.untouched.intersect_count(r);
        const std::size_t loss = f.frontier.intersect_count(r);
        const std::size_t score = gain + (n_ - loss);
        if (first || score > best_score) {
          best = v;
          best_score = score;
          first = false;
        }
      }
    }
    return best;
  }

  const Graph &g_;
  std::size_t n_;
  std::size_t words_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t best_size_ = 0;
  Bits<W> best_tree_;
  Bits<W> reach_, wave_, next_;
};

template <std::size_t W>
SolveResult greedy_impl(const Graph &g, std::size_t restarts, Seed seed) {
  const std::size_t n = g.order();
  const std::size_t words = g.words_per_row();
  SolveResult result;
  result.witness = VertexSet(n);
  result.optimal = false;
  if (n == 0)
    return result;

  PhiloxStream rng(seed);
  Bits<W> best(words);
  std::size_t best_size = 0;
  const std::size_t rounds = restarts == 0 ? 1 : restarts;
  for (std::size_t round = 0; round < rounds; ++round) {
    Bits<W> tree(words), frontier(words), untouched(words);
    const std::size_t start = rng.below(n);
    tree.set(start);
    std::size_t size = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == start)
        continue;
      if (g.adjacent(start, v))
        frontier.set(v);
      else
        untouched.set(v);
    }
    ++result.nodes_explored;
    while (frontier.any()) {
      const std::size_t v = frontier.select(rng.below(frontier.count()));
      const auto nv = g.row(v);
      frontier.reset(v);
      frontier.remove(nv);
      Bits<W> fresh = untouched;
      fresh.keep(nv);
      untouched.remove(nv);
      frontier.add(fresh);
      tree.set(v);
      ++size;
      ++result.nodes_explored;
    }
    if (size > best_size) {
      best_size = size;
      best = tree;
    }
  }
  result.size = best_size;
  result.witness = to_vertex_set(best, n);
  return result;
}

template <template <std::size_t> class Fn, typename... Args>
auto dispatch_width(std::size_t words, Args &&...args) {
  if (words <= 1)
    return Fn<1>{}(std::forward<Args>(args)...);
  if (words <= 2)
    return Fn<2>{}(std::forward<Args>(args)...);
  if (words <= 4)
    return Fn<4>{}(std::forward<Args>(args)...);
  if (words <= 8)
    return Fn<8>{}(std::forward<Args>(args)...);
  return Fn<0>{}(std::forward<Args>(args)...);
}

// Fixed-width words beyond the graph's stride stay zero, which keeps every
// bitset operation correct when W exceeds words_per_row.
template <std::size_t W> struct RunSearch {
  SolveResult operator()(const Graph &g, std::uint64_t budget) const {
    return TreeSearch<W>(g, budget).run();
  }
};

template <std::size_t W> struct RunGreedy {
  SolveResult operator()(const Graph &g, std::size_t restarts,
                         Seed seed) const {
    return greedy_impl<W>(g, restarts, seed);
  }
};

} // namespace

SolveResult max_induced_tree_bruteforce(const Graph &g) {
  const std::size_t n = g.order();
  if (n > kBruteForceMaxOrder)
    throw std::invalid_argument("brute force limited to n <= 20");
  SolveResult result;
  result.witness = VertexSet(n);
  result.optimal = true;
  if (n == 0)
    return result;

  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    adj[v] = static_cast<std::uint32_t>(g.row(v)[0]);

  std::uint32_t best_mask = 0;
  std::size_t best = 0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const std::size_t size = std::popcount(mask);
    if (size <= best)
      continue;
    std::size_t twice_edges = 0;
    for (auto m = mask; m; m &= m - 1)
      twice_edges += std::popcount(adj[std::countr_zero(m)] & mask);
    if (twice_edges != 2 * (size - 1))
      continue;
    // connectivity by flooding from the lowest member
    std::uint32_t seen = mask & (~mask + 1);
    std::uint32_t wave = seen;
    while (wave) {
      std::uint32_t next = 0;
      for (auto m = wave; m; m &= m - 1)
        next |= adj[std::countr_zero(m)];
      next &= mask & ~seen;
      seen |= next;
      wave = next;
    }
    if (seen == mask) {
      best = size;
      best_mask = mask;
    }
  }
  result.nodes_explored = limit;
  result.size = best;
  for (auto m = best_mask; m; m &= m - 1)
    result.witness.insert(std::countr_zero(m));
  return result;
}

SolveResult max_induced_tree(const Graph &g, std::uint64_t budget) {
  return dispatch_width<RunSearch>(g.words_per_row(), g, budget);
}

SolveResult greedy_tree_lower_bound(const Graph &g, std::size_t restarts,
                                    Seed seed) {
  return dispatch_width<RunGreedy>(g.words_per_row(), g, restarts, seed);
}

std::uint64_t count_induced_trees(const Graph &g, std::size_t k) {
  const std::size_t n = g.order();
  if (n > 64)
    throw std::invalid_argument("count_induced_trees requires n <= 64");
  if (k == 0 || k > n)
    return 0;
  std::vector<std::uint64_t> adj(n);
  for (std::size_t v = 0; v < n; ++v)
    adj[v] = g.row(v)[0];

  std::uint64_t count = 0;
  std::uint64_t mask = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  const std::uint64_t stop = (n == 64) ? 0 : (std::uint64_t{1} << n);
  for (;;) {
    std::size_t twice_edges = 0;
    for (auto m = mask; m; m &= m - 1)
      twice_edges += std::popcount(adj[std::countr_zero(m)] & mask);
    if (twice_edges == 2 * (k - 1)) {
      std::uint64_t seen = mask & (~mask + 1);
      std::uint64_t wave = seen;
      while (wave) {
        std::uint64_t next = 0;
        for (auto m = wave; m; m &= m - 1)
          next |= adj[std::countr_zero(m)];
        next &= mask & ~seen;
        seen |= next;
        wave = next;
      }
      if (seen == mask)
        ++count;
    }
    // Gosper's hack: next k-subset in colex order
    const std::uint64_t low = mask & (~mask + 1);
    const std::uint64_t ripple = mask + low;
    if (ripple == 0)
      break;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
    if (stop != 0 && mask >= stop)
      break;
  }
  return count;
}

bool certify(const Graph &g, const SolveResult &r) {
  if (r.witness.universe() != g.order() || r.witness.size() != r.size)
    return false;
  if (r.size == 0)
    return g.order() == 0;
  return is_tree(induced_subgraph(g, r.witness));
}

} // namespace itree
