#ifndef ITREE_SOLVER_HPP
#define ITREE_SOLVER_HPP

#include <cstddef>
#include <cstdint>

#include "itree/graph.hpp"
#include "itree/rng.hpp"

namespace itree {

struct SolveResult {
  std::size_t size = 0;
  VertexSet witness;
  std::uint64_t nodes_explored = 0;
  bool optimal = false;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;
inline constexpr std::size_t kBruteForceMaxOrder = 20;

/// Exhaustive scan of all 2^n subsets. Refuses n > 20.
SolveResult max_induced_tree_bruteforce(const Graph &g);

/// Branch and bound over induced trees grown one vertex at a time from their
/// minimum-index vertex. A vertex is addable iff it has exactly one neighbour
/// in the current tree. `budget` caps the number of branch expansions; when it
/// runs out the result is a valid lower bound with optimal = false.
SolveResult max_induced_tree(const Graph &g,
                             std::uint64_t budget = kDefaultBudget);

/// Randomised greedy growth with restarts. Never claims optimality.
SolveResult greedy_tree_lower_bound(const Graph &g, std::size_t restarts,
                                    Seed seed);

/// Number of k-subsets inducing a tree. Requires n <= 64.
std::uint64_t count_induced_trees(const Graph &g, std::size_t k);

/// True when the witness of `r` induces a tree of r.size vertices in g.
bool certify(const Graph &g, const SolveResult &r);

} // namespace itree

#endif // ITREE_SOLVER_HPP
