#ifndef ITREE_TREES_HPP
#define ITREE_TREES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "itree/graph.hpp"
#include "itree/log_real.hpp"

namespace itree {

inline constexpr std::size_t kMaxTreeOrder = 9;
inline constexpr std::size_t kMaxForestOrder = 9;
inline constexpr std::size_t kMaxOverlapOrder = 6;
inline constexpr std::size_t kMaxExtensionOrder = 8;

/// k^(k-2), with 1 for k = 1.
std::uint64_t cayley_count(std::size_t k);

/// Tree on [k] encoded by a Prufer sequence of length k - 2. Edges come back
/// as (u, v) with u < v, sorted.
std::vector<Edge> prufer_decode(std::span<const std::size_t> sequence,
                                std::size_t k);

/// Calls `visit` once for every labeled tree on [k], 1 <= k <= 9, in
/// lexicographic order of Prufer sequences.
void enumerate_labeled_trees(
    std::size_t k, const std::function<void(std::span<const Edge>)> &visit);

/// Index of pair {u, v} in a triangular layout that does not depend on the
/// vertex count: v(v-1)/2 + u for u < v.
constexpr std::size_t pair_index(std::size_t u, std::size_t v) {
  if (u > v)
    std::swap(u, v);
  return v * (v - 1) / 2 + u;
}

/// Bitmask of the edges with both ends in [first, first + width),
/// relabelled to start at 0.
std::uint64_t window_mask(std::span<const Edge> edges, std::size_t first,
                          std::size_t width);

/// Tally of every acyclic edge set of K_l.
struct ForestCensus {
  std::size_t ell = 0;
  /// by_edges[r] = number of forests with r edges.
  std::vector<std::uint64_t> by_edges;
  /// rooted[m] = number of rooted forests with m trees, i.e. the sum over
  /// forests with m components of the product of component sizes.
  std::vector<std::uint64_t> rooted;
  std::uint64_t total = 0;
};

/// Cached per l; l in 1..9.
const ForestCensus &forest_census(std::size_t ell);

/// C(n, m) m n^(n - m + offset) evaluated exactly; offset -1 or +1.
std::uint64_t rooted_forest_formula(std::size_t n, std::size_t m, int offset);

/// C(l, l-r)(l-r) l^(r-1), always an integer.
std::uint64_t forest_count_bound(std::size_t ell, std::size_t r);

struct ForestCount {
  std::size_t ell = 0;
  std::size_t r = 0;
  std::uint64_t value = 0;
  /// Rooted forests with l - r trees: enumeration and both closed forms.
  std::uint64_t rooted_enumerated = 0;
  std::uint64_t rooted_minus_one = 0;
  std::uint64_t rooted_plus_one = 0;
  std::uint64_t bound = 0;
};

ForestCount count_forests(std::size_t ell, std::size_t r);

/// Pairs of labeled trees on [k] and on [2k-l] \ [k-l], which share the
/// vertices k-l..k-1, tallied by the restriction to the shared vertices.
struct OverlapTable {
  std::size_t k = 0;
  std::size_t ell = 0;
  /// Pairs whose restricted edge sets have exactly r edges in common.
  std::vector<std::uint64_t> intersecting;
  /// Pairs whose restricted edge sets are equal and have r edges.
  std::vector<std::uint64_t> coinciding;

  std::uint64_t total() const;
};

/// 2 <= l <= k <= 6.
OverlapTable count_overlap_pairs(std::size_t k, std::size_t ell);

enum class FBranch { sparse, middle, dense };

/// sparse: r < l/2; middle: l/2 <= r < l(1 - 1/e); dense otherwise.
FBranch f_branch(double ell, double r);

/// Upper bound on the number of trees on [k] inducing a fixed r-edge forest
/// on [l]. Integer form needs 0 <= r <= l-1 < k.
LogReal f_piecewise(std::size_t k, std::size_t ell, std::size_t r);
/// Same at real r, 0 <= r < l < k.
LogReal f_piecewise(double k, double ell, double r);

/// Large-p variants with s = k - l.
LogReal f0(double k, double ell, double r);
LogReal f1(double k, double ell, double r, double p);

struct BoundRow {
  std::size_t r = 0;
  std::uint64_t n_coinciding = 0;
  std::uint64_t n_intersecting = 0;
  std::uint64_t phi = 0;
  double bound1 = 0;
  /// Absent where f is undefined (l = k).
  std::optional<double> bound2;
  std::optional<double> bound3;
  bool ok = true;
  /// Bounds broken by the intersecting count; diagnostic only.
  int intersecting_violations = 0;
};

struct ProductCheck {
  double p = 0;
  std::size_t r = 0;
  /// l <= k - 2(1-p)/p; only these cells are gated.
  bool applicable = false;
  double lhs = 0;
  double rhs = 0;
  bool holds = true;
};

struct OverlapReport {
  std::size_t k = 0;
  std::size_t ell = 0;
  std::vector<BoundRow> rows;
  std::vector<ProductCheck> product;

  bool ok() const;
  std::size_t violations() const;
};

inline constexpr std::array<double, 3> kProductCheckP{0.1, 0.3, 0.5};

/// Checks N <= (k^(k-2))^2, N <= k^(k-2) f and N <= phi f^2 on the coinciding
/// counts, plus the product bound N ((1-p)/p)^r <= k^(k-2)(k-l)^(k-2)(l+1)^(k-l-1)
/// at each p in `ps`.
OverlapReport validate_overlap_bounds(std::size_t k, std::size_t ell,
                                      std::span<const double> ps =
                                          kProductCheckP);

/// Trees on [k] whose edges inside [l] are exactly `forest`.
/// k <= 8; forest must be acyclic on [l].
std::uint64_t count_trees_extending_forest(std::size_t k, std::size_t ell,
                                           std::span<const Edge> forest);

struct ExtensionRow {
  std::size_t r = 0;
  std::uint64_t max_count = 0;
  LogReal f;
  bool ok = true;
};

/// Largest extension count among r-edge forests on [l], against f.
std::vector<ExtensionRow> extension_profile(std::size_t k, std::size_t ell);

} // namespace itree

#endif // ITREE_TREES_HPP
