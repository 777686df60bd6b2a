#include "itree/trees.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace itree {

namespace {

// Relative slack allowed when an exact count is compared with a bound
// evaluated through exp/log.
constexpr double kBoundTolerance = 1e-9;

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--)
    r *= b;
  return r;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

void require_range(bool ok, const char *what) {
  if (!ok)
    throw std::invalid_argument(what);
}

double logf_tail(double k, double ell, double r) {
  return log_pow(ell + 1, k - ell - 1) + log_pow(k - ell, k - r - 2);
}

// Tree masks restricted to [first, first + width), one entry per tree.
std::vector<std::uint64_t> restricted_masks(std::size_t k, std::size_t first,
                                            std::size_t width) {
  std::vector<std::uint64_t> masks;
  masks.reserve(cayley_count(k));
  enumerate_labeled_trees(k, [&](std::span<const Edge> t) {
    masks.push_back(window_mask(t, first, width));
  });
  return masks;
}

std::map<std::uint64_t, std::uint64_t>
histogram(const std::vector<std::uint64_t> &masks) {
  std::map<std::uint64_t, std::uint64_t> h;
  for (auto m : masks)
    ++h[m];
  return h;
}

void census_walk(std::size_t ell, const std::vector<Edge> &edges,
                 std::size_t next, std::array<std::uint8_t, 16> &comp,
                 std::size_t r, ForestCensus &out) {
  ++out.by_edges[r];
  ++out.total;
  std::array<std::uint64_t, 16> sizes{};
  for (std::size_t v = 0; v < ell; ++v)
    ++sizes[comp[v]];
  std::uint64_t product = 1;
  for (std::size_t c = 0; c < ell; ++c)
    if (sizes[c])
      product *= sizes[c];
  out.rooted[ell - r] += product;

  for (std::size_t e = next; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    const auto cu = comp[u], cv = comp[v];
    if (cu == cv)
      continue;
    auto saved = comp;
    for (std::size_t x = 0; x < ell; ++x)
      if (comp[x] == cv)
        comp[x] = cu;
    census_walk(ell, edges, e + 1, comp, r + 1, out);
    comp = saved;
  }
}

bool within(double value, double bound) {
  return value <= bound * (1 + kBoundTolerance);
}

} // namespace

std::uint64_t cayley_count(std::size_t k) {
  require_range(k >= 1, "cayley_count: k must be positive");
  return k <= 2 ? 1 : ipow(k, k - 2);
}

std::vector<Edge> prufer_decode(std::span<const std::size_t> sequence,
                                std::size_t k) {
  require_range(k >= 1 && sequence.size() + 2 == std::max<std::size_t>(k, 2),
                "prufer_decode: sequence length must be k - 2");
  std::vector<Edge> edges;
  if (k == 1)
    return edges;
  std::vector<std::size_t> degree(k, 1);
  for (auto a : sequence) {
    require_range(a < k, "prufer_decode: label out of range");
    ++degree[a];
  }
  std::size_t ptr = 0;
  while (degree[ptr] != 1)
    ++ptr;
  std::size_t leaf = ptr;
  for (auto v : sequence) {
    edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
    if (--degree[v] == 1 && v < ptr) {
      leaf = v;
    } else {
      ++ptr;
      while (degree[ptr] != 1)
        ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(std::min(leaf, k - 1), std::max(leaf, k - 1));
  std::sort(edges.begin(), edges.end());
  return edges;
}

void enumerate_labeled_trees(
    std::size_t k, const std::function<void(std::span<const Edge>)> &visit) {
  require_range(k >= 1 && k <= kMaxTreeOrder,
                "enumerate_labeled_trees: k must be in 1..9");
  if (k == 1) {
    visit({});
    return;
  }
  std::vector<std::size_t> seq(k - 2, 0);
  for (;;) {
    const auto edges = prufer_decode(seq, k);
    visit(edges);
    std::size_t i = seq.size();
    while (i > 0 && seq[i - 1] == k - 1)
      seq[--i] = 0;
    if (i == 0)
      break;
    ++seq[i - 1];
  }
}

std::uint64_t window_mask(std::span<const Edge> edges, std::size_t first,
                          std::size_t width) {
  std::uint64_t mask = 0;
  for (auto [u, v] : edges) {
    if (u >= first && v >= first && u < first + width && v < first + width)
      mask |= std::uint64_t{1} << pair_index(u - first, v - first);
  }
  return mask;
}

const ForestCensus &forest_census(std::size_t ell) {
  require_range(ell >= 1 && ell <= kMaxForestOrder,
                "forest_census: l must be in 1..9");
  static std::mutex mu;
  static std::array<std::unique_ptr<ForestCensus>, kMaxForestOrder + 1> cache;
  std::lock_guard lock(mu);
  if (!cache[ell]) {
    auto c = std::make_unique<ForestCensus>();
    c->ell = ell;
    c->by_edges.assign(ell, 0);
    c->rooted.assign(ell + 1, 0);
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < ell; ++v)
      for (std::size_t u = 0; u < v; ++u)
        edges.emplace_back(u, v);
    std::array<std::uint8_t, 16> comp{};
    for (std::size_t v = 0; v < ell; ++v)
      comp[v] = static_cast<std::uint8_t>(v);
    census_walk(ell, edges, 0, comp, 0, *c);
    cache[ell] = std::move(c);
  }
  return *cache[ell];
}

std::uint64_t rooted_forest_formula(std::size_t n, std::size_t m, int offset) {
  require_range(m >= 1 && m <= n, "rooted_forest_formula: need 1 <= m <= n");
  require_range(offset == -1 || offset == 1,
                "rooted_forest_formula: offset must be -1 or +1");
  // C(n, m) m = n C(n-1, m-1), so C(n, m) m n^(n-m+offset) is
  // C(n-1, m-1) n^(n-m+offset+1), and the exponent is never negative.
  return binomial(n - 1, m - 1) * ipow(n, n - m + 1 + offset);
}

std::uint64_t forest_count_bound(std::size_t ell, std::size_t r) {
  require_range(ell >= 1 && r < ell, "forest_count_bound: need r < l");
  return binomial(ell - 1, ell - r - 1) * ipow(ell, r);
}

ForestCount count_forests(std::size_t ell, std::size_t r) {
  require_range(ell >= 1 && ell <= kMaxForestOrder && r < ell,
                "count_forests: need l in 1..9 and r <= l - 1");
  const auto &c = forest_census(ell);
  const std::size_t m = ell - r;
  ForestCount out;
  out.ell = ell;
  out.r = r;
  out.value = c.by_edges[r];
  out.rooted_enumerated = c.rooted[m];
  out.rooted_minus_one = rooted_forest_formula(ell, m, -1);
  out.rooted_plus_one = rooted_forest_formula(ell, m, +1);
  out.bound = forest_count_bound(ell, r);
  return out;
}

std::uint64_t OverlapTable::total() const {
  std::uint64_t t = 0;
  for (auto x : intersecting)
    t += x;
  return t;
}

OverlapTable count_overlap_pairs(std::size_t k, std::size_t ell) {
  require_range(ell >= 2 && ell <= k && k <= kMaxOverlapOrder,
                "count_overlap_pairs: need 2 <= l <= k <= 6");
  OverlapTable t;
  t.k = k;
  t.ell = ell;
  t.intersecting.assign(ell, 0);
  t.coinciding.assign(ell, 0);

  // First tree on [k]: shared vertices are its last l. Second tree on
  // {k-l, ..., 2k-l-1}, relabelled to [k]: shared vertices are its first l.
  const auto first = histogram(restricted_masks(k, k - ell, ell));
  const auto second = histogram(restricted_masks(k, 0, ell));
  for (const auto &[m1, c1] : first) {
    for (const auto &[m2, c2] : second) {
      const std::size_t r = std::popcount(m1 & m2);
      t.intersecting[r] += c1 * c2;
      if (m1 == m2)
        t.coinciding[r] += c1 * c2;
    }
  }
  return t;
}

FBranch f_branch(double ell, double r) {
  if (2 * r < ell)
    return FBranch::sparse;
  if (ell < std::numbers::e * (ell - r))
    return FBranch::middle;
  return FBranch::dense;
}

LogReal f_piecewise(double k, double ell, double r) {
  if (!(r >= 0 && r < ell && ell < k))
    throw std::domain_error("f_piecewise: need 0 <= r < l < k");
  double head = 0;
  switch (f_branch(ell, r)) {
  case FBranch::sparse:
    head = r * std::numbers::ln2;
    break;
  case FBranch::middle:
    head = (2 * r - ell) * std::log(3.0) + (2 * ell - 3 * r) * std::numbers::ln2;
    break;
  case FBranch::dense:
    head = (ell - r) * (std::log(ell) - std::log(ell - r));
    break;
  }
  return LogReal::from_log(head + logf_tail(k, ell, r));
}

LogReal f_piecewise(std::size_t k, std::size_t ell, std::size_t r) {
  if (!(r + 1 <= ell && ell < k))
    throw std::domain_error("f_piecewise: need 0 <= r <= l - 1 < k");
  return f_piecewise(static_cast<double>(k), static_cast<double>(ell),
                     static_cast<double>(r));
}

LogReal f0(double k, double ell, double r) {
  if (!(r >= 0 && r < ell && ell <= k))
    throw std::domain_error("f0: need 0 <= r < l <= k");
  switch (f_branch(ell, r)) {
  case FBranch::sparse:
    return LogReal::from_log(r * std::numbers::ln2);
  case FBranch::middle:
    return LogReal::from_log(k * std::log(4.0 / 3) + r * std::log(9.0 / 8));
  case FBranch::dense:
    break;
  }
  return LogReal::from_log((k - r) * (std::log(ell) - std::log(ell - r)));
}

LogReal f1(double k, double ell, double r, double p) {
  if (!(p > 0 && p < 1))
    throw std::domain_error("f1: need 0 < p < 1");
  const double s = k - ell;
  return f0(k, ell, r) * LogReal::from_double(s * p / (1 - p)).pow(k - r);
}

bool OverlapReport::ok() const { return violations() == 0; }

std::size_t OverlapReport::violations() const {
  std::size_t v = 0;
  for (const auto &row : rows)
    v += row.ok ? 0 : 1;
  for (const auto &c : product)
    v += (c.applicable && !c.holds) ? 1 : 0;
  return v;
}

OverlapReport validate_overlap_bounds(std::size_t k, std::size_t ell,
                                      std::span<const double> ps) {
  const auto table = count_overlap_pairs(k, ell);
  const double trees = static_cast<double>(cayley_count(k));
  OverlapReport rep;
  rep.k = k;
  rep.ell = ell;

  for (std::size_t r = 0; r < ell; ++r) {
    BoundRow row;
    row.r = r;
    row.n_coinciding = table.coinciding[r];
    row.n_intersecting = table.intersecting[r];
    row.phi = count_forests(ell, r).value;
    row.bound1 = trees * trees;
    if (ell < k) {
      const double f = f_piecewise(k, ell, r).to_double();
      row.bound2 = trees * f;
      row.bound3 = static_cast<double>(row.phi) * f * f;
    }
    auto check = [&](double n) {
      int bad = within(n, row.bound1) ? 0 : 1;
      if (row.bound2 && !within(n, *row.bound2))
        ++bad;
      if (row.bound3 && !within(n, *row.bound3))
        ++bad;
      return bad;
    };
    row.ok = check(static_cast<double>(row.n_coinciding)) == 0;
    row.intersecting_violations = check(static_cast<double>(row.n_intersecting));
    rep.rows.push_back(row);
  }

  const double kd = static_cast<double>(k), ld = static_cast<double>(ell);
  const double rhs_tail = std::pow(kd - ld, kd - 2) * std::pow(ld + 1, kd - ld - 1);
  for (double p : ps) {
    if (!(p > 0 && p < 1))
      throw std::invalid_argument("validate_overlap_bounds: p must be in (0,1)");
    for (std::size_t r = 0; r < ell; ++r) {
      ProductCheck c;
      c.p = p;
      c.r = r;
      c.applicable = static_cast<double>(ell) <= k - 2 * (1 - p) / p;
      c.lhs = static_cast<double>(table.coinciding[r]) *
              std::pow((1 - p) / p, static_cast<double>(r));
      c.rhs = trees * rhs_tail;
      c.holds = within(c.lhs, c.rhs);
      rep.product.push_back(c);
    }
  }
  return rep;
}

std::uint64_t count_trees_extending_forest(std::size_t k, std::size_t ell,
                                           std::span<const Edge> forest) {
  require_range(k >= 1 && k <= kMaxExtensionOrder && ell >= 1 && ell <= k,
                "count_trees_extending_forest: need 1 <= l <= k <= 8");
  const Graph f(ell, forest);
  if (!is_forest(f))
    throw std::invalid_argument("count_trees_extending_forest: not a forest");
  const std::uint64_t target = window_mask(f.edges(), 0, ell);
  std::uint64_t count = 0;
  enumerate_labeled_trees(k, [&](std::span<const Edge> t) {
    if (window_mask(t, 0, ell) == target)
      ++count;
  });
  return count;
}

std::vector<ExtensionRow> extension_profile(std::size_t k, std::size_t ell) {
  require_range(k <= kMaxExtensionOrder && ell >= 1 && ell < k,
                "extension_profile: need 1 <= l < k <= 8");
  std::vector<ExtensionRow> rows(ell);
  for (std::size_t r = 0; r < ell; ++r) {
    rows[r].r = r;
    rows[r].f = f_piecewise(k, ell, r);
  }
  for (const auto &[mask, count] : histogram(restricted_masks(k, 0, ell))) {
    auto &row = rows[std::popcount(mask)];
    row.max_count = std::max(row.max_count, count);
  }
  for (auto &row : rows)
    row.ok = within(static_cast<double>(row.max_count), row.f.to_double());
  return rows;
}

} // namespace itree
