#include <doctest.h>

#include <cmath>
#include <set>

#include "itree/trees.hpp"

using namespace itree;

TEST_CASE("Cayley counts and distinct trees") {
  const std::uint64_t expected[] = {1, 1, 3, 16, 125, 1296, 16807};
  for (std::size_t k = 1; k <= 7; ++k) {
    std::set<std::vector<Edge>> seen;
    enumerate_labeled_trees(k, [&](std::span<const Edge> t) {
      REQUIRE(t.size() == k - 1);
      REQUIRE(std::is_sorted(t.begin(), t.end()));
      REQUIRE(is_tree(Graph(k, t)));
      seen.emplace(t.begin(), t.end());
    });
    CHECK(seen.size() == expected[k - 1]);
    CHECK(cayley_count(k) == expected[k - 1]);
  }
  CHECK_THROWS(enumerate_labeled_trees(0, [](auto) {}));
  CHECK_THROWS(enumerate_labeled_trees(10, [](auto) {}));
}

TEST_CASE("Prufer decoding") {
  const std::vector<std::size_t> seq{3, 3, 3};
  CHECK(prufer_decode(seq, 5) ==
        std::vector<Edge>{{0, 3}, {1, 3}, {2, 3}, {3, 4}});
  CHECK(prufer_decode({}, 2) == std::vector<Edge>{{0, 1}});
  CHECK_THROWS(prufer_decode(seq, 4));
}

TEST_CASE("forest counts") {
  for (std::size_t l = 1; l <= 7; ++l)
    CHECK(count_forests(l, 0).value == 1);
  CHECK(count_forests(3, 2).value == 3);
  CHECK(count_forests(4, 2).value == 15);
  CHECK(count_forests(4, 3).value == 16);
  // labeled forests on [l]
  const std::uint64_t totals[] = {1, 2, 7, 38, 291, 2932, 36961};
  for (std::size_t l = 1; l <= 7; ++l) {
    std::uint64_t sum = 0;
    for (std::size_t r = 0; r < l; ++r)
      sum += count_forests(l, r).value;
    CHECK(sum == totals[l - 1]);
    CHECK(forest_census(l).total == totals[l - 1]);
  }
  CHECK_THROWS(count_forests(4, 4));
  CHECK_THROWS(count_forests(10, 0));
}

TEST_CASE("rooted forest closed form uses exponent n-m-1") {
  for (std::size_t l = 1; l <= 8; ++l) {
    for (std::size_t r = 0; r < l; ++r) {
      const auto f = count_forests(l, r);
      CHECK(f.rooted_enumerated == f.rooted_minus_one);
      CHECK(f.value <= f.bound);
    }
  }
  // the other exponent overcounts by n^2
  const auto f = count_forests(5, 2);
  CHECK(f.rooted_plus_one == 25 * f.rooted_minus_one);
}

TEST_CASE("overlap pair tables") {
  const auto t32 = count_overlap_pairs(3, 2);
  CHECK(t32.intersecting == std::vector<std::uint64_t>{5, 4});
  CHECK(t32.coinciding == std::vector<std::uint64_t>{1, 4});
  const auto t22 = count_overlap_pairs(2, 2);
  CHECK(t22.intersecting == std::vector<std::uint64_t>{0, 1});
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t l = 2; l <= k; ++l) {
      const auto t = count_overlap_pairs(k, l);
      CHECK(t.total() == cayley_count(k) * cayley_count(k));
      for (std::size_t r = 0; r < l; ++r)
        CHECK(t.coinciding[r] <= t.intersecting[r]);
    }
  }
  CHECK_THROWS(count_overlap_pairs(7, 3));
  CHECK_THROWS(count_overlap_pairs(4, 1));
  CHECK_THROWS(count_overlap_pairs(3, 4));
}

TEST_CASE("coinciding counts equal the sum of squared extension counts") {
  // each forest F on the shared vertices contributes t(F)^2 pairs
  const std::size_t k = 5, l = 3;
  const auto t = count_overlap_pairs(k, l);
  std::vector<std::uint64_t> expect(l, 0);
  std::vector<Edge> all{{0, 1}, {0, 2}, {1, 2}};
  for (unsigned m = 0; m < 8; ++m) {
    std::vector<Edge> f;
    for (unsigned i = 0; i < 3; ++i)
      if (m >> i & 1)
        f.push_back(all[i]);
    if (f.size() == 3)
      continue;
    const auto c = count_trees_extending_forest(k, l, f);
    expect[f.size()] += c * c;
  }
  CHECK(t.coinciding == expect);
}

TEST_CASE("piecewise f examples and branches") {
  CHECK(f_piecewise(std::size_t{6}, 4, 0).to_double() == doctest::Approx(80));
  CHECK(f_piecewise(std::size_t{6}, 4, 3).to_double() == doctest::Approx(40));
  CHECK(f_piecewise(std::size_t{5}, 4, 2).to_double() == doctest::Approx(4));
  CHECK(f_branch(4, 1.999) == FBranch::sparse);
  CHECK(f_branch(4, 2) == FBranch::middle);
  CHECK(f_branch(4, 4 * (1 - 1 / std::exp(1.0)) - 1e-9) == FBranch::middle);
  CHECK(f_branch(4, 3) == FBranch::dense);
  CHECK(f_branch(10, 6) == FBranch::middle);
  CHECK(f_branch(10, 7) == FBranch::dense);
  CHECK_THROWS(f_piecewise(std::size_t{5}, 5, 2));
  CHECK_THROWS(f_piecewise(std::size_t{5}, 3, 3));
  // k = 2 edge case: l = 1, r = 0 gives 1 * 2^0 * 1^0
  CHECK(f_piecewise(std::size_t{2}, 1, 0).to_double() == doctest::Approx(1));
  CHECK(f_piecewise(6.0, 4.0, 2.5).log_magnitude() ==
        doctest::Approx(std::log(std::pow(3, 1) * std::pow(2, 0.5) * 5 *
                                 std::pow(2, 1.5))));
}

TEST_CASE("large-p f0 and f1") {
  CHECK(f0(10, 6, 2).to_double() == doctest::Approx(4));
  CHECK(f0(10, 6, 3).to_double() ==
        doctest::Approx(std::pow(4.0 / 3, 10) * std::pow(9.0 / 8, 3)));
  CHECK(f0(10, 6, 5).to_double() == doctest::Approx(std::pow(6.0, 5)));
  const double p = 0.3;
  CHECK(f1(10, 6, 5, p).to_double() ==
        doctest::Approx(std::pow(6.0, 5) * std::pow(4 * p / (1 - p), 5)));
  CHECK(f1(6, 6, 2, p).is_zero());
}

TEST_CASE("overlap bound report") {
  const auto rep = validate_overlap_bounds(3, 2);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.ok());
  const auto eq = validate_overlap_bounds(2, 2);
  CHECK(eq.rows[1].n_coinciding == 1);
  CHECK(eq.rows[1].bound1 == 1);
  CHECK_FALSE(eq.rows[1].bound2.has_value());
  CHECK(eq.ok());
  const auto full = validate_overlap_bounds(6, 4);
  CHECK(full.ok());
  CHECK(full.product.size() == 3 * 4);
}

TEST_CASE("trees extending a forest") {
  const std::vector<Edge> edge{{0, 1}};
  CHECK(count_trees_extending_forest(3, 2, edge) == 2);
  CHECK(count_trees_extending_forest(2, 2, edge) == 1);
  CHECK(count_trees_extending_forest(4, 2, {}) == 8);
  const std::vector<Edge> tri{{0, 1}, {0, 2}, {1, 2}};
  CHECK_THROWS(count_trees_extending_forest(5, 3, tri));
  CHECK_THROWS(count_trees_extending_forest(9, 2, edge));
}

TEST_CASE("extension counts stay below f") {
  for (std::size_t k = 2; k <= 7; ++k)
    for (std::size_t l = 1; l < k; ++l)
      for (const auto &row : extension_profile(k, l))
        CHECK(row.ok);
}
