#include <doctest.h>

#include <cmath>
#include <set>

#include "itree/rng.hpp"

using namespace itree;

TEST_CASE("philox known-answer vectors") {
  // Reference outputs of Philox4x32-10 from the Random123 distribution.
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c,
                                     0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                   {0xffffffff, 0xffffffff}) ==
        std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6,
                                     0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                   {0xa4093822, 0x299f31d0}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420,
                                     0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(Seed{42, 7}), b(Seed{42, 7}), c(Seed{42, 8}), d(Seed{43, 7});
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
    seen.insert(d());
  }
  CHECK(seen.size() == 300);
}

TEST_CASE("uniform lies in [0,1) and has mean one half") {
  PhiloxStream s(Seed{1, 0});
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 standard errors of a U(0,1) mean
  CHECK(std::abs(sum / n - 0.5) < 3 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("below is unbiased and in range") {
  PhiloxStream s(Seed{9, 3});
  std::array<int, 7> hist{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = s.below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int c : hist)
    CHECK(std::abs(c - n / 7.0) < 4 * std::sqrt(n * (1.0 / 7) * (6.0 / 7)));
  CHECK(s.below(1) == 0);
  CHECK_THROWS(s.below(0));
}
