#ifndef ITREE_RNG_HPP
#define ITREE_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace itree {

/// Master seed plus a per-trial stream index. Each (master, stream) pair
/// addresses its own Philox counter space, so streams never overlap.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const Seed &, const Seed &) = default;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. Key = master seed, counter = (block, stream).
/// Satisfies UniformRandomBitGenerator; all derived draws are implemented
/// here so results do not depend on the standard library's distributions.
class PhiloxStream {
public:
  using result_type = std::uint64_t;

  explicit PhiloxStream(Seed seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  Seed seed() const { return seed_; }
  std::uint64_t blocks_used() const { return block_; }

private:
  void refill();

  Seed seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

} // namespace itree

#endif // ITREE_RNG_HPP
