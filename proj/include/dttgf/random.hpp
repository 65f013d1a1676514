#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace dttgf {

// mt19937_64 has a fully specified output sequence, so runs reproduce across
// platforms as long as we avoid the implementation-defined std distributions.
using Rng = std::mt19937_64;

enum class Purpose : std::uint64_t {
  generation = 1,
  subsolver = 2,
  sampling_decoder = 3,
  warmup = 4,
  mcts = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// A named, splittable seed. Children are derived by hashing, so a child's
/// sequence never depends on how many draws were taken from its parent.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : seed_(seed) {}

  static Stream for_purpose(std::uint64_t base_seed, Purpose purpose) noexcept {
    return Stream(splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(purpose))));
  }

  Stream child(std::uint64_t index) const noexcept {
    return Stream(splitmix64(seed_ + splitmix64(index + 0x5851F42D4C957F2DULL)));
  }

  Rng engine() const { return Rng(seed_); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

}  // namespace dttgf
