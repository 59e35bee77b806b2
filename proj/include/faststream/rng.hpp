#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace faststream {

// std::mt19937_64 has a standard-mandated output sequence, but the standard
// distributions and std::shuffle do not. Everything seeded in this project
// goes through the helpers below so results match across toolchains.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for the i-th independent child stream of `seed`.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t i) {
  return splitmix64(seed ^ splitmix64(i));
}

// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Fisher-Yates over the whole span.
template <typename T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

// Moves a uniform sample of `k` elements, without replacement, to the front.
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t k, Rng& rng) {
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < k && i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace faststream
