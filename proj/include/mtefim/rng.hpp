#pragma once

// Deterministic random number utilities.
//
// All stochastic components of the library draw from std::mt19937_64, whose
// output sequence is fully specified by the C++ standard, through the helpers
// below (which avoid std::uniform_*_distribution, whose mapping from raw bits
// to values is implementation-defined).  Given the same seed, every platform
// and standard library produces the same stream, which is what makes runs
// replayable byte for byte.
//
// Independent streams are derived from a single base seed with a splitmix64
// style bit mixer, so sub-streams (per population, per replica, ...) never
// overlap by construction and adding a consumer of one stream cannot shift
// the draws seen by another.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace mtefim {

using rng_t = std::mt19937_64;

// splitmix64 finalizer: bijective 64-bit mixer with good avalanche behaviour.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives the seed of an independent sub-stream from (base, tag, index).
// `tag` names the purpose of the stream, `index` enumerates parallel
// instances (population id, replica id, ...).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                    std::uint64_t index = 0) noexcept {
  return mix64(base ^ mix64(tag ^ mix64(index)));
}

inline rng_t make_rng(std::uint64_t base, std::uint64_t tag,
                      std::uint64_t index = 0) {
  return rng_t(derive_seed(base, tag, index));
}

// Stream tags used across the library.  Kept in one place so it is easy to
// audit that two consumers never share a stream.
namespace stream {
inline constexpr std::uint64_t init = 0x696e6974;      // population init
inline constexpr std::uint64_t variation = 0x76617279; // crossover + mutation
inline constexpr std::uint64_t transfer = 0x78666572;  // knowledge transfer
inline constexpr std::uint64_t replica = 0x6d63726570; // Monte Carlo replicas
inline constexpr std::uint64_t cell = 0x63656c6c;      // experiment cells
inline constexpr std::uint64_t score = 0x73636f7265;   // experiment scoring
} // namespace stream

// Uniform double in [0, 1) with 53-bit resolution.
inline double rand_u01(rng_t& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).  Rejection sampling keeps the mapping exact and
// portable.  n must be positive.
inline std::uint64_t rand_index(rng_t& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("rand_index: n must be positive");
  const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return x % n;
}

// In-place Fisher-Yates shuffle driven by rand_index (std::shuffle's draw
// sequence is implementation-defined, so we roll our own).
template <typename T>
void shuffle_vec(std::vector<T>& v, rng_t& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rand_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Draws m distinct positions from [0, n) (uniform over subsets, order given
// by the partial Fisher-Yates walk).  m must not exceed n.
inline std::vector<std::int32_t> sample_distinct_positions(rng_t& rng,
                                                           std::int32_t n,
                                                           std::int32_t m) {
  if (m < 0 || n < 0 || m > n)
    throw std::invalid_argument("sample_distinct_positions: need 0 <= m <= n");
  std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (std::int32_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::int32_t>(
                           rand_index(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  return pool;
}

} // namespace mtefim
