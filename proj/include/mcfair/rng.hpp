#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

// Random streams used across the toolkit.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than taken from
// <random> because the standard library distributions are not portable across
// implementations.
//
// Stream splitting: the stream for row r under seed s is an mt19937_64 seeded
// with derive(s, r), where derive mixes both words through the SplitMix64
// finalizer. Row streams are therefore independent of evaluation order.
namespace mcfair::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix(seed ^ mix(stream));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

inline Engine row_engine(std::uint64_t seed, std::uint64_t row) {
  return Engine(derive(seed, row));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n > 0.
inline std::size_t uniform_index(Engine& eng, std::size_t n) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t draw;
  do {
    draw = eng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % range);
}

/// Index drawn from a discrete distribution by inverse CDF in index order.
/// Falls back to the last index with positive weight when rounding leaves u
/// above the accumulated total.
template <class Weights>
std::size_t sample_index(Engine& eng, const Weights& weights, std::size_t n) {
  const double u = uniform01(eng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights(i);
    if (w <= 0.0) continue;
    last_positive = i;
    acc += w;
    if (u < acc) return i;
  }
  return last_positive;
}

template <class T>
void shuffle(std::vector<T>& values, Engine& eng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_index(eng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace mcfair::rng
