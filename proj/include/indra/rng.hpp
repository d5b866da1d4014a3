#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace indra {

// SplitMix64 finalizer (Vigna). Statistically solid for sampling and noise,
// not cryptographic.
constexpr std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 run in counter mode: draw i of a stream is a pure function of
// (seed, i). Draws can therefore be generated in any order, from any thread,
// with identical results — this is the determinism contract every stochastic
// component relies on.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Independent child stream for a named purpose (see streams:: tags).
  constexpr CounterRng stream(std::uint64_t tag) const {
    return CounterRng(fmix64(seed_ + kGoldenGamma * (tag + 1)) ^ tag);
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return fmix64(seed_ + kGoldenGamma * (counter + 1));
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes counters 2i and 2i+1.
  double gaussian(std::uint64_t counter) const {
    const double u1 = uniform_pos(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, range) by 128-bit multiply-shift. The modulo bias
  // is below 2^-64 per draw and irrelevant for sampling; what matters is that
  // the map is fixed, so ports reproduce it bit-for-bit.
  std::uint64_t bounded(std::uint64_t counter, std::uint64_t range) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(counter)) * range) >> 64);
  }

  constexpr std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Stream tags. Kept in one place so a single master seed never feeds two
// consumers the same draws.
namespace streams {
inline constexpr std::uint64_t kNoise = 1;
inline constexpr std::uint64_t kAnchors = 2;
inline constexpr std::uint64_t kSynthData = 3;
inline constexpr std::uint64_t kSynthNoise = 4;
inline constexpr std::uint64_t kOrthogonal = 5;
inline constexpr std::uint64_t kSplit = 6;
inline constexpr std::uint64_t kLatent = 7;
}  // namespace streams

// Partial Fisher-Yates; returns k distinct indices from [0,n), ascending.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                           std::size_t k,
                                                           const CounterRng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.bounded(i, n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

// In-place Fisher-Yates shuffle driven by the counter stream.
template <class T>
void counter_shuffle(std::vector<T>& v, const CounterRng& rng) {
  if (v.empty()) return;
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i, i + 1));
    std::swap(v[i], v[j]);
  }
}

}  // namespace indra
