#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace sizeramsey {

// Seeding contract
// ----------------
// Every stochastic operation takes one 64-bit seed. Child seeds are derived
// with derive_seed(parent, {c0, c1, ...}): the parent is mixed, then each
// counter is folded in with one splitmix64 finaliser step. Counters used by
// the library are small integers or the ASCII tags below, so a (seed, path)
// pair names one stream forever and adding streams never perturbs old ones.
//
// Random streams are std::mt19937_64 (bit-exact across standard libraries);
// all distributions are implemented here because the std:: distributions
// are implementation-defined.

namespace tag {
inline constexpr std::uint64_t host = 0x686f7374;       // "host"
inline constexpr std::uint64_t pattern = 0x70617474;    // "patt"
inline constexpr std::uint64_t coloring = 0x636f6c72;   // "colr"
inline constexpr std::uint64_t partition = 0x70617274;  // "part"
inline constexpr std::uint64_t buckets = 0x62756b74;    // "bukt"
inline constexpr std::uint64_t probe = 0x70726f62;      // "prob"
inline constexpr std::uint64_t trial = 0x7472696c;      // "tril"
}  // namespace tag

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                           std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = mix64(parent ^ 0x5851f42d4c957f2dULL);
  for (const std::uint64_t c : counters) h = mix64(h ^ mix64(c));
  return h;
}

/// Seeded random stream with portable distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound); bound > 0. Rejection sampling on the top
  /// of the range keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do { x = engine_(); } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) { shuffle(std::span<T>(items)); }

  /// k distinct elements of `pool`, in random order (partial Fisher-Yates).
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sizeramsey
