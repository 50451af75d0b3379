#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace discrank {

// 64-bit FNV-1a. Stable across platforms and processes, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

// Deterministic random source. Every draw is derived from the mt19937_64
// stream with explicit arithmetic, so sequences do not depend on standard
// library distribution internals and are reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // Uniform in [0, bound); bound must be positive. Rejection sampling keeps
  // the draw unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform integer in [lo, hi], inclusive on both ends.
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [0, 1) with 53 random bits.
  double real() { return (eng_() >> 11) * (1.0 / 9007199254740992.0); }

  // Box-Muller, cosine branch only so one draw consumes exactly two engine
  // steps.
  double normal(double mean = 0.0, double stddev = 1.0) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - real();  // (0, 1], keeps log finite
    const double u2 = real();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace discrank
