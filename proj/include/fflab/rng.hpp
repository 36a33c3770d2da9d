#pragma once

#include <cstdint>
#include <random>

namespace fflab {

// All randomness in the library flows through this wrapper. mt19937_64 output
// is pinned bit-for-bit by the standard; the bounded draw below uses explicit
// rejection sampling because std::uniform_int_distribution is not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform draw from [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v = eng_();
    while (v > limit) v = eng_();
    return v % n;
  }

  bool coin() { return (eng_() & 1) != 0; }

  // Stable per-stream seed derivation (splitmix64 finalizer over seed^stream).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fflab
