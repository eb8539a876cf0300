#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace hme {

// Deterministic RNG used everywhere in the project. std::mt19937_64 is
// portable bit-for-bit, but the std distributions are not; the sampling
// helpers below are implemented by hand so that a (config, seed) pair
// reproduces byte-identical runs on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t u64() { return engine_(); }

  // Uniform integer in [0, n) by rejection sampling (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be > 0");
    const std::uint64_t rem = std::uint64_t(-n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= rem) return x % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double real01() { return double(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real01() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    if (v.empty()) throw std::invalid_argument("Rng::pick: empty vector");
    return v[below(v.size())];
  }

  // Derives an independent child stream; used to decouple e.g. evaluation
  // sampling from the episode stream.
  Rng child(std::uint64_t stream) { return Rng(mix(engine_(), stream)); }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the xored inputs
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hme
