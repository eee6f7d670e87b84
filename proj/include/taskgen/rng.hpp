#pragma once

#include <cstdint>
#include <random>

namespace taskgen {

inline uint64_t split_mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic RNG. All value mappings are written out explicitly so the
/// produced sequences are identical across standard libraries and platforms
/// (std::uniform_*_distribution is implementation-defined and avoided).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(split_mix64(seed)) {}

  uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1) with 53 bits of entropy.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n), exact via rejection.
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// Derives an independent sub-stream; deterministic in (seed, stream).
  Rng fork(uint64_t stream) const {
    return Rng(split_mix64(seed_ ^ split_mix64(stream ^ 0xa5a5a5a5a5a5a5a5ULL)));
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace taskgen
