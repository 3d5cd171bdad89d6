#pragma once

#include <cmath>
#include <cstdint>

namespace pseudoexp {

// Counter-seeded 64-bit generator (splitmix64). Every stochastic operation in
// the library takes one of these explicitly, so runs are replayable from a
// single seed. Not shareable across threads; use one instance per chain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never 0 or 1, so log(u) is safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via the Marsaglia polar method. The spare deviate is
  // discarded to keep the draw sequence a pure function of the call count.
  double normal() {
    for (;;) {
      const double a = 2.0 * uniform() - 1.0;
      const double b = 2.0 * uniform() - 1.0;
      const double r2 = a * a + b * b;
      if (r2 > 0.0 && r2 < 1.0) {
        return a * std::sqrt(-2.0 * std::log(r2) / r2);
      }
    }
  }

  // Derive the seed of an independent stream from a master seed and a tag.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng mix(seed);
    std::uint64_t h = mix.next_u64() ^ (stream + 0x9e3779b97f4a7c15ull);
    Rng mix2(h);
    return mix2.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace pseudoexp
