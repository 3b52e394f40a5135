// Counter-based pseudo-random generator used by every sampling routine.
//
// SplitMix64: the k-th output is mix(seed + k * golden_gamma), so the stream
// is a pure function of (seed, k) and identical across platforms.  Gaussian
// variates come from a plain Box-Muller transform on top of it.  Keeping the
// generator self-contained makes seeded datasets byte-reproducible, which the
// golden tests rely on; std::normal_distribution is implementation-defined.
#pragma once

#include <cmath>
#include <cstdint>

namespace fsc {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never returns 0 so it is safe under log().
  double uniform() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Derives an independent stream, e.g. one per subspace or per trial.
  std::uint64_t fork() { return next(); }

 private:
  std::uint64_t state_;
};

}  // namespace fsc
