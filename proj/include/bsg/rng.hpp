#ifndef BSG_RNG_HPP
#define BSG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace bsg {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent per-stream seeds from one base seed. Streams: benchmark trial
// indices, and within gen: 0 = graph topology, 1 = GMRF samples.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(0x9E3779B97F4A7C15ULL * (stream + 1)));
}

/// Seeded generator with a platform-independent stream. std::mt19937_64
/// output is fixed by the standard, but std distributions are not, so all
/// mappings from raw bits to values are done here.
///
/// Draw costs (for stream-layout reproducibility): u01/uniform/sign = 1 raw
/// draw, normal = 2 raw draws, below(n) = 1 draw plus rejections.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // uniform on [0, 1) with 53-bit resolution
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // +1 or -1 with equal probability (top bit of one draw)
  int sign() { return (gen_() >> 63) ? -1 : 1; }

  // unbiased integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // standard normal via Box-Muller, exactly two draws per call
  double normal() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bsg

#endif
