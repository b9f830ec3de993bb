#pragma once

#include <cmath>
#include <cstdint>

namespace rcr {

/// SplitMix64: splittable 64-bit generator (Steele, Lea & Vigna).
/// One multiply-xorshift pass per word; trivially seedable and fast enough
/// that nearby seeds (e.g. seed^rep) produce decorrelated streams.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

/// Seeded stream of uniforms and standard normals. All randomness in the
/// project flows through explicitly passed Rng instances; there is no
/// global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw in (0, 1]; never exactly 0 so log(u) is safe.
  double uniform() { return static_cast<double>((gen_.next() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for replication `rep` of a run with master seed `base`.
inline std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep) {
  return base ^ rep;
}

}  // namespace rcr
