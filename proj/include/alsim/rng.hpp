#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace alsim {

// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed for a (role, a, b) sub-stream of a master seed. Every
// random stream in a run is addressed this way, so runs replay exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ role);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return s;
}

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is pinned by the standard; the distributions below are spelled
// out here so results do not depend on the standard-library vendor. libm
// (sqrt/log/cos) is the accepted reproducibility boundary.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be >= 1.
  std::uint64_t uniform_int(std::uint64_t n) {
    std::uint64_t v = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  // Box-Muller transform; one draw consumes two engine outputs.
  double gaussian(double mean, double stddev) {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(kTwoPi * u2);
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 gen_;
};

}  // namespace alsim
