#ifndef TWRAOI_RNG_HPP_
#define TWRAOI_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace twraoi {

// Derives an independent stream seed from (seed, stream) with the splitmix64
// finalizer. Used to give every Monte Carlo block, sweep point, and worker its
// own stream so results do not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic RNG: mt19937_64 (fully specified by the standard) plus
// explicit bit mappings, so a fixed seed gives bit-identical doubles on any
// conforming platform. std::uniform_real_distribution is implementation
// defined and deliberately not used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]; 53-bit resolution. The open lower end keeps log() safe.
  double uniform_oc() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_co(); }

  // Exp(1) by inverse CDF.
  double exponential() { return -std::log(uniform_oc()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twraoi

#endif  // TWRAOI_RNG_HPP_
