#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

// Deterministic RNG layer. Standard-library distributions are implementation
// defined, so everything that touches sampled numbers goes through these
// fixed algorithms: splitmix64 for seeding/stream derivation, xoshiro256**
// for the stream itself, Knuth / PTRS (Hormann) for Poisson draws.
namespace nvmet::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// One splitmix64 step on a value (stateless mix). The increment keeps the
// fixed point at 0 out of the map.
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from a base seed and an index path,
// e.g. derive(seed, {scenario, chain, point, block}). Order-sensitive.
inline std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed + kGolden);
  for (std::uint64_t idx : path) s = mix64(s ^ (idx + kGolden));
  return s;
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) {
      sm += kGolden;
      w = mix64(sm);
    }
    // avoid the all-zero state (cannot happen via mix64 of distinct inputs in
    // practice, but cheap to guard)
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (fixed draw order)
  double gauss() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

// Poisson sampling. Knuth's product method below the cutover, Hormann's PTRS
// transformed rejection above it; both consume only uniform() draws.
std::uint64_t poisson(Xoshiro256ss& gen, double lambda);

}  // namespace nvmet::rng
