#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace levybm {

// Identifies one replica's random stream. Replicas drawn from the same
// master_seed with distinct replica_index values get streams that are
// independent for Monte Carlo purposes, and the mapping is pure, so a replica
// can be regenerated in isolation (this is what makes the parallel sweep
// bitwise-equal to the serial one).
struct SamplerSeed {
  std::uint64_t master_seed = 1;
  std::uint64_t replica_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Stream splitting: hash the (master, replica) pair through two rounds of the
// splitmix64 finalizer. The result keys the engine for that replica.
inline std::uint64_t stream_key(SamplerSeed seed) {
  std::uint64_t s = seed.master_seed;
  std::uint64_t k = detail::splitmix64_step(s);
  s = k ^ (seed.replica_index + 0x9E3779B97F4A7C15ull);
  return detail::splitmix64_step(s);
}

// Per-replica random stream. Distribution transforms are done by hand from
// 53-bit uniforms so results depend only on the engine sequence, not on
// library-specific distribution internals.
class RngStream {
 public:
  explicit RngStream(SamplerSeed seed) : gen_(stream_key(seed)) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on (0, 1]; never returns 0, so log() is always safe.
  double uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Strictly positive: the interior uniform keeps log() away from both 0
  // and 1, so interarrival times never collide with an existing breakpoint.
  double exponential(double rate) {
    double u = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u) / rate;
  }

  // Standard normal, Box-Muller; the second variate of each pair is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Symmetric alpha-stable with unit scale, E exp(iuS) = exp(-|u|^alpha).
  // Chambers-Mallows-Stuck with beta = 0. At alpha = 2 this reduces to a
  // N(0,2) variate, which the explicit branch computes directly.
  double symmetric_stable(double alpha) {
    double v = std::numbers::pi * (uniform() - 0.5);  // angle in (-pi/2, pi/2]
    double w = exponential(1.0);
    if (alpha == 2.0) return 2.0 * std::sqrt(w) * std::sin(v);
    double t = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
    double s = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
    return t * s;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levybm
