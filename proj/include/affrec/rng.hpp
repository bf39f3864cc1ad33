#pragma once

// Deterministic splittable random streams.
//
// Every Monte Carlo task derives its own stream from (master_seed, index)
// via splitmix64, so results are reproducible bit-for-bit and independent
// of how tasks are scheduled across workers.

#include <cmath>
#include <cstdint>
#include <random>

namespace affrec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream derivation: seed_i = splitmix64(splitmix64(master) ^ splitmix64(master + i + 1)).
// Two rounds decorrelate adjacent indices and adjacent master seeds.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s0 = master;
  std::uint64_t a = splitmix64(s0);
  std::uint64_t s1 = master + index + 1;
  std::uint64_t b = splitmix64(s1);
  std::uint64_t c = a ^ b;
  return splitmix64(c);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream substream(std::uint64_t master, std::uint64_t index) {
    return RngStream(derive_stream_seed(master, index));
  }

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller with an explicitly managed spare value, so the draw sequence
  // does not depend on the standard library's distribution internals.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // uniform on {0, ..., n-1}, n >= 1 (Lemire rejection)
  std::uint64_t uniform_index(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(gen_()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<__uint128_t>(gen_()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // P(X > x) = x^{-index} for x >= 1
  double pareto(double index) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::pow(u, -1.0 / index);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace affrec
