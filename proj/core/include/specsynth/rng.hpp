#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace specsynth {

// Deterministic random source. All stochastic behaviour in the library flows
// through instances of this class so that a run is reproducible from a single
// seed, across platforms (mt19937_64 output is standardized; doubles are
// derived from raw 64-bit draws, not from distribution objects).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Named sub-stream: decorrelates e.g. environment noise from exploration
  // draws while keeping everything derived from one master seed.
  static Rng substream(std::uint64_t master_seed, std::string_view name) {
    return Rng(splitmix64(master_seed ^ fnv1a64(name)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}. Modulo bias is negligible for the small n used
  // here (action counts, lasso lengths).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace specsynth
