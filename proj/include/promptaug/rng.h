#ifndef PROMPTAUG_RNG_H_
#define PROMPTAUG_RNG_H_

#include <cstdint>
#include <random>

namespace promptaug {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed (per slice, per sample).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

// Seeded generator with platform-stable output. The engine is mt19937_64,
// whose sequence is fixed by the standard; the conversions below avoid the
// implementation-defined std::*_distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive. Rejection keeps it unbiased.
  long long uniform_int(long long lo, long long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<long long>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace promptaug

#endif  // PROMPTAUG_RNG_H_
