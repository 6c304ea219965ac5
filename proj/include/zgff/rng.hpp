#ifndef ZGFF_RNG_HPP
#define ZGFF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace zgff {

/// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double toUnit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Derives an independent seed for sub-stream `index` of `seed`.
constexpr std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ 0x5bd1e9955bd1e995ULL) + mix64(index + 0x2545f4914f6cdd1dULL));
}

/// Counter-based generator: the output is a pure function of
/// (seed, a, b, c). Chains use (sweep, site, purpose) as the counter, so
/// replays and parallel runs do not depend on scheduling.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) const noexcept {
    std::uint64_t x = mix64(key_ + a * 0x9e3779b97f4a7c15ULL);
    x = mix64(x ^ (b * 0xc2b2ae3d27d4eb4fULL));
    return mix64(x + c * 0x165667b19e3779f9ULL);
  }

  /// Uniform on [0, 1).
  constexpr double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) const noexcept {
    return toUnit(bits(a, b, c));
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

/// Sequential SplitMix64 stream. Satisfies UniformRandomBitGenerator, and
/// carries its own normal sampler so that streams are reproducible across
/// standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return toUnit((*this)()); }

  /// Uniform on (0, 1), never returning 0.
  double uniformOpen() noexcept {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Standard normal via Box-Muller, caching the second variate.
  double normal() noexcept {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    const double u1 = uniformOpen();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    hasSpare_ = true;
    return r * std::cos(t);
  }

  /// Uniform integer on [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace zgff

#endif  // ZGFF_RNG_HPP
