#ifndef NORMDERIV_RANDOM_HPP
#define NORMDERIV_RANDOM_HPP

#include <cstdint>

namespace normderiv {

/// SplitMix64 (Steele, Lea & Flood 2014). The integer stream and the doubles
/// derived from it below do not depend on the standard library, so seeded
/// reports replay bit-for-bit on any platform.
class splitmix64 {
public:
  using result_type = std::uint64_t;

  explicit splitmix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * unit(); }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Independent stream `k` derived from `seed`.
  static splitmix64 stream(std::uint64_t seed, std::uint64_t k) noexcept {
    splitmix64 g(seed ^ (0xD1B54A32D192ED03ULL * (k + 1)));
    g();
    return g;
  }

private:
  std::uint64_t state_;
};

}  // namespace normderiv

#endif
