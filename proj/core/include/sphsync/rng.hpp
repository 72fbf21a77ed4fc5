#pragma once

#include <cstdint>
#include <optional>

namespace sphsync {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Derives an independent child key from (key, tag). Used for per-trial and
/// per-purpose streams:
///   derive(key, tag) = mix(mix(key + gamma) ^ mix(tag * gamma + 0xD1B54A32D192ED03))
constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t tag) noexcept {
  return splitmix64_mix(splitmix64_mix(key + kGoldenGamma) ^
                        splitmix64_mix(tag * kGoldenGamma + 0xD1B54A32D192ED03ULL));
}

/// Counter-based generator: the i-th output of a stream with key k is
/// splitmix64_mix(k + (i + 1) * 0x9E3779B97F4A7C15). This is exactly the
/// SplitMix64 sequence seeded with k, so outputs are portable bit-for-bit.
///
/// All distribution transforms below are written out explicitly (no
/// std::*_distribution) so generated instances do not depend on the
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGoldenGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_open_closed() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> cached_normal_;
};

}  // namespace sphsync
