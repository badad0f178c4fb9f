#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <string_view>

namespace erw {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 64-bit FNV-1a. Stable across platforms; used for purpose tags and config hashes.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based stream key for replica `index` of experiment coordinate `key`
/// under `tag`. Streams for distinct (seed, tag, key, index) are independent and
/// do not depend on how replicas are scheduled.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view tag,
                                      std::uint64_t key, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(master_seed ^ fnv1a(tag));
  h = mix64(h ^ mix64(key + 0x632be59bd9b4e019ULL));
  return mix64(h ^ mix64(index + 0x2545f4914f6cdd1dULL));
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t z = seed;
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      s = mix64(z);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer on [0, n) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Number of failures before the `successes`-th success in a fair-coin
  /// sequence, read off 64 coins per draw.
  std::uint64_t fair_failures(std::uint64_t successes) noexcept {
    std::uint64_t failures = 0;
    while (successes > 0) {
      std::uint64_t word = (*this)();
      const auto ones = static_cast<std::uint64_t>(std::popcount(word));
      if (ones < successes) {
        failures += 64 - ones;
        successes -= ones;
        continue;
      }
      for (std::uint64_t k = 1; k < successes; ++k) word &= word - 1;
      const auto position = static_cast<std::uint64_t>(std::countr_zero(word));
      failures += position + 1 - successes;
      successes = 0;
    }
    return failures;
  }

 private:
  std::uint64_t state_[4];
};

inline Rng replica_rng(std::uint64_t master_seed, std::string_view tag, std::uint64_t key,
                       std::uint64_t index) noexcept {
  return Rng(derive_stream(master_seed, tag, key, index));
}

}  // namespace erw
