#pragma once

#include "erw/branching_sim.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace erw::harness {

struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary regeneration-cycle cache. Layout (little-endian):
///   "ERWREGEN" | u32 version | u64 env hash | u64 seed | u64 cap | u64 count
///   | count x (u64 sigma, u64 W)
/// A censored cycle stores sigma = UINT64_MAX and its partial W.
inline constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  std::uint64_t env_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;
  std::uint64_t count = 0;
};

struct RegenCache {
  CacheHeader header;
  std::vector<RegenSample> samples;
};

std::string encode_cache(const CacheHeader& header, std::span<const RegenSample> samples);
/// Validates the whole buffer before decoding anything.
RegenCache decode_cache(std::string_view bytes);

void write_cache(const std::filesystem::path& path, const CacheHeader& header,
                 std::span<const RegenSample> samples);
/// Refuses (CacheError) a file whose env hash differs from `expected_env_hash`.
RegenCache read_cache(const std::filesystem::path& path, std::uint64_t expected_env_hash);

}  // namespace erw::harness
