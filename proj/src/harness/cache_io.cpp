#include "erw/harness/cache_io.hpp"

#include "erw/harness/csv.hpp"

#include <fstream>
#include <sstream>

namespace erw::harness {

namespace {

constexpr std::string_view kMagic = "ERWREGEN";
constexpr std::size_t kHeaderBytes = 8 + 4 + 8 * 4;

void put(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get(std::string_view in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_cache(const CacheHeader& header, std::span<const RegenSample> samples) {
  if (header.count != samples.size()) throw CacheError("encode_cache: header count does not match the batch");
  std::string out(kMagic);
  out.reserve(kHeaderBytes + 16 * samples.size());
  put(out, kCacheVersion, 4);
  put(out, header.env_hash, 8);
  put(out, header.seed, 8);
  put(out, header.cap, 8);
  put(out, header.count, 8);
  for (const auto& s : samples) {
    if (!s.censored && s.sigma == kCensoredSigma) throw CacheError("encode_cache: sigma collides with the censor marker");
    put(out, s.censored ? kCensoredSigma : s.sigma, 8);
    put(out, s.W, 8);
  }
  return out;
}

RegenCache decode_cache(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes) throw CacheError("cache: truncated header");
  if (bytes.substr(0, 8) != kMagic) throw CacheError("cache: bad magic");
  const auto version = get(bytes, 8, 4);
  if (version != kCacheVersion) throw CacheError("cache: unsupported version " + std::to_string(version));
  RegenCache c;
  c.header.env_hash = get(bytes, 12, 8);
  c.header.seed = get(bytes, 20, 8);
  c.header.cap = get(bytes, 28, 8);
  c.header.count = get(bytes, 36, 8);
  const auto body = bytes.size() - kHeaderBytes;
  if (body % 16 != 0 || body / 16 != c.header.count)
    throw CacheError("cache: payload size does not match count " + std::to_string(c.header.count));
  c.samples.resize(c.header.count);
  for (std::uint64_t i = 0; i < c.header.count; ++i) {
    const auto at = kHeaderBytes + 16 * i;
    auto& s = c.samples[i];
    const auto sigma = get(bytes, at, 8);
    s.censored = sigma == kCensoredSigma;
    s.sigma = sigma;
    s.W = get(bytes, at + 8, 8);
  }
  return c;
}

void write_cache(const std::filesystem::path& path, const CacheHeader& header,
                 std::span<const RegenSample> samples) {
  write_text(path, encode_cache(header, samples));
}

RegenCache read_cache(const std::filesystem::path& path, std::uint64_t expected_env_hash) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CacheError("cache: cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  auto c = decode_cache(ss.str());
  if (c.header.env_hash != expected_env_hash)
    throw CacheError("cache: " + path.string() + " was written for environment " + format_hash(c.header.env_hash) +
                     ", requested " + format_hash(expected_env_hash));
  return c;
}

}  // namespace erw::harness
