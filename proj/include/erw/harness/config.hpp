#pragma once

#include "erw/cookie_env.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace erw::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sectioned `key = value` text. See docs/config.md for the grammar.
/// Keys may repeat (mixture components); get() returns the last occurrence.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// The verbatim text the config was parsed from, and its FNV-1a hash.
  const std::string& text() const noexcept { return text_; }
  std::uint64_t hash() const noexcept { return hash_; }

  bool has(std::string_view section, std::string_view key) const;
  std::optional<std::string> find(std::string_view section, std::string_view key) const;
  std::vector<std::string> all(std::string_view section, std::string_view key) const;

  std::string get_string(std::string_view section, std::string_view key, std::string fallback) const;
  std::uint64_t get_u64(std::string_view section, std::string_view key, std::uint64_t fallback) const;
  double get_double(std::string_view section, std::string_view key, double fallback) const;
  bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
  std::vector<double> get_doubles(std::string_view section, std::string_view key) const;

  /// The cookie environment described by [environment].
  CookieEnvironmentSpec environment() const;

 private:
  std::string text_;
  std::uint64_t hash_ = 0;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

/// Parses "[a, b, c]" (brackets optional) into reals.
std::vector<double> parse_real_list(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
double parse_real(std::string_view text);

struct RunSettings {
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
  std::filesystem::path out = "out";
  std::string format = "csv";  // csv | plot
};

/// Values given on the command line; empty when the flag was absent.
struct CliOverrides {
  std::optional<std::string> seed;
  std::optional<std::string> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

/// Resolves [run] settings with precedence flag > environment variable
/// (ERW_SEED, ERW_WORKERS, ERW_OUT, ERW_FORMAT) > config file > default.
RunSettings resolve_settings(const Config& cfg, const CliOverrides& cli,
                             const std::function<std::optional<std::string>(const char*)>& getenv);

/// std::getenv wrapped for resolve_settings.
std::optional<std::string> process_env(const char* name);

}  // namespace erw::harness
