#include "erw/harness/config.hpp"

#include "erw/rng.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace erw::harness {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("not an unsigned integer: '" + std::string(text) + "'");
  return v;
}

double parse_real(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_real_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ConfigError("unterminated list: '" + std::string(text) + "'");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<double> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_real(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Config Config::parse(std::string_view text) {
  Config cfg;
  cfg.text_ = std::string(text);
  cfg.hash_ = fnv1a(text);
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in(cfg.text_);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail_at(line_no, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_at(line_no, "expected key = value");
    if (section.empty()) fail_at(line_no, "key outside of any section");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(line_no, "empty key");
    cfg.sections_[section].emplace_back(std::string(key), std::string(value));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool Config::has(std::string_view section, std::string_view key) const { return find(section, key).has_value(); }

std::optional<std::string> Config::find(std::string_view section, std::string_view key) const {
  const auto it = sections_.find(std::string(section));
  if (it == sections_.end()) return std::nullopt;
  std::optional<std::string> v;
  for (const auto& [k, val] : it->second)
    if (k == key) v = val;
  return v;
}

std::vector<std::string> Config::all(std::string_view section, std::string_view key) const {
  std::vector<std::string> out;
  const auto it = sections_.find(std::string(section));
  if (it == sections_.end()) return out;
  for (const auto& [k, val] : it->second)
    if (k == key) out.push_back(val);
  return out;
}

std::string Config::get_string(std::string_view section, std::string_view key, std::string fallback) const {
  return find(section, key).value_or(std::move(fallback));
}

std::uint64_t Config::get_u64(std::string_view section, std::string_view key, std::uint64_t fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  try {
    return parse_u64(*v);
  } catch (const ConfigError& e) {
    throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": " + e.what());
  }
}

double Config::get_double(std::string_view section, std::string_view key, double fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  try {
    return parse_real(*v);
  } catch (const ConfigError& e) {
    throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": " + e.what());
  }
}

bool Config::get_bool(std::string_view section, std::string_view key, bool fallback) const {
  const auto v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": expected true or false");
}

std::vector<double> Config::get_doubles(std::string_view section, std::string_view key) const {
  const auto v = find(section, key);
  if (!v) return {};
  return parse_real_list(*v);
}

CookieEnvironmentSpec Config::environment() const {
  constexpr std::string_view kEnv = "environment";
  if (!sections_.contains(std::string(kEnv))) throw ConfigError("missing [environment] section");
  const auto law = get_string(kEnv, "law", "deterministic");
  const auto M = get_u64(kEnv, "M", 0);
  try {
    if (law == "deterministic" || law == "degenerate") {
      const auto cookies = get_doubles(kEnv, "cookies");
      if (cookies.empty()) throw ConfigError("[environment] cookies = [...] is required");
      if (M != 0 && cookies.size() != M) throw ConfigError("[environment] M does not match the cookie count");
      if (law == "degenerate") return CookieEnvironmentSpec::degenerate(CookieVector(cookies));
      return CookieEnvironmentSpec::deterministic(CookieVector(cookies));
    }
    if (law == "mixture") {
      // component = weight : [c1, ..., cM]
      std::vector<MixtureComponent> comps;
      for (const auto& entry : all(kEnv, "component")) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw ConfigError("[environment] component needs 'weight : [cookies]'");
        MixtureComponent c;
        c.weight = parse_real(std::string_view(entry).substr(0, colon));
        c.cookies = CookieVector(parse_real_list(std::string_view(entry).substr(colon + 1)));
        if (M != 0 && c.cookies.size() != M) throw ConfigError("[environment] M does not match a component");
        comps.push_back(std::move(c));
      }
      if (comps.empty()) throw ConfigError("[environment] mixture law needs component lines");
      return CookieEnvironmentSpec::mixture(std::move(comps));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[environment] ") + e.what());
  }
  throw ConfigError("[environment] unknown law '" + law + "'");
}

std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name); v && *v) return std::string(v);
  return std::nullopt;
}

RunSettings resolve_settings(const Config& cfg, const CliOverrides& cli,
                             const std::function<std::optional<std::string>(const char*)>& getenv) {
  auto pick = [&](const std::optional<std::string>& flag, const char* env, std::string_view key) {
    if (flag) return flag;
    if (auto v = getenv(env)) return v;
    return cfg.find("run", key);
  };
  RunSettings s;
  if (auto v = pick(cli.seed, "ERW_SEED", "seed")) s.seed = parse_u64(*v);
  if (auto v = pick(cli.workers, "ERW_WORKERS", "workers")) {
    const auto w = parse_u64(*v);
    if (w == 0 || w > 1024) throw ConfigError("workers must be in 1..1024");
    s.workers = static_cast<unsigned>(w);
  }
  if (auto v = pick(cli.out, "ERW_OUT", "out")) s.out = *v;
  if (auto v = pick(cli.format, "ERW_FORMAT", "format")) s.format = *v;
  if (s.format != "csv" && s.format != "plot") throw ConfigError("format must be csv or plot");
  return s;
}

}  // namespace erw::harness
