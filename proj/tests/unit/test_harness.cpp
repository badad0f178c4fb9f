#include "erw/harness/cache_io.hpp"
#include "erw/harness/config.hpp"
#include "erw/harness/csv.hpp"
#include "erw/harness/run.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace erw;
using namespace erw::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("erw-harness-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs one subcommand quietly and returns its exit code.
int run_quiet(const std::string& sub, const Config& cfg, const RunSettings& s, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run(sub, cfg, s, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

auto no_env = [](const char*) -> std::optional<std::string> { return std::nullopt; };

constexpr const char* kSmall = R"(# small E2 run
[environment]
M = 5
cookies = [0.75, 0.75, 0.75, 0.75, 0.75]

[walk]
n = [100, 400]
reps = 500

[regen]
count = 2000
cap = 10000
mirror = true
mirror_cap = 64

[rate]
cache = regen.bin
mirror_cache = regen_mirror.bin
x_steps = 40
)";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing") {
  const auto cfg = Config::parse(kSmall);
  CHECK(cfg.get_u64("walk", "reps", 0) == 500);
  CHECK(cfg.get_doubles("walk", "n") == std::vector<double>{100, 400});
  CHECK(cfg.get_bool("regen", "mirror", false));
  CHECK(cfg.get_string("rate", "cache", "") == "regen.bin");
  CHECK(cfg.get_u64("walk", "missing", 7) == 7);
  CHECK_FALSE(cfg.has("nosuch", "key"));
  const auto spec = cfg.environment();
  CHECK(spec.cookies_per_site() == 5);
  CHECK(spec.hash() == CookieEnvironmentSpec::uniform(5, 0.75).hash());
  // The hash is of the verbatim text, comments included.
  CHECK(cfg.hash() != Config::parse(std::string(kSmall) + "# trailing\n").hash());
  CHECK(cfg.hash() == Config::parse(kSmall).hash());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(Config::parse("key = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[run\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[run]\njust words\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[walk]\nreps = many\n").get_u64("walk", "reps", 0), ConfigError);
  CHECK_THROWS_AS(Config::parse("[walk]\nflag = maybe\n").get_bool("walk", "flag", false), ConfigError);
  CHECK_THROWS_AS(Config::parse("[run]\n").environment(), ConfigError);
  CHECK_THROWS_AS(Config::parse("[environment]\nlaw = weird\ncookies=[0.5]\n").environment(), ConfigError);
  CHECK_THROWS_AS(Config::parse("[environment]\nM = 2\ncookies = [0.5]\n").environment(), ConfigError);
  // Mixture weights must sum to one.
  const auto bad = Config::load(fs::path(ERW_CONFIG_DIR) / ".." / "tests" / "data" / "bad.conf");
  CHECK_THROWS_AS(bad.environment(), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/erw.conf"), ConfigError);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"e1.conf", "e2.conf", "e3.conf", "mixture.conf"}) {
    CAPTURE(name);
    const auto cfg = Config::load(fs::path(ERW_CONFIG_DIR) / name);
    CHECK_NOTHROW(cfg.environment());
  }
}

TEST_CASE("settings precedence: flag over environment over file") {
  const auto cfg = Config::parse("[run]\nseed = 5\nworkers = 2\nout = fromfile\n");
  std::map<std::string, std::string> env{{"ERW_SEED", "6"}, {"ERW_OUT", "fromenv"}};
  auto getenv = [&](const char* k) -> std::optional<std::string> {
    if (auto it = env.find(k); it != env.end()) return it->second;
    return std::nullopt;
  };
  CliOverrides cli;
  auto s = resolve_settings(cfg, cli, no_env);
  CHECK(s.seed == 5);
  CHECK(s.workers == 2);
  CHECK(s.out == "fromfile");
  CHECK(s.format == "csv");
  s = resolve_settings(cfg, cli, getenv);
  CHECK(s.seed == 6);
  CHECK(s.out == "fromenv");
  cli.seed = "7";
  cli.format = "plot";
  s = resolve_settings(cfg, cli, getenv);
  CHECK(s.seed == 7);
  CHECK(s.format == "plot");
  CHECK(s.workers == 2);

  CHECK(resolve_settings(Config::parse(""), {}, no_env).seed == RunSettings{}.seed);
  cli = {};
  cli.workers = "0";
  CHECK_THROWS_AS(resolve_settings(cfg, cli, no_env), ConfigError);
  cli.workers = "1025";
  CHECK_THROWS_AS(resolve_settings(cfg, cli, no_env), ConfigError);
  cli = {};
  cli.format = "json";
  CHECK_THROWS_AS(resolve_settings(cfg, cli, no_env), ConfigError);
}

TEST_CASE("csv formatting") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1e-300) == "1e-300");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_hash(0xabc) == "0000000000000abc");

  CsvTable t(0x1234, {"n", "value", "label"});
  t.row() << std::uint64_t{3} << 0.25 << "a,b";
  t.row() << -2 << 1.0 << "plain";
  CHECK(t.str() ==
        "config_hash,n,value,label\n"
        "0000000000001234,3,0.25,\"a,b\"\n"
        "0000000000001234,-2,1,plain\n");
  CHECK(t.plot("n", "value") == "# config_hash 0000000000001234\n# n value\n3 0.25\n-2 1\n");
  t.row() << 1;
  CHECK_THROWS(t.str());
}

TEST_CASE("cache round trip and refusals") {
  const auto spec = CookieEnvironmentSpec::uniform(5, 0.75);
  // Tiny cap so some cycles are censored.
  const auto samples = sample_regenerations(spec, 1000, 2, {31, 1});
  CacheHeader h{spec.hash(), 31, 2, samples.size()};
  const auto dir = scratch("cache");
  write_cache(dir / "c.bin", h, samples);
  const auto back = read_cache(dir / "c.bin", spec.hash());
  CHECK(back.header.seed == 31);
  CHECK(back.header.cap == 2);
  REQUIRE(back.samples.size() == samples.size());
  std::size_t censored = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back.samples[i].sigma == samples[i].sigma);
    CHECK(back.samples[i].W == samples[i].W);
    CHECK(back.samples[i].censored == samples[i].censored);
    censored += samples[i].censored;
  }
  CHECK(censored > 0);
  CHECK(encode_cache(back.header, back.samples) == slurp(dir / "c.bin"));

  CHECK_THROWS_AS(read_cache(dir / "c.bin", spec.hash() ^ 1), CacheError);
  CHECK_THROWS_AS(read_cache(dir / "missing.bin", spec.hash()), CacheError);

  auto bytes = slurp(dir / "c.bin");
  auto corrupt = bytes;
  corrupt[0] = 'X';
  CHECK_THROWS_AS(decode_cache(corrupt), CacheError);
  corrupt = bytes;
  corrupt[8] = 9;  // version
  CHECK_THROWS_AS(decode_cache(corrupt), CacheError);
  CHECK_THROWS_AS(decode_cache(bytes.substr(0, bytes.size() - 3)), CacheError);
  CHECK_THROWS_AS(decode_cache(bytes.substr(0, 20)), CacheError);
  CHECK_THROWS_AS(decode_cache(bytes + "extra"), CacheError);
}

TEST_CASE("regen output is byte-identical across runs and worker counts") {
  const auto cfg = Config::parse(kSmall);
  RunSettings s;
  s.seed = 99;
  s.out = scratch("regen-a");
  REQUIRE(run_quiet("regen", cfg, s) == kExitOk);
  const auto a = slurp(s.out / "regen.bin");
  const auto am = slurp(s.out / "regen_mirror.bin");
  const auto acsv = slurp(s.out / "regen.csv");
  s.out = scratch("regen-b");
  s.workers = 3;
  REQUIRE(run_quiet("regen", cfg, s) == kExitOk);
  CHECK(a == slurp(s.out / "regen.bin"));
  CHECK(am == slurp(s.out / "regen_mirror.bin"));
  CHECK(acsv == slurp(s.out / "regen.csv"));
  CHECK(fs::exists(s.out / "manifest_regen.json"));

  // rate reads the caches back.
  REQUIRE(run_quiet("rate", cfg, s) == kExitOk);
  CHECK(fs::exists(s.out / "rate_ix.csv"));
  CHECK(fs::exists(s.out / "rate_verdicts.txt"));
}

TEST_CASE("rate on an all-right cache gives zero curves") {
  const auto cfg = Config::parse(
      "[environment]\nlaw = degenerate\ncookies = [1.0]\n[regen]\ncount = 500\ncap = 10\n"
      "[rate]\nx_steps = 16\n");
  RunSettings s;
  s.out = scratch("rate-degenerate");
  REQUIRE(run_quiet("regen", cfg, s) == kExitOk);
  REQUIRE(run_quiet("rate", cfg, s) == kExitOk);
  std::istringstream iv(slurp(s.out / "rate_iv.csv"));
  std::string line;
  std::getline(iv, line);
  const auto cols = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
  };
  const auto header = cols(line);
  const auto vcol = std::find(header.begin(), header.end(), "value") - header.begin();
  REQUIRE(vcol < static_cast<long>(header.size()));
  std::size_t rows = 0;
  while (std::getline(iv, line)) {
    CHECK(cols(line)[vcol] == "0");
    ++rows;
  }
  CHECK(rows > 0);
}

TEST_CASE("walk output does not depend on the worker count") {
  const auto cfg = Config::parse(kSmall);
  RunSettings s;
  s.out = scratch("walk-1");
  REQUIRE(run_quiet("walk", cfg, s) == kExitOk);
  const auto one = slurp(s.out / "walk.csv");
  s.out = scratch("walk-4");
  s.workers = 4;
  REQUIRE(run_quiet("walk", cfg, s) == kExitOk);
  CHECK(one == slurp(s.out / "walk.csv"));
  s.format = "plot";
  REQUIRE(run_quiet("walk", cfg, s) == kExitOk);
  CHECK(slurp(s.out / "walk.dat").rfind("# config_hash", 0) == 0);
}

TEST_CASE("exit codes") {
  RunSettings s;
  s.out = scratch("exit");
  std::string err;
  CHECK(run_quiet("nosuch", Config::parse(kSmall), s, &err) == kExitInvalid);
  CHECK(run_quiet("walk", Config::parse("[run]\n"), s, &err) == kExitInvalid);
  CHECK_FALSE(err.empty());
  CHECK(run_quiet("walk", Config::parse(std::string(kSmall) + "[walk]\nreps = 1\n"), s) == kExitInvalid);
  // rate without a cache on disk.
  CHECK(run_quiet("rate", Config::parse(kSmall), s, &err) == kExitInvalid);
  // A cache from another environment is refused.
  REQUIRE(run_quiet("regen", Config::parse(kSmall), s) == kExitOk);
  const auto other = Config::parse(
      "[environment]\nM = 1\ncookies = [0.7]\n[rate]\ncache = regen.bin\n");
  CHECK(run_quiet("rate", other, s, &err) == kExitInvalid);
  CHECK(err.find("written for environment") != std::string::npos);
  CHECK(subcommands().size() == 7);
}

}  // TEST_SUITE
