#include "erw/harness/run.hpp"

#include "erw/exact_oracle.hpp"
#include "erw/harness/acceptance.hpp"
#include "erw/harness/cache_io.hpp"
#include "erw/harness/csv.hpp"
#include "erw/rate_fn.hpp"
#include "erw/tail_stats.hpp"
#include "erw/walk_sim.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace erw::harness {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"walk", "hit", "regen", "rate", "tails", "oracle", "verify"};
  return names;
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<std::uint64_t> get_u64_list(const Config& cfg, std::string_view section, std::string_view key,
                                        std::vector<std::uint64_t> fallback) {
  const auto v = cfg.find(section, key);
  if (!v) return fallback;
  std::vector<std::uint64_t> out;
  for (double d : parse_real_list(*v)) {
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e18)
      throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": expected nonnegative integers");
    out.push_back(static_cast<std::uint64_t>(d));
  }
  if (out.empty()) throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": empty list");
  return out;
}

// Everything a subcommand needs, plus the list of files it wrote.
class Session {
 public:
  Session(std::string sub, const Config& cfg, const RunSettings& s, std::ostream& out)
      : sub_(std::move(sub)), cfg_(cfg), settings_(s), out_(out), started_(utc_now()) {}

  const Config& cfg() const { return cfg_; }
  const RunSettings& settings() const { return settings_; }
  ReplicaPlan plan() const { return {settings_.seed, settings_.workers}; }
  std::uint64_t hash() const { return cfg_.hash(); }
  std::ostream& out() { return out_; }
  const std::string& section() const { return sub_; }

  fs::path path(const fs::path& name) const { return name.is_absolute() ? name : settings_.out / name; }

  /// Writes a table as `stem.csv`, or as `stem.dat` (x y columns) in plot format
  /// when plot columns are given.
  void emit(const std::string& stem, const CsvTable& table, std::string_view x = {}, std::string_view y = {}) {
    if (settings_.format == "plot" && !x.empty())
      write(stem + ".dat", table.plot(x, y));
    else
      write(stem + ".csv", table.str());
  }

  void write(const std::string& name, std::string_view text) {
    write_text(path(name), text);
    files_.push_back(name);
  }
  void note(const std::string& name) { files_.push_back(name); }

  void verdict(std::string line) { verdicts_.push_back(std::move(line)); }

  void manifest(int status) {
    nlohmann::ordered_json j;
    j["subcommand"] = sub_;
    j["config_hash"] = format_hash(cfg_.hash());
    j["seed"] = settings_.seed;
    j["version"] = ERW_VERSION;
    j["workers"] = settings_.workers;
    j["format"] = settings_.format;
    j["started"] = started_;
    j["finished"] = utc_now();
    j["status"] = status;
    j["files"] = files_;
    if (!verdicts_.empty()) j["verdicts"] = verdicts_;
    write_text(path("manifest_" + sub_ + ".json"), j.dump(2) + "\n");
  }

 private:
  std::string sub_;
  const Config& cfg_;
  RunSettings settings_;
  std::ostream& out_;
  std::string started_;
  std::vector<std::string> files_;
  std::vector<std::string> verdicts_;
};

int cmd_walk(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  const auto ns = get_u64_list(c, "walk", "n", {10'000});
  const auto reps = c.get_u64("walk", "reps", 1000);
  const bool records = c.get_bool("walk", "records", false);
  if (reps < 2) throw ConfigError("[walk] reps must be at least 2");
  CsvTable agg(s.hash(), {"n", "reps", "speed", "se"});
  CsvTable rec(s.hash(), {"n", "replica", "position"});
  for (auto n : ns) {
    if (n == 0) throw ConfigError("[walk] n must be positive");
    // Same streams as estimate_speed, so the two agree exactly.
    const auto pos = run_replicas<std::int64_t>(reps, s.settings().workers, [&](std::size_t i) {
      Rng rng = replica_rng(s.settings().seed, "walk", n, i);
      return simulate_position(spec, n, rng);
    });
    std::vector<double> v(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      v[i] = static_cast<double>(pos[i]) / static_cast<double>(n);
      if (records) rec.row() << n << static_cast<std::uint64_t>(i) << pos[i];
    }
    const auto e = mean_and_se(v);
    agg.row() << n << reps << e.value << e.se;
    s.out() << "n=" << n << " speed=" << e.value << " se=" << e.se << "\n";
  }
  s.emit("walk", agg, "n", "speed");
  if (records) s.emit("walk_positions", rec);
  return kExitOk;
}

int cmd_hit(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  const auto targets = get_u64_list(c, "hit", "target", {10});
  const auto reps = c.get_u64("hit", "reps", 1000);
  const auto cap = c.get_u64("hit", "cap", 1'000'000);
  const auto method = c.get_string("hit", "method", "walk");
  const bool records = c.get_bool("hit", "records", false);
  if (method != "walk" && method != "representation") throw ConfigError("[hit] method must be walk or representation");
  CsvTable agg(s.hash(), {"target", "method", "reps", "cap", "censored", "mean_uncensored", "se_uncensored"});
  CsvTable rec(s.hash(), {"target", "replica", "time", "censored"});
  struct Draw {
    std::uint64_t time = 0;
    bool censored = false;
  };
  for (auto m : targets) {
    if (m == 0) throw ConfigError("[hit] target must be positive");
    const auto draws = run_replicas<Draw>(reps, s.settings().workers, [&](std::size_t i) {
      if (method == "walk") {
        Rng rng = replica_rng(s.settings().seed, "hit", m, i);
        const auto h = hitting_time(spec, static_cast<std::int64_t>(m), cap, rng);
        return h.censored() ? Draw{cap, true} : Draw{*h.time, false};
      }
      Rng rng = replica_rng(s.settings().seed, "hit-rep", m, i);
      const auto d = hitting_time_via_representation(spec, m, cap, rng);
      return Draw{d.value, d.censored};
    });
    std::vector<double> done;
    std::uint64_t censored = 0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      if (draws[i].censored)
        ++censored;
      else
        done.push_back(static_cast<double>(draws[i].time));
      if (records) rec.row() << m << static_cast<std::uint64_t>(i) << draws[i].time << draws[i].censored;
    }
    const auto e = done.size() >= 2 ? mean_and_se(done) : Estimate{std::nan(""), std::nan("")};
    agg.row() << m << method << reps << cap << censored << e.value << e.se;
    s.out() << "target=" << m << " censored=" << censored << "/" << reps << " mean=" << e.value << "\n";
  }
  s.emit("hit", agg);
  if (records) s.emit("hit_times", rec);
  return kExitOk;
}

void summarize_batch(Session& s, CsvTable& table, std::string_view which, std::span<const RegenSample> b) {
  const EmpiricalMGF mgf(b);
  double speed = std::nan(""), speed_se = std::nan("");
  if (censor_rate(b) <= 0.01) {
    const auto v = estimate_speed_regen(b);
    speed = v.value;
    speed_se = v.se;
  }
  table.row() << which << static_cast<std::uint64_t>(b.size()) << mgf.censored() << mgf.mean_sigma() << mgf.mean_W()
              << mgf.sigma_one_fraction() << speed << speed_se;
  s.out() << which << ": cycles=" << b.size() << " censored=" << mgf.censored() << " mean_sigma=" << mgf.mean_sigma()
          << " mean_W=" << mgf.mean_W() << "\n";
}

int cmd_regen(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  const auto count = c.get_u64("regen", "count", 100'000);
  const auto cap = c.get_u64("regen", "cap", 1'000'000);
  const auto cache = c.get_string("regen", "cache", "regen.bin");
  const bool with_mirror = c.get_bool("regen", "mirror", false);
  if (count == 0 || cap == 0) throw ConfigError("[regen] count and cap must be positive");
  CsvTable table(s.hash(), {"batch", "cycles", "censored", "mean_sigma", "mean_W", "sigma_one_fraction", "speed",
                            "speed_se"});
  const auto batch = sample_regenerations(spec, count, cap, s.plan(), "regen");
  write_cache(s.path(cache), {spec.hash(), s.settings().seed, cap, count}, batch);
  s.note(cache);
  summarize_batch(s, table, "primary", batch);
  if (with_mirror) {
    const auto mspec = mirror(spec);
    const auto mcap = c.get_u64("regen", "mirror_cap", 256);
    const auto mcache = c.get_string("regen", "mirror_cache", "regen_mirror.bin");
    const auto mb = sample_regenerations(mspec, count, mcap, s.plan(), "mirror");
    write_cache(s.path(mcache), {mspec.hash(), s.settings().seed, mcap, count}, mb);
    s.note(mcache);
    summarize_batch(s, table, "mirror", mb);
  }
  s.emit("regen", table);
  return kExitOk;
}

void curve_table(Session& s, const std::string& stem, const RateCurve& c) {
  CsvTable t(s.hash(), {"x", "value", "se", "unreliable"});
  for (std::size_t i = 0; i < c.size(); ++i) t.row() << c.grid[i] << c.values[i] << c.se[i] << (c.unreliable[i] != 0);
  s.emit(stem, t, "x", "value");
}

// W tail index when it is below 1 (infinite mean W), else none.
std::optional<double> heavy_w_index(std::span<const RegenSample> batch, const std::string& setting) {
  if (setting == "none") return std::nullopt;
  if (setting != "auto") return parse_real(setting);
  try {
    const double k = hill_W(batch).exponent;
    if (k < 1.0) return k;
  } catch (const std::exception&) {
    // Too few distinct W values for a tail estimate: treat the tail as light.
  }
  return std::nullopt;
}

int cmd_rate(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  const auto cache = read_cache(s.path(c.get_string("rate", "cache", "regen.bin")), spec.hash());
  const auto mirror_name = c.find("rate", "mirror_cache");
  const auto steps = c.get_u64("rate", "x_steps", 400);
  const auto tail_setting = c.get_string("rate", "w_tail_index", "auto");
  if (steps < 8) throw ConfigError("[rate] x_steps must be at least 8");

  const EmpiricalMGF mgf(cache.samples);
  const auto w_index = heavy_w_index(cache.samples, tail_setting);
  const auto lambdas = default_lambda_grid();
  const auto lv = lambda_V_curve(mgf, lambdas, {kRootTolerance, w_index});
  const auto xs = default_x_grid(steps);
  const auto u = iv_grid_for(xs);
  const auto iv = legendre(lv, u, w_index);
  const auto it = rate_T(iv);
  curve_table(s, "rate_lambda_v", lv);
  curve_table(s, "rate_iv", iv);
  curve_table(s, "rate_it", it);

  const auto regime = classify(spec);
  PropertyExpectations ex;
  ex.mean_first_cookie = spec.mean_cookie(1);
  ex.mean_first_cookie_left = 1.0 - ex.mean_first_cookie;
  ex.floor = -lv.values.back();
  const double m0 = mgf.mean_sigma() > 0.0 ? mgf.mean_W() / mgf.mean_sigma() : 0.0;
  std::string report;
  auto record = [&](const PropertyReport& rep) {
    report += rep.to_text();
    for (const auto& v : rep.verdicts) s.verdict((v.pass ? "PASS " : "FAIL ") + v.name);
  };
  if (regime.delta > 2.0) ex.zero_edge = m0;
  record(check_properties(lv, regime, ex));
  record(check_properties(iv, regime, ex));
  if (regime.delta > 2.0) ex.zero_edge = 1.0 + 2.0 * m0;
  record(check_properties(it, regime, ex));

  if (mirror_name) {
    const auto mspec = mirror(spec);
    const auto mcache = read_cache(s.path(*mirror_name), mspec.hash());
    const EmpiricalMGF mm(mcache.samples);
    const auto lvm = lambda_V_curve(mm, lambdas, {});
    const auto ix = rate_X(it, rate_T(legendre(lvm, u)));
    curve_table(s, "rate_ix", ix);
    ex.floor_left = -lvm.values.back();
    if (regime.delta > 2.0) ex.zero_edge = 1.0 / (1.0 + 2.0 * m0);
    if (regime.delta < -2.0 && mm.mean_sigma() > 0.0)
      ex.zero_edge_left = -1.0 / (1.0 + 2.0 * mm.mean_W() / mm.mean_sigma());
    record(check_properties(ix, regime, ex));
  }
  s.write("rate_verdicts.txt", report);
  s.out() << report;
  return kExitOk;
}

int cmd_tails(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  CsvTable fits(s.hash(), {"quantity", "method", "exponent", "ci_lo", "ci_hi", "k", "excluded_rate"});
  auto add = [&](std::string_view q, const TailFit& f) {
    fits.row() << q << to_string(f.method) << f.exponent << f.ci_lo << f.ci_hi << f.k_used << f.excluded_rate;
    s.out() << q << ": " << f.exponent << " [" << f.ci_lo << ", " << f.ci_hi << "]\n";
  };
  std::optional<double> v0;
  if (const auto name = c.find("tails", "cache")) {
    const auto cache = read_cache(s.path(*name), spec.hash());
    std::optional<std::size_t> k;
    if (c.has("tails", "k")) k = c.get_u64("tails", "k", 0);
    add("sigma", hill_sigma(cache.samples, k));
    add("W", hill_W(cache.samples, k));
    if (censor_rate(cache.samples) <= 0.01) v0 = estimate_speed_regen(cache.samples).value;
  }
  if (c.get_bool("tails", "slowdown", false)) {
    const auto reps = c.get_u64("tails", "reps", 100'000);
    const auto tg = get_u64_list(c, "tails", "t_grid", {128, 8192});
    const auto xg = get_u64_list(c, "tails", "x_grid", {128, 2048});
    if (tg.size() != 2 || xg.size() != 2) throw ConfigError("[tails] t_grid and x_grid take [lo, hi]");
    if (!c.has("tails", "t") || !c.has("tails", "x")) {
      if (!v0) throw ConfigError("[tails] slowdown needs t and x, or a cache to estimate the speed from");
    }
    const double t = c.get_double("tails", "t", v0 ? 1.5 / *v0 : 0.0);
    const double x = c.get_double("tails", "x", v0 ? 0.5 * *v0 : 0.0);
    CsvTable pts(s.hash(), {"event", "n", "hits", "reps", "p", "used"});
    const auto ft = slowdown_exponent_T(spec, t, doubling_grid(tg[0], tg[1]), reps, s.plan());
    add("slowdown_T", ft);
    for (const auto& p : ft.points) pts.row() << "T" << p.n << p.p.hits << p.p.reps << p.p.p << p.used;
    const auto fx = slowdown_exponent_X(spec, x, doubling_grid(xg[0], xg[1]), reps, s.plan());
    add("slowdown_X", fx.fit);
    for (const auto& p : fx.fit.points) pts.row() << "X" << p.n << p.p.hits << p.p.reps << p.p.p << p.used;
    s.emit("tails_decay", pts);
  }
  if (fits.rows() == 0) throw ConfigError("[tails] nothing to do: set cache and/or slowdown = true");
  s.emit("tails", fits);
  return kExitOk;
}

void law_table(Session& s, const std::string& stem, const ExactLaw& law, std::vector<std::string> names) {
  names.push_back("p");
  CsvTable t(s.hash(), std::move(names));
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    auto row = t.row();
    for (auto v : law.support[i]) row << static_cast<std::int64_t>(v);
    row << law.probs[i];
  }
  s.emit(stem, t);
  s.out() << stem << ": " << law.support.size() << " outcomes, truncation mass " << law.truncation_mass << "\n";
}

int cmd_oracle(Session& s, const CookieEnvironmentSpec& spec) {
  const auto& c = s.cfg();
  const auto law = c.get_string("oracle", "law", "sigma_w");
  if (law == "sigma_w") {
    SigmaWBounds b{c.get_u64("oracle", "sigma_max", 6), c.get_u64("oracle", "w_max", 12),
                   c.get_u64("oracle", "v_max", 12)};
    auto r = sigma_w_law(spec, b);
    r.law.normalize_order();
    law_table(s, "oracle_sigma_w", r.law, {"sigma", "W"});
  } else if (law == "failures") {
    auto r = failures_law(spec, c.get_u64("oracle", "successes", 1), c.get_u64("oracle", "j_max", 50));
    law_table(s, "oracle_failures", r, {"failures"});
  } else if (law == "transition") {
    auto r = transition_row(spec, c.get_u64("oracle", "k", 0), c.get_u64("oracle", "j_max", 50));
    law_table(s, "oracle_transition", r, {"next"});
  } else if (law == "paths") {
    const auto n = c.get_u64("oracle", "n", 10);
    std::optional<std::int64_t> target;
    if (c.has("oracle", "target")) target = static_cast<std::int64_t>(c.get_u64("oracle", "target", 1));
    auto r = enumerate_paths(spec, n, target);
    r.position.normalize_order();
    law_table(s, "oracle_position", r.position, {"position"});
    if (r.hitting) {
      r.hitting->normalize_order();
      law_table(s, "oracle_hitting", *r.hitting, {"time"});
    }
  } else if (law == "return") {
    const auto n_max = c.get_u64("oracle", "n_max", 64);
    const auto ret = return_probabilities(spec, n_max, c.get_u64("oracle", "k_max", 1000));
    CsvTable t(s.hash(), {"n", "p_return"});
    for (std::uint64_t n = 0; n <= n_max; ++n) t.row() << n << ret[n];
    s.emit("oracle_return", t, "n", "p_return");
  } else if (law == "exit") {
    const auto n_max = c.get_u64("oracle", "n_max", 10);
    CsvTable t(s.hash(), {"n", "exact", "lower_bound"});
    for (std::uint64_t n = 2; n <= n_max; ++n)
      t.row() << n << probability_right_before_left(spec, n) << right_before_left_lower_bound(spec, n);
    s.emit("oracle_exit", t);
  } else {
    throw ConfigError("[oracle] unknown law '" + law + "' (sigma_w, failures, transition, paths, return, exit)");
  }
  return kExitOk;
}

int cmd_verify(Session& s) {
  AcceptanceContext ctx{s.settings().seed, s.settings().workers, s.hash()};
  bool all = true;
  std::string lines;
  run_acceptance(ctx, [&](const AcceptanceResult& r) {
    all = all && r.pass;
    s.out() << r.line() << "\n" << std::flush;
    lines += r.line() + "\n";
    if (!r.details.empty()) lines += r.details + (r.details.back() == '\n' ? "" : "\n");
    s.verdict(r.line());
    for (const auto& a : r.artifacts) s.write("verify/" + a.name, a.text);
  });
  s.write("verify/verdicts.txt", lines);
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::string& subcommand, const Config& config, const RunSettings& settings, std::ostream& out,
        std::ostream& err) {
  try {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end())
      throw ConfigError("unknown subcommand '" + subcommand + "'");
    const auto spec = config.environment();
    Session s(subcommand, config, settings, out);
    int status = kExitOk;
    if (subcommand == "walk") status = cmd_walk(s, spec);
    else if (subcommand == "hit") status = cmd_hit(s, spec);
    else if (subcommand == "regen") status = cmd_regen(s, spec);
    else if (subcommand == "rate") status = cmd_rate(s, spec);
    else if (subcommand == "tails") status = cmd_tails(s, spec);
    else if (subcommand == "oracle") status = cmd_oracle(s, spec);
    else status = cmd_verify(s);
    s.manifest(status);
    return status;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const CacheError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInvalid;
}

}  // namespace erw::harness
