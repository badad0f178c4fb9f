#pragma once

#include "erw/cookie_env.hpp"
#include "erw/parallel.hpp"
#include "erw/rng.hpp"
#include "erw/stats.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace erw {

/// Bernoulli trials at one site: trial j succeeds with probability ω(j) for
/// j <= M and 1/2 afterwards. Outcomes are drawn on demand and never change,
/// so several processes can read the same site.
class CoinSite {
 public:
  explicit CoinSite(CookieVector cookies) : cookies_(std::move(cookies)) {}

  const CookieVector& cookies() const noexcept { return cookies_; }
  std::size_t drawn() const noexcept { return outcomes_.size(); }
  bool outcome(std::size_t j, Rng& rng);  // 1-based trial index

  /// F_m: failures before the m-th success (F_0 = 0).
  std::uint64_t failures_before(std::uint64_t m, Rng& rng);

 private:
  CookieVector cookies_;
  std::vector<unsigned char> outcomes_;
};

/// Failures before the m-th success on a fresh site with the given cookies.
std::uint64_t failures_before_success(const CookieVector& cookies, std::uint64_t m, Rng& rng);

/// V_{i+1} = F_{V_i + 1} on the given site.
std::uint64_t step_V(std::uint64_t current, CoinSite& site, Rng& rng);
/// V_{i+1} on a fresh site with the given cookies.
std::uint64_t step_V(std::uint64_t current, const CookieVector& cookies, Rng& rng);

inline constexpr std::uint64_t kCensoredSigma = std::numeric_limits<std::uint64_t>::max();

/// One regeneration cycle of V: σ is the first return time to 0 and W the total
/// population over generations 1..σ. A cycle still running after `cap`
/// generations is censored and W holds the partial sum.
struct RegenSample {
  std::uint64_t sigma = 1;
  std::uint64_t W = 0;
  bool censored = false;

  friend bool operator==(const RegenSample&, const RegenSample&) = default;
};

RegenSample sample_regeneration(const CookieEnvironmentSpec& spec, std::uint64_t cap, Rng& rng);

/// `count` independent cycles, replica i seeded from (seed, tag, cap, i).
std::vector<RegenSample> sample_regenerations(const CookieEnvironmentSpec& spec, std::uint64_t count,
                                              std::uint64_t cap, const ReplicaPlan& plan,
                                              std::string_view tag = "regen");

struct AbsorbedResult {
  std::uint64_t total = 0;        // sum_{i>=1} V_i^(n)
  std::uint64_t generations = 0;  // generations run before absorption (or cap)
  bool censored = false;
};

/// The immigrant-free chain started at `start` on fresh i.i.d. sites, run until
/// it hits 0 or `cap` generations have elapsed.
AbsorbedResult sample_absorbed_process(std::uint64_t start, const CookieEnvironmentSpec& spec,
                                       std::uint64_t cap, Rng& rng);

/// Same chain reading the given sites in order (site k drives generation k + 1).
AbsorbedResult sample_absorbed_process(std::uint64_t start, std::span<CoinSite> sites,
                                       std::uint64_t cap, Rng& rng);

/// V_0..V_{n+extra} and V^(n)_0..V^(n)_extra driven by the same coin sites.
struct CoupledPaths {
  std::vector<std::uint64_t> V;
  std::vector<std::uint64_t> absorbed;
};
CoupledPaths coupled_processes(const CookieEnvironmentSpec& spec, std::uint64_t n, std::uint64_t extra,
                               Rng& rng);

struct RepresentationDraw {
  std::uint64_t value = 0;  // n + 2 sum V_i + 2 sum V_i^(n); partial when censored
  bool censored = false;
};

/// One draw of n + 2 sum_{i<=n} V_i + 2 sum_{i>=1} V_i^(n). Censored once the
/// running value exceeds `cap`.
RepresentationDraw hitting_time_via_representation(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                                   std::uint64_t cap, Rng& rng);

struct SpeedEstimate {
  double value = 0.0;
  double se = 0.0;
  double censor_rate = 0.0;
  std::uint64_t cycles = 0;
};

/// E[σ] / E[σ + 2W] from uncensored cycles with a delta-method standard error.
/// Throws if more than 1% of the cycles are censored.
SpeedEstimate estimate_speed_regen(std::span<const RegenSample> samples);

double censor_rate(std::span<const RegenSample> samples);

}  // namespace erw
