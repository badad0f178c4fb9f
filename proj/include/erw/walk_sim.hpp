#pragma once

#include "erw/cookie_env.hpp"
#include "erw/parallel.hpp"
#include "erw/rng.hpp"
#include "erw/stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace erw {

/// One excited random walk under the averaged law. Cookie vectors are drawn
/// lazily the first time the walk has to leave a site.
class WalkState {
 public:
  explicit WalkState(const CookieEnvironmentSpec& spec);

  /// Back to X_0 = 0 with a fresh (unsampled) environment.
  void reset();

  std::int64_t position() const noexcept { return position_; }
  std::uint64_t step_count() const noexcept { return steps_; }
  std::int64_t path_min() const noexcept { return min_; }
  std::int64_t path_max() const noexcept { return max_; }

  /// Completed departures from x. The next departure from x is number departures(x) + 1.
  std::uint32_t departures(std::int64_t x) const noexcept;
  bool site_sampled(std::int64_t x) const noexcept;

  /// Probability that the next step from the current site goes right. Samples
  /// the site's cookie vector if this is the first departure from it.
  double right_probability(Rng& rng);

  /// Takes one step and returns it (+1 or -1).
  int step(Rng& rng);

 private:
  struct Site {
    std::uint32_t departures = 0;
    std::int32_t component = -1;
  };
  Site& site(std::int64_t x);
  const Site* find(std::int64_t x) const noexcept;

  const CookieEnvironmentSpec* spec_;
  std::vector<Site> right_;  // sites x >= 0
  std::vector<Site> left_;   // sites x < 0, stored at -x - 1
  std::int64_t position_ = 0;
  std::uint64_t steps_ = 0;
  std::int64_t min_ = 0;
  std::int64_t max_ = 0;
};

struct HittingResult {
  std::int64_t target = 0;
  std::optional<std::uint64_t> time;  // empty when censored at cap
  std::uint64_t cap = 0;
  std::int64_t path_max = 0;
  std::int64_t path_min = 0;

  bool censored() const noexcept { return !time.has_value(); }
};

std::int64_t simulate_position(const CookieEnvironmentSpec& spec, std::uint64_t n, Rng& rng);

HittingResult hitting_time(const CookieEnvironmentSpec& spec, std::int64_t target, std::uint64_t cap,
                           Rng& rng);

/// Mean of X_n / n over independent replicas, with its standard error.
Estimate estimate_speed(const CookieEnvironmentSpec& spec, std::uint64_t n, std::uint64_t reps,
                        const ReplicaPlan& plan);

/// Frequency of {X_n < n x}. Replica streams depend on n only, so estimates at
/// different x share trajectories.
ProbabilityEstimate slowdown_event_probability(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                               double x, std::uint64_t reps, const ReplicaPlan& plan);

/// Frequency of {|X_n| <= radius}.
ProbabilityEstimate confinement_probability(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                            double radius, std::uint64_t reps,
                                            const ReplicaPlan& plan);

struct BacktrackEstimate {
  std::uint64_t r = 0;
  ProbabilityEstimate event;      // backtrack seen by step `cap`
  ProbabilityEstimate half_cap;   // backtrack seen by step cap / 2 (cap sensitivity)
  double censor_rate = 0.0;       // fraction of walks that never reached n + r by cap
};

/// Frequency of a visit to a level <= n after T_{n+r}, observed up to total step
/// `cap`. Walks that do not reach n + r by cap count as non-events. This is a
/// lower bound on the infinite-horizon probability.
BacktrackEstimate backtrack_probability(const CookieEnvironmentSpec& spec, std::int64_t n,
                                        std::uint64_t r, std::uint64_t cap, std::uint64_t reps,
                                        const ReplicaPlan& plan);

/// Same estimate for several r on common trajectories (events nested in r).
std::vector<BacktrackEstimate> backtrack_profile(const CookieEnvironmentSpec& spec, std::int64_t n,
                                                 std::span<const std::uint64_t> rs, std::uint64_t cap,
                                                 std::uint64_t reps, const ReplicaPlan& plan);

/// Event frequencies read off the same n-step trajectories: {X_n < nx},
/// {T_ceil(nx) > n}, {T_ceil(n(x+eps)) > n}, and a drop below nx after
/// T_ceil(n(x+eps)) (within the n steps).
struct SlowdownSandwich {
  std::uint64_t n = 0;
  ProbabilityEstimate below;
  ProbabilityEstimate hit_late;
  ProbabilityEstimate hit_late_eps;
  ProbabilityEstimate backtrack_eps;
};
SlowdownSandwich slowdown_sandwich(const CookieEnvironmentSpec& spec, std::uint64_t n, double x,
                                   double eps, std::uint64_t reps, const ReplicaPlan& plan);

}  // namespace erw
