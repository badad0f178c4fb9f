#pragma once

#include "erw/branching_sim.hpp"
#include "erw/cookie_env.hpp"
#include "erw/parallel.hpp"
#include "erw/rng.hpp"
#include "erw/stats.hpp"
#include "erw/walk_sim.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace erw {

enum class FitMethod { Hill, LogLogRegression };
const char* to_string(FitMethod m);

/// One point of a polynomial-decay regression.
struct DecayPoint {
  std::uint64_t n = 0;
  ProbabilityEstimate p;
  bool used = false;  // false if refused (< 30 hits)
};

struct TailFit {
  double exponent = 0.0;   // κ̂ for Hill; the fitted slope for regressions
  double amplitude = 0.0;  // Ĉ in C x^-κ, or exp(intercept)
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t k_used = 0;  // order statistics (Hill) or regression points
  FitMethod method = FitMethod::Hill;
  double excluded_rate = 0.0;  // censored fraction dropped before fitting
  std::vector<DecayPoint> points;
};

/// Default number of order statistics: floor(N^{2/3}).
std::size_t default_hill_k(std::size_t n);

/// Hill estimator of the tail index κ in P(X > x) ~ C x^-κ from the top k order
/// statistics. Requires k < N/2 and at least k distinct values above the
/// threshold. CI is κ̂(1 ± 1.96/√k).
TailFit hill_estimate(std::span<const double> samples, std::optional<std::size_t> k = std::nullopt);

/// Hill estimates for several k on the same sample (stability plot).
std::vector<TailFit> hill_profile(std::span<const double> samples, std::span<const std::size_t> ks);

/// σ and W tail estimates from a regeneration batch; censored cycles are
/// excluded and their share reported.
TailFit hill_sigma(std::span<const RegenSample> samples, std::optional<std::size_t> k = std::nullopt);
TailFit hill_W(std::span<const RegenSample> samples, std::optional<std::size_t> k = std::nullopt);

/// Weighted least-squares slope of log p̂ against log n over the usable points,
/// with weights reps p̂ / (1 - p̂). Needs at least two usable points.
TailFit loglog_fit(std::vector<DecayPoint> points);

/// A draw of one summand Z_k.
using Sampler = std::function<double(Rng&)>;

/// Inverse-CDF Pareto sampler with P(Z > z) = z^-κ on z >= 1.
Sampler pareto_sampler(double kappa);
/// Uniform resampling from a fixed pool.
Sampler pool_sampler(std::span<const double> pool);

/// Slope of log P(sum_{k<=n} Z_k > x n) against log n. The event is read with
/// early exit once the running sum passes x n.
TailFit heavy_sum_exponent(const Sampler& sampler, double x, std::span<const std::uint64_t> n_grid,
                           std::uint64_t reps, const ReplicaPlan& plan, std::string_view tag = "heavy");

/// Pool variant: resamples i.i.d. from `pool`; requires x > mean(pool).
TailFit heavy_sum_exponent(std::span<const double> pool, double x, std::span<const std::uint64_t> n_grid,
                           std::uint64_t reps, const ReplicaPlan& plan);

/// Slope of log P(T_n > n t) against log n, T_n drawn from the branching
/// representation. Requires δ > 2.
TailFit slowdown_exponent_T(const CookieEnvironmentSpec& spec, double t, std::span<const std::uint64_t> n_grid,
                            std::uint64_t reps, const ReplicaPlan& plan);

struct SlowdownXResult {
  TailFit fit;
  std::vector<SlowdownSandwich> sandwich;  // per grid n
  /// below >= hit_late - 3 SE at every n.
  bool lower_sandwich_ok = false;
  /// below <= hit_late_eps + backtrack_eps at every n.
  bool upper_sandwich_ok = false;
};

/// Slope of log P(X_n < n x) against log n from direct walks, together with the
/// hitting-time sandwich read off the same trajectories. Requires δ > 2.
SlowdownXResult slowdown_exponent_X(const CookieEnvironmentSpec& spec, double x,
                                    std::span<const std::uint64_t> n_grid, std::uint64_t reps,
                                    const ReplicaPlan& plan, double eps = 0.05);

/// Powers of two from `lo` to `hi`.
std::vector<std::uint64_t> doubling_grid(std::uint64_t lo, std::uint64_t hi);

}  // namespace erw
