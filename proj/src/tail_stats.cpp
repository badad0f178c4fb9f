#include "erw/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace erw {

const char* to_string(FitMethod m) {
  return m == FitMethod::Hill ? "hill" : "loglog";
}

std::size_t default_hill_k(std::size_t n) {
  // Integer floor of n^(2/3): largest k with k^3 <= n^2, so perfect cubes come out exact.
  auto k = static_cast<std::size_t>(std::pow(static_cast<double>(n), 2.0 / 3.0));
  const auto n2 = static_cast<unsigned __int128>(n) * n;
  auto cube = [](std::size_t x) { return static_cast<unsigned __int128>(x) * x * x; };
  while (cube(k + 1) <= n2) ++k;
  while (k > 0 && cube(k) > n2) --k;
  return k;
}

namespace {

// Hill estimate on samples already sorted in decreasing order.
TailFit hill_sorted(const std::vector<double>& desc, std::size_t k) {
  const std::size_t n = desc.size();
  if (k < 10) throw std::invalid_argument("hill_estimate: k must be at least 10");
  if (2 * k >= n) throw std::invalid_argument("hill_estimate: k must be below half the sample count");
  // Integer data tie at the threshold; move k down to the last strict exceedance.
  while (k > 0 && desc[k - 1] == desc[k]) --k;
  if (k < 10) throw std::domain_error("hill_estimate: too few distinct exceedances");
  const double threshold = desc[k];
  if (!(threshold > 0.0)) throw std::domain_error("hill_estimate: threshold order statistic is not positive");
  const double lt = std::log(threshold);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(desc[i]) - lt;
  TailFit f;
  f.method = FitMethod::Hill;
  f.k_used = k;
  f.exponent = static_cast<double>(k) / s;
  const double rel = 1.96 / std::sqrt(static_cast<double>(k));
  f.se = f.exponent / std::sqrt(static_cast<double>(k));
  f.ci_lo = f.exponent * (1.0 - rel);
  f.ci_hi = f.exponent * (1.0 + rel);
  f.amplitude = static_cast<double>(k) / static_cast<double>(n) * std::pow(threshold, f.exponent);
  return f;
}

std::vector<double> sorted_desc(std::span<const double> samples) {
  std::vector<double> v(samples.begin(), samples.end());
  for (double x : v)
    if (!(x >= 0.0)) throw std::invalid_argument("hill_estimate: samples must be nonnegative");
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TailFit hill_estimate(std::span<const double> samples, std::optional<std::size_t> k) {
  const auto desc = sorted_desc(samples);
  return hill_sorted(desc, k.value_or(default_hill_k(desc.size())));
}

std::vector<TailFit> hill_profile(std::span<const double> samples, std::span<const std::size_t> ks) {
  const auto desc = sorted_desc(samples);
  std::vector<TailFit> out;
  for (auto k : ks) out.push_back(hill_sorted(desc, k));
  return out;
}

namespace {

TailFit hill_regen(std::span<const RegenSample> samples, std::optional<std::size_t> k, bool use_sigma) {
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const auto& s : samples)
    if (!s.censored) xs.push_back(static_cast<double>(use_sigma ? s.sigma : s.W));
  auto f = hill_estimate(xs, k);
  f.excluded_rate = censor_rate(samples);
  return f;
}

}  // namespace

TailFit hill_sigma(std::span<const RegenSample> samples, std::optional<std::size_t> k) {
  return hill_regen(samples, k, true);
}

TailFit hill_W(std::span<const RegenSample> samples, std::optional<std::size_t> k) {
  return hill_regen(samples, k, false);
}

TailFit loglog_fit(std::vector<DecayPoint> points) {
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& pt = points[i];
    pt.used = pt.p.hits >= 30 && pt.p.hits < pt.p.reps && pt.n > 0;
    if (pt.used) use.push_back(i);
  }
  if (use.size() < 2) throw std::domain_error("loglog_fit: fewer than two grid points with at least 30 hits");
  const auto m = static_cast<Eigen::Index>(use.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m), w(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& pt = points[use[static_cast<std::size_t>(r)]];
    X(r, 0) = 1.0;
    X(r, 1) = std::log(static_cast<double>(pt.n));
    y(r) = std::log(pt.p.p);
    w(r) = static_cast<double>(pt.p.reps) * pt.p.p / (1.0 - pt.p.p);
  }
  const auto fit = weighted_least_squares(X, y, w);
  TailFit f;
  f.method = FitMethod::LogLogRegression;
  f.exponent = fit.coef(1);
  f.amplitude = std::exp(fit.coef(0));
  f.k_used = use.size();
  // Binomial weights are exact inverse variances, so no residual rescaling.
  f.se = std::sqrt(fit.cov(1, 1));
  f.ci_lo = f.exponent - 1.96 * f.se;
  f.ci_hi = f.exponent + 1.96 * f.se;
  f.points = std::move(points);
  return f;
}

Sampler pareto_sampler(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("pareto_sampler: kappa must be positive");
  return [kappa](Rng& rng) {
    // 1 - U lies in (0, 1], so the draw is finite.
    return std::pow(1.0 - rng.uniform(), -1.0 / kappa);
  };
}

Sampler pool_sampler(std::span<const double> pool) {
  if (pool.empty()) throw std::invalid_argument("pool_sampler: empty pool");
  return [pool](Rng& rng) { return pool[rng.below(pool.size())]; };
}

TailFit heavy_sum_exponent(const Sampler& sampler, double x, std::span<const std::uint64_t> n_grid,
                           std::uint64_t reps, const ReplicaPlan& plan, std::string_view tag) {
  std::vector<DecayPoint> points;
  for (auto n : n_grid) {
    const double level = x * static_cast<double>(n);
    const auto hits = run_replicas<unsigned char>(reps, plan.workers, [&](std::size_t i) {
      Rng rng = replica_rng(plan.master_seed, tag, n, i);
      double sum = 0.0;
      for (std::uint64_t k = 0; k < n; ++k) {
        sum += sampler(rng);
        if (sum > level) return static_cast<unsigned char>(1);
      }
      return static_cast<unsigned char>(0);
    });
    const auto total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    points.push_back({n, frequency(total, reps), false});
  }
  return loglog_fit(std::move(points));
}

TailFit heavy_sum_exponent(std::span<const double> pool, double x, std::span<const std::uint64_t> n_grid,
                           std::uint64_t reps, const ReplicaPlan& plan) {
  if (pool.empty()) throw std::invalid_argument("heavy_sum_exponent: empty pool");
  const double mean = std::accumulate(pool.begin(), pool.end(), 0.0) / static_cast<double>(pool.size());
  if (!(x > mean)) throw std::invalid_argument("heavy_sum_exponent: x must exceed the pool mean");
  return heavy_sum_exponent(pool_sampler(pool), x, n_grid, reps, plan, "heavy-pool");
}

TailFit slowdown_exponent_T(const CookieEnvironmentSpec& spec, double t, std::span<const std::uint64_t> n_grid,
                            std::uint64_t reps, const ReplicaPlan& plan) {
  if (!(compute_delta(spec) > 2.0)) throw std::invalid_argument("slowdown_exponent_T: requires delta > 2");
  if (!(t > 1.0)) throw std::invalid_argument("slowdown_exponent_T: t must exceed 1");
  std::vector<DecayPoint> points;
  for (auto n : n_grid) {
    const auto cap = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * t));
    const auto hits = run_replicas<unsigned char>(reps, plan.workers, [&](std::size_t i) {
      Rng rng = replica_rng(plan.master_seed, "slow-T", n, i);
      // Censored at cap means the draw already exceeds n t.
      return static_cast<unsigned char>(hitting_time_via_representation(spec, n, cap, rng).censored ? 1 : 0);
    });
    const auto total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    points.push_back({n, frequency(total, reps), false});
  }
  return loglog_fit(std::move(points));
}

SlowdownXResult slowdown_exponent_X(const CookieEnvironmentSpec& spec, double x,
                                    std::span<const std::uint64_t> n_grid, std::uint64_t reps,
                                    const ReplicaPlan& plan, double eps) {
  if (!(compute_delta(spec) > 2.0)) throw std::invalid_argument("slowdown_exponent_X: requires delta > 2");
  if (!(x > 0.0 && x + eps < 1.0)) throw std::invalid_argument("slowdown_exponent_X: need 0 < x < x + eps < 1");
  SlowdownXResult r;
  std::vector<DecayPoint> points;
  r.lower_sandwich_ok = true;
  r.upper_sandwich_ok = true;
  for (auto n : n_grid) {
    auto s = slowdown_sandwich(spec, n, x, eps, reps, plan);
    points.push_back({n, s.below, false});
    if (s.below.p < s.hit_late.p - 3.0 * s.hit_late.se) r.lower_sandwich_ok = false;
    if (s.below.p > s.hit_late_eps.p + s.backtrack_eps.p) r.upper_sandwich_ok = false;
    r.sandwich.push_back(s);
  }
  r.fit = loglog_fit(std::move(points));
  return r;
}

std::vector<std::uint64_t> doubling_grid(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> g;
  for (std::uint64_t n = lo; n <= hi; n *= 2) g.push_back(n);
  return g;
}

}  // namespace erw
