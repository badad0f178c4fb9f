#include "erw/walk_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace erw {

WalkState::WalkState(const CookieEnvironmentSpec& spec) : spec_(&spec) {
  right_.reserve(64);
  left_.reserve(64);
}

void WalkState::reset() {
  right_.clear();
  left_.clear();
  position_ = 0;
  steps_ = 0;
  min_ = 0;
  max_ = 0;
}

WalkState::Site& WalkState::site(std::int64_t x) {
  if (x >= 0) {
    const auto i = static_cast<std::size_t>(x);
    if (i >= right_.size()) right_.resize(i + 1);
    return right_[i];
  }
  const auto i = static_cast<std::size_t>(-x - 1);
  if (i >= left_.size()) left_.resize(i + 1);
  return left_[i];
}

const WalkState::Site* WalkState::find(std::int64_t x) const noexcept {
  if (x >= 0) {
    const auto i = static_cast<std::size_t>(x);
    return i < right_.size() ? &right_[i] : nullptr;
  }
  const auto i = static_cast<std::size_t>(-x - 1);
  return i < left_.size() ? &left_[i] : nullptr;
}

std::uint32_t WalkState::departures(std::int64_t x) const noexcept {
  const Site* s = find(x);
  return s ? s->departures : 0;
}

bool WalkState::site_sampled(std::int64_t x) const noexcept {
  const Site* s = find(x);
  return s && s->component >= 0;
}

double WalkState::right_probability(Rng& rng) {
  Site& s = site(position_);
  const std::size_t visit = s.departures + 1;
  if (visit > spec_->cookies_per_site()) return 0.5;
  if (s.component < 0) s.component = static_cast<std::int32_t>(sample_component(*spec_, rng));
  return spec_->component(static_cast<std::size_t>(s.component)).at(visit);
}

int WalkState::step(Rng& rng) {
  const double p = right_probability(rng);
  const int dx = rng.bernoulli(p) ? 1 : -1;
  site(position_).departures += 1;
  position_ += dx;
  ++steps_;
  min_ = std::min(min_, position_);
  max_ = std::max(max_, position_);
  return dx;
}

std::int64_t simulate_position(const CookieEnvironmentSpec& spec, std::uint64_t n, Rng& rng) {
  WalkState walk(spec);
  for (std::uint64_t k = 0; k < n; ++k) walk.step(rng);
  return walk.position();
}

HittingResult hitting_time(const CookieEnvironmentSpec& spec, std::int64_t target, std::uint64_t cap,
                           Rng& rng) {
  const auto distance = static_cast<std::uint64_t>(target < 0 ? -target : target);
  if (cap < distance) throw std::invalid_argument("hitting_time: cap must be at least |target|");
  WalkState walk(spec);
  HittingResult r;
  r.target = target;
  r.cap = cap;
  while (walk.position() != target && walk.step_count() < cap) walk.step(rng);
  if (walk.position() == target) r.time = walk.step_count();
  r.path_max = walk.path_max();
  r.path_min = walk.path_min();
  return r;
}

Estimate estimate_speed(const CookieEnvironmentSpec& spec, std::uint64_t n, std::uint64_t reps,
                        const ReplicaPlan& plan) {
  if (n == 0) throw std::invalid_argument("estimate_speed: n must be positive");
  const auto speeds = run_replicas<double>(reps, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, "walk", n, i);
    return static_cast<double>(simulate_position(spec, n, rng)) / static_cast<double>(n);
  });
  return mean_and_se(speeds);
}

namespace {

template <class Event>
ProbabilityEstimate count_events(std::uint64_t reps, unsigned workers, Event&& event) {
  const auto hits = run_replicas<unsigned char>(reps, workers, [&](std::size_t i) {
    return static_cast<unsigned char>(event(i) ? 1 : 0);
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return frequency(total, reps);
}

}  // namespace

ProbabilityEstimate slowdown_event_probability(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                               double x, std::uint64_t reps, const ReplicaPlan& plan) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("slowdown_event_probability: x must be in (0,1)");
  const double level = static_cast<double>(n) * x;
  return count_events(reps, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, "walk", n, i);
    return static_cast<double>(simulate_position(spec, n, rng)) < level;
  });
}

ProbabilityEstimate confinement_probability(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                            double radius, std::uint64_t reps,
                                            const ReplicaPlan& plan) {
  return count_events(reps, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, "walk", n, i);
    const auto x = simulate_position(spec, n, rng);
    return std::abs(static_cast<double>(x)) <= radius;
  });
}

std::vector<BacktrackEstimate> backtrack_profile(const CookieEnvironmentSpec& spec, std::int64_t n,
                                                 std::span<const std::uint64_t> rs, std::uint64_t cap,
                                                 std::uint64_t reps, const ReplicaPlan& plan) {
  if (rs.empty()) return {};
  constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t half = cap / 2;
  struct Record {
    std::vector<std::uint64_t> hit;  // T_{n+r} per r, kNever if not reached
    std::uint64_t last_low = kNever;       // last k <= cap with X_k <= n
    std::uint64_t last_low_half = kNever;  // last k <= cap/2 with X_k <= n
  };
  const auto records = run_replicas<Record>(reps, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, "backtrack", static_cast<std::uint64_t>(n), i);
    WalkState walk(spec);
    Record rec;
    rec.hit.assign(rs.size(), kNever);
    auto observe = [&] {
      const auto t = walk.step_count();
      const auto x = walk.position();
      if (x <= n) {
        rec.last_low = t;
        if (t <= half) rec.last_low_half = t;
      }
      for (std::size_t k = 0; k < rs.size(); ++k) {
        if (rec.hit[k] == kNever && x == n + static_cast<std::int64_t>(rs[k])) rec.hit[k] = t;
      }
    };
    observe();
    while (walk.step_count() < cap) {
      walk.step(rng);
      observe();
    }
    return rec;
  });

  std::vector<BacktrackEstimate> out(rs.size());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    std::uint64_t events = 0, events_half = 0, censored = 0;
    for (const auto& rec : records) {
      const auto t = rec.hit[k];
      if (t == kNever) {
        ++censored;
        continue;
      }
      if (rec.last_low != kNever && rec.last_low > t) ++events;
      if (rec.last_low_half != kNever && rec.last_low_half > t) ++events_half;
    }
    out[k].r = rs[k];
    out[k].event = frequency(events, reps);
    out[k].half_cap = frequency(events_half, reps);
    out[k].censor_rate = reps ? static_cast<double>(censored) / static_cast<double>(reps) : 0.0;
  }
  return out;
}

BacktrackEstimate backtrack_probability(const CookieEnvironmentSpec& spec, std::int64_t n,
                                        std::uint64_t r, std::uint64_t cap, std::uint64_t reps,
                                        const ReplicaPlan& plan) {
  const std::uint64_t rs[] = {r};
  return backtrack_profile(spec, n, rs, cap, reps, plan).front();
}

SlowdownSandwich slowdown_sandwich(const CookieEnvironmentSpec& spec, std::uint64_t n, double x,
                                   double eps, std::uint64_t reps, const ReplicaPlan& plan) {
  const double nd = static_cast<double>(n);
  const double level = nd * x;
  const auto a = static_cast<std::int64_t>(std::ceil(nd * x));
  const auto b = static_cast<std::int64_t>(std::ceil(nd * (x + eps)));
  struct Flags {
    unsigned char below = 0, late = 0, late_eps = 0, back = 0;
  };
  const auto flags = run_replicas<Flags>(reps, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, "walk", n, i);
    WalkState walk(spec);
    bool reached_a = false, reached_b = false, dropped = false;
    for (std::uint64_t k = 0; k < n; ++k) {
      walk.step(rng);
      const auto pos = walk.position();
      if (pos == a) reached_a = true;
      if (reached_b && static_cast<double>(pos) < level) dropped = true;
      if (pos == b) reached_b = true;
    }
    Flags f;
    f.below = static_cast<double>(walk.position()) < level;
    f.late = !reached_a;
    f.late_eps = !reached_b;
    f.back = dropped;
    return f;
  });
  std::uint64_t below = 0, late = 0, late_eps = 0, back = 0;
  for (const auto& f : flags) {
    below += f.below;
    late += f.late;
    late_eps += f.late_eps;
    back += f.back;
  }
  SlowdownSandwich s;
  s.n = n;
  s.below = frequency(below, reps);
  s.hit_late = frequency(late, reps);
  s.hit_late_eps = frequency(late_eps, reps);
  s.backtrack_eps = frequency(back, reps);
  return s;
}

}  // namespace erw
