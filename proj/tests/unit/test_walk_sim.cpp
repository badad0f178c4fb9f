#include "erw/exact_oracle.hpp"
#include "erw/walk_sim.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <map>

using namespace erw;

namespace {

const auto kAllRight = CookieEnvironmentSpec::degenerate(CookieVector({1.0, 1.0}));
const auto kSrw = CookieEnvironmentSpec::uniform(1, 0.5);
const auto kE1 = CookieEnvironmentSpec::uniform(1, 0.7);
const auto kE2 = CookieEnvironmentSpec::uniform(5, 0.75);

}  // namespace

TEST_SUITE("walk-sim") {

TEST_CASE("all-right cookies walk straight") {
  Rng rng(3);
  for (std::uint64_t n : {1u, 7u, 100u}) CHECK(simulate_position(kAllRight, n, rng) == static_cast<std::int64_t>(n));
  const auto h = hitting_time(kAllRight, 12, 100, rng);
  REQUIRE_FALSE(h.censored());
  CHECK(*h.time == 12);
  ReplicaPlan plan{5, 2};
  const auto v = estimate_speed(kAllRight, 1000, 50, plan);
  CHECK(v.value == 1.0);
  CHECK(v.se == 0.0);
  CHECK(slowdown_event_probability(kAllRight, 256, 0.9, 200, plan).hits == 0);
  CHECK(backtrack_probability(kAllRight, 10, 4, 200, 100, plan).event.hits == 0);
}

TEST_CASE("simple symmetric walk has mean zero") {
  constexpr std::uint64_t n = 100, reps = 100000;
  const auto v = estimate_speed(kSrw, n, reps, {11, 1});
  // Mean of X_n is n v; tolerance 3 sqrt(n) / 10^{2.5}.
  CHECK(std::abs(v.value * n) < 3.0 * std::sqrt(double(n)) / std::pow(10.0, 2.5));
  CHECK(std::abs(v.value) < 3.0 * v.se);
}

TEST_CASE("X_3 under one 0.7 cookie matches path enumeration") {
  constexpr std::uint64_t reps = 100000;
  const auto exact = enumerate_paths(kE1, 3).position;
  std::map<std::int64_t, double> freq;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng rng = replica_rng(17, "walk", 3, i);
    freq[simulate_position(kE1, 3, rng)] += 1.0 / reps;
  }
  double tv = 0.0;
  for (std::int64_t x = -3; x <= 3; ++x) tv += std::abs(freq[x] - exact.prob({x}));
  CHECK(tv / 2 < 0.01);
}

TEST_CASE("P(T_2 = 2) under one 0.7 cookie") {
  const auto laws = enumerate_paths(kE1, 2, 2);
  const double p = laws.hitting->prob({2});
  CHECK(p == doctest::Approx(0.7 * 0.7));
  std::uint64_t hits = 0;
  constexpr std::uint64_t reps = 100000;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng rng = replica_rng(19, "hit", 2, i);
    const auto h = hitting_time(kE1, 2, 10000, rng);
    hits += !h.censored() && *h.time == 2;
  }
  CHECK(std::abs(double(hits) / reps - p) < 0.005);
}

TEST_CASE("hitting -n equals hitting +n under the mirror in law") {
  constexpr std::uint64_t reps = 100000, cap = 10000;
  std::vector<double> left(reps), right(reps);
  const auto mirrored = mirror(kE1);
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng a = replica_rng(23, "left", 5, i), b = replica_rng(23, "right", 5, i);
    const auto hl = hitting_time(kE1, -5, cap, a);
    const auto hr = hitting_time(mirrored, 5, cap, b);
    left[i] = hl.censored() ? double(cap + 1) : double(*hl.time);
    right[i] = hr.censored() ? double(cap + 1) : double(*hr.time);
  }
  CHECK(ks_two_sample(left, right).p_value > 0.01);
}

TEST_CASE("nearest-neighbour steps and visit bookkeeping") {
  Rng rng(29);
  WalkState w(kE2);
  for (int k = 0; k < 5000; ++k) {
    const auto before = w.position();
    const int s = w.step(rng);
    CHECK((s == 1 || s == -1));
    CHECK(w.position() - before == s);
  }
  CHECK(w.step_count() == 5000);
  CHECK(w.path_min() <= w.position());
  CHECK(w.path_max() >= w.position());
}

TEST_CASE("after M departures a site is a fair coin") {
  Rng rng(31);
  WalkState w(kE2);
  std::uint64_t post = 0, right = 0;
  while (post < 100000) {
    const auto j = w.departures(w.position()) + 1;
    const double p = w.right_probability(rng);
    if (j > kE2.cookies_per_site()) {
      CHECK(p == 0.5);
      ++post;
      right += w.step(rng) == 1;
    } else {
      CHECK(p == 0.75);
      w.step(rng);
    }
    if (w.step_count() % 4096 == 0) w.reset();
  }
  // Binomial 4-sigma band.
  CHECK(std::abs(double(right) / post - 0.5) < 4.0 * 0.5 / std::sqrt(double(post)));
}

TEST_CASE("mirror flips the law of X_n exactly") {
  const auto mix = CookieEnvironmentSpec::mixture({{0.4, CookieVector({0.9, 0.3})}, {0.6, CookieVector({0.6, 0.8})}});
  for (std::uint64_t n : {3u, 8u}) {
    const auto a = enumerate_paths(mix, n).position;
    const auto b = enumerate_paths(mirror(mix), n).position;
    for (std::int64_t x = -std::int64_t(n); x <= std::int64_t(n); ++x)
      CHECK(a.prob({x}) == doctest::Approx(b.prob({-x})).epsilon(1e-12));
  }
}

TEST_CASE("slowdown events are nested in x") {
  ReplicaPlan plan{37, 1};
  const auto lo = slowdown_event_probability(kE2, 512, 0.1, 20000, plan);
  const auto hi = slowdown_event_probability(kE2, 512, 0.3, 20000, plan);
  CHECK(lo.hits <= hi.hits);
}

TEST_CASE("backtracking decreases in r") {
  const std::uint64_t rs[] = {1, 2, 4, 8, 16};
  const auto prof = backtrack_profile(kE2, 10, rs, 2000, 5000, {41, 1});
  for (std::size_t k = 1; k < prof.size(); ++k) CHECK(prof[k].event.hits <= prof[k - 1].event.hits);
  for (const auto& b : prof) CHECK(b.half_cap.hits <= b.event.hits);
}

TEST_CASE("confinement to n^{1/3} decays slower than exponentially") {
  // -log P(|X_n| <= n^{1/3}) / n must fall as n grows, and
  // -log P / n^{1/3} must stay bounded.
  ReplicaPlan plan{43, 1};
  std::vector<double> per_n, per_cube;
  for (std::uint64_t n : {64u, 125u, 216u, 343u, 512u}) {
    const auto p = confinement_probability(kE2, n, std::cbrt(double(n)), 100000, plan);
    REQUIRE(p.hits >= 30);
    per_n.push_back(-std::log(p.p) / double(n));
    per_cube.push_back(-std::log(p.p) / std::cbrt(double(n)));
  }
  for (std::size_t k = 1; k < per_n.size(); ++k) CHECK(per_n[k] < per_n[k - 1]);
  CHECK(per_cube.back() < 1.5 * per_cube.front());
}

TEST_CASE("invalid arguments") {
  Rng rng(1);
  CHECK_THROWS_AS(hitting_time(kE1, 10, 5, rng), std::invalid_argument);
  CHECK_THROWS_AS(slowdown_event_probability(kE2, 10, 1.5, 10, {}), std::invalid_argument);
}

}  // TEST_SUITE
