#include "erw/branching_sim.hpp"
#include "erw/exact_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <map>

using namespace erw;

namespace {

const auto kAllRight = CookieEnvironmentSpec::degenerate(CookieVector({1.0, 1.0, 1.0}));
const auto kSrw = CookieEnvironmentSpec::uniform(1, 0.5);
const auto kE1 = CookieEnvironmentSpec::uniform(1, 0.7);
const auto kE2 = CookieEnvironmentSpec::uniform(5, 0.75);
const auto kE3 = CookieEnvironmentSpec::uniform(3, 0.8);

}  // namespace

TEST_SUITE("branching-sim") {

TEST_CASE("all-right site never fails") {
  Rng rng(1);
  // F_{k+1} only reads cookie trials while k + 1 <= M.
  for (std::uint64_t k : {0u, 1u, 2u}) CHECK(step_V(k, kAllRight.component(0), rng) == 0);
  for (int i = 0; i < 100; ++i) {
    const auto s = sample_regeneration(kAllRight, 100, rng);
    CHECK(s.sigma == 1);
    CHECK(s.W == 0);
  }
  for (std::uint64_t n : {1u, 4u, 30u}) {
    const auto d = hitting_time_via_representation(kAllRight, n, 1000, rng);
    CHECK(d.value == n);
    CHECK_FALSE(d.censored);
  }
  const std::vector<RegenSample> ones(50, RegenSample{1, 0, false});
  CHECK(estimate_speed_regen(ones).value == 1.0);
}

TEST_CASE("fair site from 0 is geometric") {
  constexpr std::uint64_t reps = 100000;
  std::map<std::uint64_t, std::uint64_t> count;
  Rng rng(2);
  for (std::uint64_t i = 0; i < reps; ++i) ++count[step_V(0, kSrw.component(0), rng)];
  for (std::uint64_t k = 0; k <= 5; ++k) {
    const double p = std::ldexp(1.0, -int(k) - 1);
    const double sd = std::sqrt(p * (1 - p) / reps);
    CAPTURE(k);
    CHECK(std::abs(double(count[k]) / reps - p) < 4 * sd);
  }
}

TEST_CASE("one 0.7 cookie from 0 matches the exact row") {
  constexpr std::uint64_t reps = 100000, jmax = 40;
  const auto row = transition_row(kE1, 0, jmax);
  CHECK(row.prob({0}) == doctest::Approx(0.7));
  for (std::int64_t j = 1; j <= 6; ++j) CHECK(row.prob({j}) == doctest::Approx(0.3 * std::ldexp(1.0, -int(j))));
  std::vector<double> freq(jmax + 1, 0.0), exact(jmax + 1, 0.0);
  Rng rng(3);
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto v = step_V(0, kE1.component(0), rng);
    if (v <= jmax) freq[v] += 1.0 / reps;
  }
  for (std::uint64_t j = 0; j <= jmax; ++j) exact[j] = row.prob({std::int64_t(j)});
  CHECK(total_variation(freq, exact) < 0.01);
}

TEST_CASE("step_V marginals agree with exact rows for k <= 5") {
  constexpr std::uint64_t reps = 100000, jmax = 60;
  Rng rng(4);
  for (std::uint64_t k = 0; k <= 5; ++k) {
    const auto row = transition_row(kE2, k, jmax);
    std::map<std::uint64_t, std::uint64_t> count;
    for (std::uint64_t i = 0; i < reps; ++i) ++count[step_V(k, kE2.component(0), rng)];
    for (std::uint64_t j = 0; j <= 8; ++j) {
      const double p = row.prob({std::int64_t(j)});
      const double sd = std::sqrt(p * (1 - p) / reps);
      CAPTURE(k);
      CAPTURE(j);
      CHECK(std::abs(double(count[j]) / reps - p) <= 4.5 * sd + 1e-12);
    }
  }
}

TEST_CASE("P(sigma = 1) is the mean first cookie") {
  const auto batch = sample_regenerations(kE1, 100000, 100, {5, 1});
  std::uint64_t ones = 0;
  for (const auto& s : batch) ones += s.sigma == 1;
  CHECK(std::abs(double(ones) / batch.size() - 0.7) < 0.005);
}

TEST_CASE("truncated (sigma, W) law matches the oracle") {
  const SigmaWBounds b{6, 12, 12};
  const auto exact = sigma_w_law(kE1, b);
  const auto batch = sample_regenerations(kE1, 1000000, b.sigma_max, {6, 1});
  std::map<std::pair<std::int64_t, std::int64_t>, double> freq;
  for (const auto& s : batch)
    if (!s.censored && s.W <= b.w_max) freq[{std::int64_t(s.sigma), std::int64_t(s.W)}] += 1e-6;
  double tv = 0.0, inside = 0.0;
  for (std::size_t i = 0; i < exact.law.support.size(); ++i) {
    const auto key = std::make_pair(exact.law.support[i][0], exact.law.support[i][1]);
    tv += std::abs(freq[key] - exact.law.probs[i]);
  }
  for (const auto& [k, p] : freq) inside += p;
  tv += std::abs((1.0 - inside) - exact.law.truncation_mass);
  CHECK(tv / 2 < 0.01);
}

TEST_CASE("absorbed chain") {
  Rng rng(7);
  const auto z = sample_absorbed_process(0, kE2, 100, rng);
  CHECK(z.total == 0);
  CHECK(z.generations == 0);
  CHECK_FALSE(z.censored);

  std::uint64_t one_step = 0;
  constexpr std::uint64_t reps = 100000;
  for (std::uint64_t i = 0; i < reps; ++i) one_step += sample_absorbed_process(1, kSrw, 1, rng).total == 0;
  CHECK(std::abs(double(one_step) / reps - 0.5) < 4 * 0.5 / std::sqrt(double(reps)));
}

TEST_CASE("coupled absorbed chain stays below V") {
  for (std::uint64_t run = 0; run < 10000; ++run) {
    Rng rng = replica_rng(8, "couple", 0, run);
    const std::uint64_t n = 1 + run % 12;
    const auto p = coupled_processes(kE2, n, 20, rng);
    REQUIRE(p.V.size() == n + 21);
    REQUIRE(p.absorbed.size() == 21);
    CHECK(p.absorbed[0] == p.V[n]);
    for (std::size_t i = 0; i < p.absorbed.size(); ++i) CHECK(p.absorbed[i] <= p.V[n + i]);
  }
}

TEST_CASE("representation has the parity of n") {
  Rng rng(9);
  for (std::uint64_t n : {1u, 2u, 5u, 12u})
    for (int i = 0; i < 2000; ++i) {
      const auto d = hitting_time_via_representation(kE2, n, 1u << 30, rng);
      REQUIRE_FALSE(d.censored);
      CHECK((d.value - n) % 2 == 0);
      CHECK(d.value >= n);
    }
}

TEST_CASE("cycle invariants") {
  const auto batch = sample_regenerations(kE2, 200000, 1000000, {10, 1});
  std::vector<double> sig, w;
  for (const auto& s : batch) {
    REQUIRE_FALSE(s.censored);
    CHECK(s.W + 1 >= s.sigma);
    sig.push_back(double(s.sigma));
    w.push_back(double(s.W));
  }
  const double band = 4.0 / std::sqrt(double(batch.size()));
  CHECK(std::abs(lag1_autocorrelation(sig)) < band);
  CHECK(std::abs(lag1_autocorrelation(w)) < band);
}

TEST_CASE("batches do not depend on the worker count") {
  const auto a = sample_regenerations(kE2, 3000, 10000, {12, 1});
  const auto b = sample_regenerations(kE2, 3000, 10000, {12, 4});
  CHECK(a == b);
}

TEST_CASE("zero-speed regime: the regeneration speed falls with sample size") {
  const auto batch = sample_regenerations(kE3, 100000, 1000000, {13, 1});
  const std::span<const RegenSample> all(batch);
  const double v3 = estimate_speed_regen(all.first(1000)).value;
  const double v4 = estimate_speed_regen(all.first(10000)).value;
  const double v5 = estimate_speed_regen(all).value;
  CHECK(v4 < v3);
  CHECK(v5 < v4);
}

TEST_CASE("censoring trends across regimes") {
  // delta = 0: censor rate keeps falling as the cap grows.
  const auto sym = CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.1})}, {0.5, CookieVector({0.9})}});
  double prev = 1.0;
  for (std::uint64_t cap : {10u, 100u, 1000u}) {
    const double c = censor_rate(sample_regenerations(sym, 20000, cap, {14, 1}));
    CHECK(c < prev);
    prev = c;
  }
  // delta < 0: the censor rate settles at a positive level.
  const auto neg = mirror(kE2);
  const double c2 = censor_rate(sample_regenerations(neg, 2000, 100, {15, 1}));
  const double c3 = censor_rate(sample_regenerations(neg, 2000, 1000, {15, 1}));
  CHECK(c3 > 0.5);
  CHECK(std::abs(c3 - c2) < 0.05);
}

TEST_CASE("estimate_speed_regen refuses heavily censored batches") {
  std::vector<RegenSample> b(100, RegenSample{1, 0, false});
  b[0] = RegenSample{kCensoredSigma, 5, true};
  b[1] = RegenSample{kCensoredSigma, 5, true};
  CHECK_THROWS(estimate_speed_regen(b));
}

}  // TEST_SUITE
