#include "erw/exact_oracle.hpp"
#include "erw/rate_fn.hpp"
#include "erw/tail_stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace erw;

namespace {

const auto kE1 = CookieEnvironmentSpec::uniform(1, 0.7);
const auto kE2 = CookieEnvironmentSpec::uniform(5, 0.75);
const auto kE3 = CookieEnvironmentSpec::uniform(3, 0.8);

// Batches are shared across test cases; each is drawn once.
const std::vector<RegenSample>& e1_batch() {
  static const auto b = sample_regenerations(kE1, 200000, 1000, {101, 1});
  return b;
}
const std::vector<RegenSample>& e2_batch() {
  static const auto b = sample_regenerations(kE2, 1000000, 1000000, {102, 1});
  return b;
}
const std::vector<RegenSample>& e2_mirror_batch() {
  static const auto b = sample_regenerations(mirror(kE2), 200000, 256, {103, 1}, "mirror");
  return b;
}

struct Curves {
  RateCurve lv, iv, it;
};

Curves curves_of(const EmpiricalMGF& mgf, std::span<const double> u, std::optional<double> q = std::nullopt) {
  Curves c;
  c.lv = lambda_V_curve(mgf, default_lambda_grid(), {kRootTolerance, q});
  c.iv = legendre(c.lv, u, q);
  c.it = rate_T(c.iv);
  return c;
}

}  // namespace

TEST_SUITE("rate-fn") {

TEST_CASE("point mass at (1, 0) gives identically zero curves") {
  const std::vector<RegenSample> ones(1000, RegenSample{1, 0, false});
  const EmpiricalMGF mgf(ones);
  CHECK(mgf.value(-0.3, 0.4) == doctest::Approx(0.4).epsilon(1e-14));
  const auto u = iv_grid_for(default_x_grid(50));
  const auto c = curves_of(mgf, u);
  for (double v : c.lv.values) CHECK(v == 0.0);
  for (double v : c.iv.values) CHECK(v == 0.0);
  for (double v : c.it.values) CHECK(v == 0.0);
  CHECK(c.it.grid.front() == 1.0);
}

TEST_CASE("Lambda_V on one 0.7 cookie") {
  const EmpiricalMGF mgf(e1_batch());
  const auto far = lambda_V(mgf, -20.0);
  CHECK(std::abs(far.value - std::log(0.7)) < 0.02);

  const auto exact = exact_lambda_v_bracket(sigma_w_law(kE1, {12, 60, 60}), -1.0);
  const auto p = lambda_V(mgf, -1.0);
  CHECK(p.value >= exact.lower - kRootTolerance - 3 * p.se);
  CHECK(p.value <= exact.upper + kRootTolerance + 3 * p.se);

  const auto lv = lambda_V_curve(mgf, default_lambda_grid());
  const double p1 = mgf.sigma_one_fraction();
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
    CAPTURE(lv.grid[i]);
    CHECK(lv.values[i] <= 0.0);
    CHECK(lv.values[i] > std::log(p1) - 3 * lv.se[i] - 1e-9);
  }
}

TEST_CASE("root residual stays inside the tolerance") {
  const EmpiricalMGF mgf(e2_batch());
  for (double l : default_lambda_grid()) {
    const auto p = lambda_V(mgf, l);
    if (p.clamped) continue;
    CAPTURE(l);
    CHECK(std::abs(p.residual) <= kRootTolerance);
  }
}

TEST_CASE("I_V and I_T at the left end") {
  const EmpiricalMGF mgf(e1_batch());
  const auto u = iv_grid_for(default_x_grid());
  const auto c = curves_of(mgf, u);
  CHECK(std::abs(c.iv.values.front() + std::log(0.7)) < 0.02);
  CHECK(c.it.values.front() == c.iv.values.front());
  CHECK(c.it.grid.front() == 1.0);
}

TEST_CASE("positive-speed environment: zero sets") {
  const EmpiricalMGF mgf(e2_batch()), mm(e2_mirror_batch());
  const auto u = iv_grid_for(default_x_grid());
  const auto c = curves_of(mgf, u);
  const double m0 = mgf.mean_W() / mgf.mean_sigma();
  const double v0 = 1.0 / (1.0 + 2.0 * m0);
  const double floor = -c.lv.values.back();
  for (std::size_t i = 0; i < c.iv.size(); ++i) {
    // One local grid step of slack at the edge.
    if (i > 0 && c.iv.grid[i - 1] >= m0) CHECK(c.iv.values[i] <= 0.005);
  }
  // Flat near m0 (heavy right tail of W) but strictly positive below it.
  CHECK(c.iv.at(0.5 * m0) > 0.002);
  CHECK(c.iv.at(0.25 * m0) > 4 * c.iv.at(0.5 * m0));

  const auto ix = rate_X(c.it, curves_of(mm, u).it);
  CHECK(std::abs(ix.values.back() + std::log(0.75)) < 0.02);
  CHECK(std::abs(ix.values.front() + std::log(0.25)) < 0.02);
  const double step = 1.0 / 400;
  for (std::size_t i = 0; i < ix.size(); ++i) {
    const double x = ix.grid[i];
    if (x >= 0.0 && x <= v0 - step) CHECK(ix.values[i] <= x * floor + 0.005);
  }
  CHECK(ix.at(v0 + 0.05) > 0.0);
  CHECK(ix.at(v0 + 0.2) > 0.005);
  CHECK(ix.at(v0 + 0.2) > ix.at(v0 + 0.1));
}

TEST_CASE("all property verdicts pass on the positive-speed environment") {
  const EmpiricalMGF mgf(e2_batch()), mm(e2_mirror_batch());
  const auto u = iv_grid_for(default_x_grid());
  const auto c = curves_of(mgf, u);
  const auto cm = curves_of(mm, u);
  const auto ix = rate_X(c.it, cm.it);
  const auto regime = classify(kE2);
  const double m0 = mgf.mean_W() / mgf.mean_sigma();
  PropertyExpectations ex;
  ex.mean_first_cookie = 0.75;
  ex.mean_first_cookie_left = 0.25;
  ex.floor = -c.lv.values.back();
  ex.floor_left = -cm.lv.values.back();
  ex.zero_edge = m0;
  auto check_all = [](const PropertyReport& r) {
    INFO(r.to_text());
    CHECK(r.all_pass());
  };
  check_all(check_properties(c.lv, regime, ex));
  check_all(check_properties(c.iv, regime, ex));
  ex.zero_edge = 1.0 + 2.0 * m0;
  check_all(check_properties(c.it, regime, ex));
  ex.zero_edge = 1.0 / (1.0 + 2.0 * m0);
  check_all(check_properties(ix, regime, ex));
}

TEST_CASE("zero-speed transient environment: I_X vanishes only at 0") {
  const auto batch = sample_regenerations(kE3, 300000, 1000000, {104, 1});
  const auto mb = sample_regenerations(mirror(kE3), 100000, 256, {105, 1}, "mirror");
  const EmpiricalMGF mgf(batch), mm(mb);
  const double q = hill_W(batch).exponent;
  REQUIRE(q < 1.0);
  const auto u = iv_grid_for(default_x_grid());
  const auto c = curves_of(mgf, u, q);
  const auto cm = curves_of(mm, u);
  const auto ix = rate_X(c.it, cm.it);
  PropertyExpectations ex;
  ex.mean_first_cookie = 0.8;
  ex.mean_first_cookie_left = 0.2;
  ex.floor = -c.lv.values.back();
  ex.floor_left = -cm.lv.values.back();
  const auto rep = check_properties(ix, classify(kE3), ex);
  for (const auto& v : rep.verdicts)
    if (v.name == "I_X.zero_set") {
      INFO(v.detail);
      CHECK(v.pass);
    }
}

TEST_CASE("symmetric walk: I_X is even") {
  const auto srw = CookieEnvironmentSpec::uniform(1, 0.5);
  const auto a = sample_regenerations(srw, 100000, 256, {106, 1});
  const auto b = sample_regenerations(mirror(srw), 100000, 256, {107, 1});
  const EmpiricalMGF ma(a), mb(b);
  const auto u = iv_grid_for(default_x_grid(100));
  const auto ix = rate_X(curves_of(ma, u).it, curves_of(mb, u).it);
  const std::size_t n = ix.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    REQUIRE(ix.grid[i] == doctest::Approx(-ix.grid[j]));
    CHECK(std::abs(ix.values[i] - ix.values[j]) <= 2.0 * std::hypot(ix.se[i], ix.se[j]) + 1e-3);
  }
}

TEST_CASE("transient-left V: the infimum of I_V is still zero") {
  const auto batch = sample_regenerations(mirror(kE1), 100000, 256, {108, 1});
  const EmpiricalMGF mgf(batch);
  const auto c = curves_of(mgf, iv_grid_for(default_x_grid()));
  const double inf = *std::min_element(c.iv.values.begin(), c.iv.values.end());
  const double floor = -c.lv.values.back();
  CHECK(inf - floor <= 0.02);
}

TEST_CASE("Legendre transform applied twice returns Lambda_V") {
  const EmpiricalMGF mgf(e2_batch());
  const auto lv = lambda_V_curve(mgf, default_lambda_grid());
  // Fine u-grid so the back transform resolves every slope.
  std::vector<double> u;
  for (int k = 0; k <= 4000; ++k) u.push_back(k * 0.002);
  const auto iv = legendre(lv, u);
  const auto back = legendre_back(iv, lv.grid);
  for (std::size_t i = 4; i + 4 < lv.size(); ++i) {
    CAPTURE(lv.grid[i]);
    const double interp = std::abs(lv.grid[i]) * 0.002 + 1e-4;
    CHECK(std::abs(back[i] - lv.values[i]) <= 2 * interp);
  }
}

TEST_CASE("a non-convex curve fails the convexity verdict") {
  RateCurve c;
  c.kind = CurveKind::IV;
  c.grid = {0.0, 0.1, 0.2, 0.3, 0.4};
  c.values = {0.3, 0.2, 0.19, 0.05, 0.0};
  c.se.assign(5, 0.0);
  c.unreliable.assign(5, 0);
  const auto rep = check_properties(c, classify(kE2), {});
  bool seen = false;
  for (const auto& v : rep.verdicts)
    if (v.name == "I_V.convex") {
      seen = true;
      CHECK_FALSE(v.pass);
    }
  CHECK(seen);
  CHECK(min_second_difference(c) < 0.0);
}

TEST_CASE("grids") {
  const auto g = default_lambda_grid();
  REQUIRE(g.size() == 26);
  CHECK(g.front() == -16.0);
  CHECK(g[24] == doctest::Approx(-std::ldexp(1.0, -10)));
  CHECK(g.back() == 0.0);
  const auto x = default_x_grid(8);
  CHECK(x.front() == 0.125);
  CHECK(x.back() == 1.0);
  const auto u = iv_grid_for(x);
  CHECK(u.front() == 0.0);
  CHECK(u.back() == doctest::Approx(3.5));
}

}  // TEST_SUITE
