#include "erw/cookie_env.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace erw;

TEST_SUITE("cookie-env") {

TEST_CASE("delta of the canonical environments") {
  CHECK(compute_delta(CookieEnvironmentSpec::uniform(3, 0.8)) == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(compute_delta(CookieEnvironmentSpec::uniform(5, 0.75)) == doctest::Approx(2.5).epsilon(1e-14));
  auto sym = CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.1})}, {0.5, CookieVector({0.9})}});
  CHECK(std::abs(compute_delta(sym)) < 1e-15);
}

TEST_CASE("classification") {
  auto r = classify(CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.1})}, {0.5, CookieVector({0.9})}}));
  CHECK(r.recurrence == Recurrence::Recurrent);
  CHECK(r.speed_sign == SpeedSign::Zero);
  r = classify(CookieEnvironmentSpec::uniform(5, 0.75));
  CHECK(r.recurrence == Recurrence::TransientRight);
  CHECK(r.speed_sign == SpeedSign::Positive);
  r = classify(CookieEnvironmentSpec::uniform(3, 0.8));
  CHECK(r.recurrence == Recurrence::TransientRight);
  CHECK(r.speed_sign == SpeedSign::Zero);
}

TEST_CASE("threshold table, boundaries closed") {
  struct Row {
    double delta;
    Recurrence rec;
    SpeedSign speed;
  };
  const Row rows[] = {
      {-2.5, Recurrence::TransientLeft, SpeedSign::Negative}, {-2.0, Recurrence::TransientLeft, SpeedSign::Zero},
      {-1.5, Recurrence::TransientLeft, SpeedSign::Zero},     {-1.0, Recurrence::Recurrent, SpeedSign::Zero},
      {0.0, Recurrence::Recurrent, SpeedSign::Zero},          {1.0, Recurrence::Recurrent, SpeedSign::Zero},
      {1.5, Recurrence::TransientRight, SpeedSign::Zero},     {2.0, Recurrence::TransientRight, SpeedSign::Zero},
      {2.5, Recurrence::TransientRight, SpeedSign::Positive},
  };
  for (const auto& row : rows) {
    CAPTURE(row.delta);
    const auto r = classify_delta(row.delta);
    CHECK(r.recurrence == row.rec);
    CHECK(r.speed_sign == row.speed);
  }
}

TEST_CASE("construction rejects invalid laws") {
  CHECK_THROWS_AS(CookieEnvironmentSpec::deterministic(CookieVector({0.0})), std::invalid_argument);
  CHECK_THROWS_AS(CookieEnvironmentSpec::deterministic(CookieVector({1.0, 0.7})), std::invalid_argument);
  CHECK_THROWS_AS(CookieVector({1.2}), std::invalid_argument);
  CHECK_THROWS_AS(CookieVector(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.3})}, {0.4, CookieVector({0.7})}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.3})}, {0.5, CookieVector({0.7, 0.7})}}),
                  std::invalid_argument);
  // A zero in one component is fine while both products keep positive mass.
  CHECK_NOTHROW(CookieEnvironmentSpec::mixture({{0.5, CookieVector({0.0})}, {0.5, CookieVector({0.9})}}));
  CHECK_NOTHROW(CookieEnvironmentSpec::degenerate(CookieVector({1.0, 1.0})));
}

TEST_CASE("sample_site") {
  Rng rng(1);
  const CookieVector v({0.6, 0.7});
  const auto det = CookieEnvironmentSpec::deterministic(v);
  const auto single = CookieEnvironmentSpec::mixture({{1.0, v}});
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_site(det, rng) == v);
    CHECK(sample_site(single, rng) == v);
  }
  const CookieVector a({0.2}), b({0.8});
  const auto mix = CookieEnvironmentSpec::mixture({{0.5, a}, {0.5, b}});
  int count_a = 0;
  for (int i = 0; i < 100000; ++i) count_a += sample_site(mix, rng) == a;
  CHECK(std::abs(count_a / 1e5 - 0.5) < 0.01);
}

TEST_CASE("mirror") {
  const auto e2 = CookieEnvironmentSpec::uniform(5, 0.75);
  const auto m = mirror(e2);
  for (double p : m.component(0).probs()) CHECK(p == 0.25);
  CHECK(compute_delta(m) == -compute_delta(e2));
  CHECK(mirror(m) == e2);
  const auto srw = CookieEnvironmentSpec::uniform(2, 0.5);
  CHECK(mirror(srw) == srw);
  const auto mix = CookieEnvironmentSpec::mixture({{0.3, CookieVector({0.1, 0.7})}, {0.7, CookieVector({0.9, 0.35})}});
  CHECK(compute_delta(mirror(mix)) == -compute_delta(mix));
  CHECK(mirror(mirror(mix)) == mix);
}

TEST_CASE("exact moments of a mixture") {
  const auto mix = CookieEnvironmentSpec::mixture({{0.25, CookieVector({0.4, 0.5})}, {0.75, CookieVector({0.8, 0.6})}});
  CHECK(mix.mean_cookie(1) == doctest::Approx(0.25 * 0.4 + 0.75 * 0.8));
  CHECK(mix.mean_cookie(3) == 0.5);
  CHECK(mix.mean_product_right() == doctest::Approx(0.25 * 0.2 + 0.75 * 0.48));
  CHECK(mix.mean_product_left() == doctest::Approx(0.25 * 0.3 + 0.75 * 0.08));
}

TEST_CASE("canonical text and hash") {
  const auto a = CookieEnvironmentSpec::uniform(2, 0.7);
  const auto b = CookieEnvironmentSpec::deterministic(CookieVector({0.7, 0.7}));
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != mirror(a).hash());
  CHECK(CookieEnvironmentSpec::degenerate(CookieVector({0.7, 0.7})).hash() != a.hash());
}

}  // TEST_SUITE
