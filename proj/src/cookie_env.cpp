#include "erw/cookie_env.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace erw {

namespace {

constexpr double kWeightTolerance = 1e-12;

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

CookieVector::CookieVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("cookie vector needs M >= 1 entries");
  left_.reserve(probs_.size());
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("cookie strength outside [0,1]");
    left_.push_back(1.0 - p);
  }
}

CookieVector CookieVector::mirrored() const {
  CookieVector out;
  out.probs_ = left_;
  out.left_ = probs_;
  return out;
}

CookieEnvironmentSpec::CookieEnvironmentSpec(std::size_t M, bool deterministic,
                                             std::vector<MixtureComponent> components, bool elliptic)
    : M_(M), deterministic_(deterministic), elliptic_(elliptic), components_(std::move(components)) {
  validate();
}

CookieEnvironmentSpec CookieEnvironmentSpec::deterministic(CookieVector cookies) {
  const std::size_t M = cookies.size();
  return CookieEnvironmentSpec(M, true, {MixtureComponent{1.0, std::move(cookies)}});
}

CookieEnvironmentSpec CookieEnvironmentSpec::mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
  const std::size_t M = components.front().cookies.size();
  return CookieEnvironmentSpec(M, false, std::move(components));
}

CookieEnvironmentSpec CookieEnvironmentSpec::degenerate(CookieVector cookies) {
  const std::size_t M = cookies.size();
  return CookieEnvironmentSpec(M, true, {MixtureComponent{1.0, std::move(cookies)}}, false);
}

CookieEnvironmentSpec CookieEnvironmentSpec::uniform(std::size_t M, double p) {
  return deterministic(CookieVector(std::vector<double>(M, p)));
}

void CookieEnvironmentSpec::validate() const {
  if (M_ == 0) throw std::invalid_argument("M must be positive");
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.cookies.size() != M_)
      throw std::invalid_argument("all mixture components must have M cookies");
    if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance)
    throw std::invalid_argument("mixture weights must sum to 1");
  if (elliptic_ && (!(mean_product_right() > 0.0) || !(mean_product_left() > 0.0)))
    throw std::invalid_argument(
        "ellipticity violated: E[prod w(j)] and E[prod (1-w(j))] must both be positive");
}

double CookieEnvironmentSpec::mean_cookie(std::size_t j) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * c.cookies.at(j);
  return s;
}

double CookieEnvironmentSpec::mean_product_right() const {
  double s = 0.0;
  for (const auto& c : components_) {
    double prod = 1.0;
    for (double p : c.cookies.probs()) prod *= p;
    s += c.weight * prod;
  }
  return s;
}

double CookieEnvironmentSpec::mean_product_left() const {
  double s = 0.0;
  for (const auto& c : components_) {
    double prod = 1.0;
    for (double q : c.cookies.left_probs()) prod *= q;
    s += c.weight * prod;
  }
  return s;
}

std::string CookieEnvironmentSpec::canonical() const {
  std::string out = "M=" + std::to_string(M_) + ";law=" + (deterministic_ ? "deterministic" : "mixture");
  if (!elliptic_) out += ";degenerate";
  for (const auto& c : components_) {
    out += ";w=" + format_real(c.weight) + ":[";
    for (std::size_t j = 0; j < c.cookies.size(); ++j) {
      if (j) out += ',';
      out += format_real(c.cookies.probs()[j]);
    }
    out += ']';
  }
  return out;
}

std::uint64_t CookieEnvironmentSpec::hash() const { return fnv1a(canonical()); }

const char* to_string(Recurrence r) {
  switch (r) {
    case Recurrence::TransientLeft: return "transient-left";
    case Recurrence::Recurrent: return "recurrent";
    case Recurrence::TransientRight: return "transient-right";
  }
  return "?";
}

const char* to_string(SpeedSign s) {
  switch (s) {
    case SpeedSign::Negative: return "negative";
    case SpeedSign::Zero: return "zero";
    case SpeedSign::Positive: return "positive";
  }
  return "?";
}

double compute_delta(const CookieEnvironmentSpec& spec) {
  double delta = 0.0;
  for (const auto& c : spec.components()) {
    // p - (1 - p), written with the stored complement so mirroring negates exactly.
    double drift = 0.0;
    for (std::size_t j = 1; j <= c.cookies.size(); ++j) drift += c.cookies.at(j) - c.cookies.left_at(j);
    delta += c.weight * drift;
  }
  return delta;
}

RegimeReport classify_delta(double delta) {
  RegimeReport r;
  r.delta = delta;
  // Closed intervals: the boundary values are recurrent / zero-speed.
  if (delta < -1.0) r.recurrence = Recurrence::TransientLeft;
  else if (delta > 1.0) r.recurrence = Recurrence::TransientRight;
  else r.recurrence = Recurrence::Recurrent;
  if (delta < -2.0) r.speed_sign = SpeedSign::Negative;
  else if (delta > 2.0) r.speed_sign = SpeedSign::Positive;
  else r.speed_sign = SpeedSign::Zero;
  return r;
}

RegimeReport classify(const CookieEnvironmentSpec& spec) { return classify_delta(compute_delta(spec)); }

std::size_t sample_component(const CookieEnvironmentSpec& spec, Rng& rng) {
  const auto comps = spec.components();
  if (comps.size() == 1) return 0;
  double u = rng.uniform();
  for (std::size_t k = 0; k + 1 < comps.size(); ++k) {
    if (u < comps[k].weight) return k;
    u -= comps[k].weight;
  }
  return comps.size() - 1;
}

CookieVector sample_site(const CookieEnvironmentSpec& spec, Rng& rng) {
  return spec.component(sample_component(spec, rng));
}

CookieEnvironmentSpec mirror(const CookieEnvironmentSpec& spec) {
  std::vector<MixtureComponent> comps;
  comps.reserve(spec.components().size());
  for (const auto& c : spec.components()) comps.push_back({c.weight, c.cookies.mirrored()});
  if (!spec.is_elliptic()) return CookieEnvironmentSpec::degenerate(comps.front().cookies);
  if (spec.is_deterministic()) return CookieEnvironmentSpec::deterministic(comps.front().cookies);
  return CookieEnvironmentSpec::mixture(std::move(comps));
}

}  // namespace erw
