#include "erw/branching_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace erw {

bool CoinSite::outcome(std::size_t j, Rng& rng) {
  while (outcomes_.size() < j) {
    const std::size_t next = outcomes_.size() + 1;
    outcomes_.push_back(rng.bernoulli(cookies_.at(next)) ? 1 : 0);
  }
  return outcomes_[j - 1] != 0;
}

std::uint64_t CoinSite::failures_before(std::uint64_t m, Rng& rng) {
  std::uint64_t successes = 0, failures = 0;
  for (std::size_t j = 1; successes < m; ++j) {
    if (outcome(j, rng)) ++successes;
    else ++failures;
  }
  return failures;
}

std::uint64_t failures_before_success(const CookieVector& cookies, std::uint64_t m, Rng& rng) {
  std::uint64_t failures = 0;
  const std::size_t M = cookies.size();
  for (std::size_t j = 1; j <= M && m > 0; ++j) {
    if (rng.bernoulli(cookies.at(j))) --m;
    else ++failures;
  }
  if (m > 0) failures += rng.fair_failures(m);
  return failures;
}

std::uint64_t step_V(std::uint64_t current, CoinSite& site, Rng& rng) {
  return site.failures_before(current + 1, rng);
}

std::uint64_t step_V(std::uint64_t current, const CookieVector& cookies, Rng& rng) {
  return failures_before_success(cookies, current + 1, rng);
}

RegenSample sample_regeneration(const CookieEnvironmentSpec& spec, std::uint64_t cap, Rng& rng) {
  if (cap == 0) throw std::invalid_argument("sample_regeneration: cap must be positive");
  RegenSample s;
  std::uint64_t v = 0;
  for (std::uint64_t i = 1; i <= cap; ++i) {
    v = step_V(v, spec.component(sample_component(spec, rng)), rng);
    s.W += v;
    if (v == 0) {
      s.sigma = i;
      return s;
    }
  }
  s.sigma = kCensoredSigma;
  s.censored = true;
  return s;
}

std::vector<RegenSample> sample_regenerations(const CookieEnvironmentSpec& spec, std::uint64_t count,
                                              std::uint64_t cap, const ReplicaPlan& plan,
                                              std::string_view tag) {
  return run_replicas<RegenSample>(count, plan.workers, [&](std::size_t i) {
    Rng rng = replica_rng(plan.master_seed, tag, cap, i);
    return sample_regeneration(spec, cap, rng);
  });
}

AbsorbedResult sample_absorbed_process(std::uint64_t start, const CookieEnvironmentSpec& spec,
                                       std::uint64_t cap, Rng& rng) {
  AbsorbedResult r;
  std::uint64_t v = start;
  while (v > 0) {
    if (r.generations == cap) {
      r.censored = true;
      return r;
    }
    v = failures_before_success(spec.component(sample_component(spec, rng)), v, rng);
    r.total += v;
    ++r.generations;
  }
  return r;
}

AbsorbedResult sample_absorbed_process(std::uint64_t start, std::span<CoinSite> sites,
                                       std::uint64_t cap, Rng& rng) {
  AbsorbedResult r;
  std::uint64_t v = start;
  while (v > 0) {
    if (r.generations == cap || r.generations == sites.size()) {
      r.censored = true;
      return r;
    }
    v = sites[r.generations].failures_before(v, rng);
    r.total += v;
    ++r.generations;
  }
  return r;
}

CoupledPaths coupled_processes(const CookieEnvironmentSpec& spec, std::uint64_t n, std::uint64_t extra,
                               Rng& rng) {
  std::vector<CoinSite> sites;
  sites.reserve(n + extra);
  for (std::uint64_t i = 0; i < n + extra; ++i) sites.emplace_back(sample_site(spec, rng));
  CoupledPaths p;
  p.V.assign(n + extra + 1, 0);
  for (std::uint64_t i = 0; i < n + extra; ++i) p.V[i + 1] = step_V(p.V[i], sites[i], rng);
  p.absorbed.assign(extra + 1, 0);
  p.absorbed[0] = p.V[n];
  for (std::uint64_t i = 1; i <= extra; ++i)
    p.absorbed[i] = sites[n + i - 1].failures_before(p.absorbed[i - 1], rng);
  return p;
}

RepresentationDraw hitting_time_via_representation(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                                   std::uint64_t cap, Rng& rng) {
  if (n == 0) throw std::invalid_argument("hitting_time_via_representation: n must be positive");
  RepresentationDraw d;
  d.value = n;
  std::uint64_t v = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    v = step_V(v, spec.component(sample_component(spec, rng)), rng);
    d.value += 2 * v;
    if (d.value > cap) {
      d.censored = true;
      return d;
    }
  }
  while (v > 0) {
    v = failures_before_success(spec.component(sample_component(spec, rng)), v, rng);
    d.value += 2 * v;
    if (d.value > cap) {
      d.censored = true;
      return d;
    }
  }
  return d;
}

double censor_rate(std::span<const RegenSample> samples) {
  if (samples.empty()) return 0.0;
  std::uint64_t c = 0;
  for (const auto& s : samples) c += s.censored;
  return static_cast<double>(c) / static_cast<double>(samples.size());
}

SpeedEstimate estimate_speed_regen(std::span<const RegenSample> samples) {
  SpeedEstimate e;
  e.censor_rate = censor_rate(samples);
  if (samples.empty()) throw std::invalid_argument("estimate_speed_regen: no samples");
  if (e.censor_rate > 0.01)
    throw std::runtime_error("estimate_speed_regen: censor rate above 1%, ratio estimate would be biased");
  double sum_sigma = 0.0, sum_len = 0.0;
  std::uint64_t n = 0;
  for (const auto& s : samples) {
    if (s.censored) continue;
    sum_sigma += static_cast<double>(s.sigma);
    sum_len += static_cast<double>(s.sigma) + 2.0 * static_cast<double>(s.W);
    ++n;
  }
  e.cycles = n;
  const double nd = static_cast<double>(n);
  const double a = sum_sigma / nd, b = sum_len / nd;
  e.value = a / b;
  double var = 0.0;
  for (const auto& s : samples) {
    if (s.censored) continue;
    const double sigma = static_cast<double>(s.sigma);
    const double resid = sigma - e.value * (sigma + 2.0 * static_cast<double>(s.W));
    var += resid * resid;
  }
  e.se = n > 1 ? std::sqrt(var / (nd - 1) / nd) / b : 0.0;
  return e;
}

}  // namespace erw
