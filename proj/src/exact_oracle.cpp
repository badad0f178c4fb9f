#include "erw/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace erw {

double ExactLaw::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double ExactLaw::prob(const std::vector<std::int64_t>& outcome) const {
  double p = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] == outcome) p += probs[i];
  return p;
}

void ExactLaw::add(std::vector<std::int64_t> outcome, double p) {
  support.push_back(std::move(outcome));
  probs.push_back(p);
}

void ExactLaw::normalize_order() {
  std::map<std::vector<std::int64_t>, double> merged;
  for (std::size_t i = 0; i < support.size(); ++i) merged[support[i]] += probs[i];
  support.clear();
  probs.clear();
  for (auto& [k, p] : merged) add(k, p);
}

// ---------------------------------------------------------------------------
// Path enumeration

namespace {

class PathEnumerator {
 public:
  PathEnumerator(const CookieEnvironmentSpec& spec, std::uint64_t n, std::optional<std::int64_t> target)
      : spec_(spec), n_(static_cast<std::int64_t>(n)), target_(target),
        departures_(2 * n + 3, 0), component_(2 * n + 3, -1) {}

  void run() { visit(0, 0, 1.0, target_ && *target_ == 0); }

  PathLaws laws() const {
    PathLaws out;
    for (const auto& [x, p] : positions_) out.position.add({x}, p);
    if (target_) {
      ExactLaw h;
      double mass = 0.0;
      for (const auto& [t, p] : hits_) {
        h.add({t}, p);
        mass += p;
      }
      h.truncation_mass = std::max(0.0, 1.0 - mass);
      out.hitting = std::move(h);
    }
    return out;
  }

 private:
  std::size_t index(std::int64_t x) const { return static_cast<std::size_t>(x + n_ + 1); }

  void visit(std::int64_t depth, std::int64_t pos, double prob, bool hit) {
    if (prob == 0.0) return;
    if (target_ && !hit && pos == *target_) {
      hits_[depth] += prob;
      hit = true;
    }
    if (depth == n_) {
      positions_[pos] += prob;
      return;
    }
    const std::size_t s = index(pos);
    const std::size_t j = departures_[s] + 1;
    if (j <= spec_.cookies_per_site() && component_[s] < 0) {
      const auto comps = spec_.components();
      for (std::size_t k = 0; k < comps.size(); ++k) {
        component_[s] = static_cast<int>(k);
        branch(depth, pos, prob * comps[k].weight, hit, s, j);
      }
      component_[s] = -1;
      return;
    }
    branch(depth, pos, prob, hit, s, j);
  }

  void branch(std::int64_t depth, std::int64_t pos, double prob, bool hit, std::size_t s, std::size_t j) {
    double right = 0.5, left = 0.5;
    if (j <= spec_.cookies_per_site()) {
      const auto& c = spec_.component(static_cast<std::size_t>(component_[s]));
      right = c.at(j);
      left = c.left_at(j);
    }
    ++departures_[s];
    visit(depth + 1, pos + 1, prob * right, hit);
    visit(depth + 1, pos - 1, prob * left, hit);
    --departures_[s];
  }

  const CookieEnvironmentSpec& spec_;
  std::int64_t n_;
  std::optional<std::int64_t> target_;
  std::vector<std::uint32_t> departures_;
  std::vector<int> component_;
  std::map<std::int64_t, double> positions_;
  std::map<std::int64_t, double> hits_;
};

}  // namespace

PathLaws enumerate_paths(const CookieEnvironmentSpec& spec, std::uint64_t n,
                         std::optional<std::int64_t> hitting_target) {
  if (n > kMaxEnumerationSteps)
    throw std::invalid_argument("enumerate_paths: n > 22 is too large for path enumeration");
  PathEnumerator e(spec, n, hitting_target);
  e.run();
  return e.laws();
}

// ---------------------------------------------------------------------------
// Transition rows of V

namespace {

// Failures before the m-th success for one cookie vector, on 0..j_max.
std::vector<double> failures_pmf(const CookieVector& c, std::uint64_t m, std::uint64_t j_max) {
  std::vector<double> out(j_max + 1, 0.0);
  if (m == 0) {
    out[0] = 1.0;
    return out;
  }
  const std::size_t M = c.size();
  // dist[s][f]: s < m successes and f failures after the trials so far.
  const std::size_t smax = static_cast<std::size_t>(std::min<std::uint64_t>(m, M + 1));
  std::vector<std::vector<double>> dist(smax, std::vector<double>(M + 1, 0.0));
  dist[0][0] = 1.0;
  for (std::size_t t = 1; t <= M; ++t) {
    std::vector<std::vector<double>> next(smax, std::vector<double>(M + 1, 0.0));
    const double right = c.at(t), left = c.left_at(t);
    for (std::size_t s = 0; s < smax; ++s) {
      for (std::size_t f = 0; f + s < t; ++f) {
        const double p = dist[s][f];
        if (p == 0.0) continue;
        if (s + 1 == m) {
          if (f <= j_max) out[f] += p * right;
        } else {
          next[s + 1][f] += p * right;
        }
        next[s][f + 1] += p * left;
      }
    }
    dist = std::move(next);
  }
  // Remaining successes come from fair coins: negative binomial(r, 1/2).
  for (std::size_t s = 0; s < smax; ++s) {
    for (std::size_t f = 0; f <= M; ++f) {
      const double p = dist[s][f];
      if (p == 0.0 || f > j_max) continue;
      const double r = static_cast<double>(m - s);
      double log_pmf = -r * std::log(2.0);
      for (std::uint64_t g = 0; f + g <= j_max; ++g) {
        if (g > 0) log_pmf += std::log((static_cast<double>(g) + r - 1.0) / (2.0 * static_cast<double>(g)));
        out[f + g] += p * std::exp(log_pmf);
      }
    }
  }
  return out;
}

std::vector<double> averaged_failures_pmf(const CookieEnvironmentSpec& spec, std::uint64_t m,
                                          std::uint64_t j_max) {
  std::vector<double> out(j_max + 1, 0.0);
  for (const auto& comp : spec.components()) {
    const auto row = failures_pmf(comp.cookies, m, j_max);
    for (std::size_t j = 0; j <= j_max; ++j) out[j] += comp.weight * row[j];
  }
  return out;
}

ExactLaw law_from_pmf(const std::vector<double>& pmf) {
  ExactLaw law;
  double mass = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    law.add({static_cast<std::int64_t>(j)}, pmf[j]);
    mass += pmf[j];
  }
  law.truncation_mass = std::max(0.0, 1.0 - mass);
  return law;
}

}  // namespace

ExactLaw failures_law(const CookieEnvironmentSpec& spec, std::uint64_t successes, std::uint64_t j_max) {
  return law_from_pmf(averaged_failures_pmf(spec, successes, j_max));
}

ExactLaw transition_row(const CookieEnvironmentSpec& spec, std::uint64_t k, std::uint64_t j_max) {
  return failures_law(spec, k + 1, j_max);
}

Eigen::MatrixXd transition_matrix(const CookieEnvironmentSpec& spec, std::uint64_t k_max) {
  const auto n = static_cast<Eigen::Index>(k_max + 1);
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto row = averaged_failures_pmf(spec, static_cast<std::uint64_t>(k) + 1, k_max);
    for (Eigen::Index j = 0; j < n; ++j) P(k, j) = row[static_cast<std::size_t>(j)];
  }
  return P;
}

std::vector<double> return_probabilities(const CookieEnvironmentSpec& spec, std::uint64_t n_max,
                                         std::uint64_t k_max) {
  const Eigen::MatrixXd P = transition_matrix(spec, k_max);
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(P.rows());
  v(0) = 1.0;
  std::vector<double> out{1.0};
  out.reserve(n_max + 1);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    v = v * P;
    out.push_back(v(0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint law of the first regeneration cycle

SigmaWLaw sigma_w_law(const CookieEnvironmentSpec& spec, const SigmaWBounds& bounds) {
  const std::uint64_t states = bounds.sigma_max * (bounds.v_max + 1) * (bounds.w_max + 1);
  if (states > kMaxOracleStates) throw std::invalid_argument("sigma_w_law: state space too large");
  if (bounds.sigma_max == 0) throw std::invalid_argument("sigma_w_law: sigma_max must be positive");

  const std::uint64_t v_lim = std::min(bounds.v_max, bounds.w_max);
  const std::uint64_t j_max = bounds.w_max;
  std::vector<std::vector<double>> rows(v_lim + 1);
  std::vector<std::vector<double>> cdfs(v_lim + 1);
  for (std::uint64_t v = 0; v <= v_lim; ++v) {
    rows[v] = averaged_failures_pmf(spec, v + 1, j_max);
    cdfs[v].resize(j_max + 1);
    std::partial_sum(rows[v].begin(), rows[v].end(), cdfs[v].begin());
  }

  SigmaWLaw out;
  out.bounds = bounds;
  const auto W = static_cast<std::size_t>(bounds.w_max + 1);
  // alive[v * W + w]: V_i = v >= 1 and W so far = w.
  std::vector<double> alive((v_lim + 1) * W, 0.0), next(alive.size());
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> ends;

  auto spread = [&](std::uint64_t v, std::uint64_t w, double p, std::uint64_t generation) {
    const std::uint64_t room = bounds.w_max - w;       // largest j keeping W <= w_max
    const std::uint64_t top = std::min(room, v_lim);   // largest j kept as a state
    const auto& row = rows[v];
    ends[{generation, w}] += p * row[0];
    for (std::uint64_t j = 1; j <= top; ++j) next[j * W + w + j] += p * row[j];
    const double kept = cdfs[v][top];
    const double within_room = cdfs[v][room];
    out.mass_v_exceeded += p * std::max(0.0, within_room - kept);
    out.mass_w_exceeded += p * std::max(0.0, 1.0 - within_room);
  };

  std::fill(next.begin(), next.end(), 0.0);
  spread(0, 0, 1.0, 1);
  alive.swap(next);
  for (std::uint64_t gen = 2; gen <= bounds.sigma_max; ++gen) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t v = 1; v <= v_lim; ++v)
      for (std::uint64_t w = v; w <= bounds.w_max; ++w) {
        const double p = alive[v * W + w];
        if (p != 0.0) spread(v, w, p, gen);
      }
    alive.swap(next);
  }
  for (double p : alive) out.mass_sigma_exceeded += p;

  for (const auto& [key, p] : ends)
    out.law.add({static_cast<std::int64_t>(key.first), static_cast<std::int64_t>(key.second)}, p);
  out.law.truncation_mass = out.mass_w_exceeded + out.mass_v_exceeded + out.mass_sigma_exceeded;
  return out;
}

MgfBracket exact_mgf(const SigmaWLaw& law, double lambda, double eta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < law.law.support.size(); ++i) {
    const auto sigma = static_cast<double>(law.law.support[i][0]);
    const auto w = static_cast<double>(law.law.support[i][1]);
    sum += law.law.probs[i] * std::exp(lambda * w + eta * sigma);
  }
  MgfBracket b;
  b.lower = std::log(sum);
  b.upper = std::numeric_limits<double>::infinity();
  // Unlisted cycles have W >= floor and W >= sigma - 1; bound exp(λW + ησ) over them.
  const bool boundable = lambda <= 0.0 && (eta <= 0.0 || lambda + eta <= 0.0);
  b.upper_valid = boundable;
  if (!boundable) return b;
  auto weight_bound = [&](double w_floor) {
    if (eta >= 0.0) return std::exp((lambda + eta) * w_floor + eta);
    return std::exp(lambda * w_floor + eta);
  };
  const auto& bd = law.bounds;
  double tail = law.mass_w_exceeded * weight_bound(static_cast<double>(bd.w_max + 1)) +
                law.mass_v_exceeded * weight_bound(static_cast<double>(std::min(bd.v_max, bd.w_max) + 1)) +
                law.mass_sigma_exceeded * weight_bound(static_cast<double>(bd.sigma_max));
  b.upper = std::log(sum + tail);
  return b;
}

MgfBracket exact_mgf(const CookieEnvironmentSpec& spec, double lambda, double eta,
                     const SigmaWBounds& bounds) {
  return exact_mgf(sigma_w_law(spec, bounds), lambda, eta);
}

RootBracket exact_lambda_v_bracket(const SigmaWLaw& law, double lambda) {
  if (!(lambda < 0.0)) throw std::invalid_argument("exact_lambda_v_bracket: lambda must be negative");
  const double p1 = law.law.prob({1, 0});
  if (!(p1 > 0.0)) throw std::invalid_argument("exact_lambda_v_bracket: P(sigma = 1) must be positive");
  const double eta_top = -std::log(p1);
  // Largest η in [0, eta_top] with f(η) <= 0, for f nondecreasing.
  auto sup_nonpositive = [&](auto f) {
    double lo = 0.0, hi = eta_top;
    if (f(lo) > 0.0) return 0.0;
    if (f(hi) <= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    return lo;
  };
  const double eta_lower_edge = sup_nonpositive([&](double eta) { return exact_mgf(law, lambda, eta).lower; });
  const double eta_upper_edge = sup_nonpositive([&](double eta) {
    const auto b = exact_mgf(law, lambda, eta);
    return b.upper_valid ? b.upper : std::numeric_limits<double>::infinity();
  });
  return RootBracket{-eta_lower_edge, -eta_upper_edge};
}

// ---------------------------------------------------------------------------
// Hitting-time representation, composed exactly

ExactLaw representation_law(const CookieEnvironmentSpec& spec, std::uint64_t m, std::uint64_t t_max) {
  if (m == 0) throw std::invalid_argument("representation_law: m must be positive");
  ExactLaw law;
  if (t_max < m) {
    law.truncation_mass = 1.0;
    return law;
  }
  const std::uint64_t s_max = (t_max - m) / 2;
  const auto S = static_cast<std::size_t>(s_max + 1);
  // Rows indexed by the number of required successes.
  std::vector<std::vector<double>> rows(s_max + 2);
  for (std::uint64_t k = 1; k <= s_max + 1; ++k) rows[k] = averaged_failures_pmf(spec, k, s_max);

  // dist[v * S + s]: current V = v, running sum s.
  std::vector<double> dist((s_max + 1) * S, 0.0), next(dist.size());
  dist[0] = 1.0;
  for (std::uint64_t i = 1; i <= m; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t v = 0; v <= s_max; ++v)
      for (std::uint64_t s = v; s <= s_max; ++s) {
        const double p = dist[v * S + s];
        if (p == 0.0) continue;
        const auto& row = rows[v + 1];
        for (std::uint64_t j = 0; s + j <= s_max; ++j) next[j * S + s + j] += p * row[j];
      }
    dist.swap(next);
  }
  std::vector<double> finished(S, 0.0);
  // Immigrant-free continuation from V_m until absorption at 0.
  for (;;) {
    bool any = false;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t s = 0; s <= s_max; ++s) {
      finished[s] += dist[s];
      dist[s] = 0.0;
    }
    for (std::uint64_t v = 1; v <= s_max; ++v)
      for (std::uint64_t s = v; s <= s_max; ++s) {
        const double p = dist[v * S + s];
        if (p == 0.0) continue;
        any = true;
        const auto& row = rows[v];
        for (std::uint64_t j = 0; s + j <= s_max; ++j) next[j * S + s + j] += p * row[j];
      }
    if (!any) break;
    dist.swap(next);
  }
  double mass = 0.0;
  for (std::uint64_t s = 0; s <= s_max; ++s) {
    if (finished[s] == 0.0) continue;
    law.add({static_cast<std::int64_t>(m + 2 * s)}, finished[s]);
    mass += finished[s];
  }
  law.truncation_mass = std::max(0.0, 1.0 - mass);
  return law;
}

// ---------------------------------------------------------------------------
// P(T_n < T_{-1})

namespace {

class ExitSolver {
 public:
  ExitSolver(const CookieEnvironmentSpec& spec, std::uint64_t n)
      : spec_(spec), n_(static_cast<int>(n)), M_(static_cast<int>(spec.cookies_per_site())),
        counts_(n, 0), comps_(n, -1) {}

  double solve() { return value(0); }

 private:
  std::string key(int pos) const {
    std::string k;
    k.reserve(2 * counts_.size() + 1);
    k.push_back(static_cast<char>(pos));
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      k.push_back(static_cast<char>(counts_[i]));
      k.push_back(static_cast<char>(comps_[i]));
    }
    return k;
  }

  double value(int pos) {
    if (pos >= n_) return 1.0;
    if (pos < 0) return 0.0;
    const auto idx = static_cast<std::size_t>(pos);
    if (counts_[idx] >= M_) {
      // Fair steps until the nearest site with cookies left (or an exit).
      int a = pos - 1;
      while (a >= 0 && counts_[static_cast<std::size_t>(a)] >= M_) --a;
      int b = pos + 1;
      while (b < n_ && counts_[static_cast<std::size_t>(b)] >= M_) ++b;
      const double up = static_cast<double>(pos - a) / static_cast<double>(b - a);
      return up * value(b) + (1.0 - up) * value(a);
    }
    const std::string k = key(pos);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    double result = 0.0;
    if (comps_[idx] < 0) {
      const auto comps = spec_.components();
      for (std::size_t c = 0; c < comps.size(); ++c) {
        comps_[idx] = static_cast<int>(c);
        result += comps[c].weight * depart(pos);
      }
      comps_[idx] = -1;
    } else {
      result = depart(pos);
    }
    memo_.emplace(k, result);
    return result;
  }

  double depart(int pos) {
    const auto idx = static_cast<std::size_t>(pos);
    const auto& c = spec_.component(static_cast<std::size_t>(comps_[idx]));
    const auto j = static_cast<std::size_t>(counts_[idx] + 1);
    const double right = c.at(j), left = c.left_at(j);
    ++counts_[idx];
    const double v = (right > 0.0 ? right * value(pos + 1) : 0.0) + (left > 0.0 ? left * value(pos - 1) : 0.0);
    --counts_[idx];
    return v;
  }

  const CookieEnvironmentSpec& spec_;
  int n_;
  int M_;
  std::vector<int> counts_;
  std::vector<int> comps_;
  std::unordered_map<std::string, double> memo_;
};

}  // namespace

double probability_right_before_left(const CookieEnvironmentSpec& spec, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("probability_right_before_left: n must be positive");
  if (n > 100) throw std::invalid_argument("probability_right_before_left: n too large");
  ExitSolver solver(spec, n);
  return solver.solve();
}

double probability_right_before_left_within(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                            std::uint64_t steps) {
  if (n == 0) throw std::invalid_argument("probability_right_before_left_within: n must be positive");
  if (steps > kMaxEnumerationSteps)
    throw std::invalid_argument("probability_right_before_left_within: steps > 22 is too large");
  const auto M = spec.cookies_per_site();
  const auto top = static_cast<std::int64_t>(n);
  std::vector<std::uint32_t> departures(n, 0);
  std::vector<int> comps(n, -1);
  double total = 0.0;
  auto visit = [&](auto&& self, std::int64_t pos, std::uint64_t depth, double prob) -> void {
    if (prob == 0.0 || pos < 0) return;
    if (pos == top) {
      total += prob;
      return;
    }
    if (depth == steps) return;
    const auto s = static_cast<std::size_t>(pos);
    const std::size_t j = departures[s] + 1;
    auto go = [&](double w) {
      double right = 0.5, left = 0.5;
      if (j <= M) {
        const auto& c = spec.component(static_cast<std::size_t>(comps[s]));
        right = c.at(j);
        left = c.left_at(j);
      }
      ++departures[s];
      self(self, pos + 1, depth + 1, prob * w * right);
      self(self, pos - 1, depth + 1, prob * w * left);
      --departures[s];
    };
    if (j <= M && comps[s] < 0) {
      const auto cs = spec.components();
      for (std::size_t k = 0; k < cs.size(); ++k) {
        comps[s] = static_cast<int>(k);
        go(cs[k].weight);
      }
      comps[s] = -1;
    } else {
      go(1.0);
    }
  };
  visit(visit, 0, 0, 1.0);
  return total;
}

double right_before_left_lower_bound(const CookieEnvironmentSpec& spec, std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("right_before_left_lower_bound: n must be at least 2");
  const double start = 0.5 * spec.mean_product_right() * spec.mean_product_left();
  const double climb = std::pow(2.0 / static_cast<double>(n), static_cast<double>(spec.cookies_per_site() + 1));
  return start * climb * 0.5;
}

}  // namespace erw
