#pragma once

#include "erw/cookie_env.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace erw {

/// A finite probability table. Mass outside the listed outcomes is carried in
/// truncation_mass, never renormalised away.
struct ExactLaw {
  std::vector<std::vector<std::int64_t>> support;
  std::vector<double> probs;
  double truncation_mass = 0.0;

  double total() const;
  /// Probability of an outcome (0 if not in the support).
  double prob(const std::vector<std::int64_t>& outcome) const;
  void add(std::vector<std::int64_t> outcome, double p);
  /// Sorts outcomes lexicographically and merges duplicates.
  void normalize_order();
};

inline constexpr std::uint64_t kMaxEnumerationSteps = 22;

struct PathLaws {
  ExactLaw position;               // X_n
  std::optional<ExactLaw> hitting;  // T_m on {T_m <= n}; truncation_mass = P(T_m > n)
};

/// Exact averaged law of X_n by enumerating all 2^n paths; with a hitting
/// target m, also the law of T_m restricted to {T_m <= n}. Rejects n > 22.
PathLaws enumerate_paths(const CookieEnvironmentSpec& spec, std::uint64_t n,
                         std::optional<std::int64_t> hitting_target = std::nullopt);

/// Law of the number of failures before the m-th success at a fresh site.
ExactLaw failures_law(const CookieEnvironmentSpec& spec, std::uint64_t successes, std::uint64_t j_max);

/// P(V_{i+1} = j | V_i = k) for j <= j_max.
ExactLaw transition_row(const CookieEnvironmentSpec& spec, std::uint64_t k, std::uint64_t j_max);

/// Truncated transition matrix of V on states 0..k_max (row k = transition_row(k)).
Eigen::MatrixXd transition_matrix(const CookieEnvironmentSpec& spec, std::uint64_t k_max);

/// P(V_n = 0) for n = 0..n_max from powers of the truncated transition matrix.
/// Mass leaving 0..k_max is dropped, so each value is a lower bound.
std::vector<double> return_probabilities(const CookieEnvironmentSpec& spec, std::uint64_t n_max,
                                         std::uint64_t k_max);

struct SigmaWBounds {
  std::uint64_t sigma_max = 6;
  std::uint64_t w_max = 12;
  std::uint64_t v_max = 12;
};

/// Exact joint law of (σ_1, W_1) on σ <= sigma_max, W <= w_max, with the
/// missing mass split by the first bound that was exceeded.
struct SigmaWLaw {
  ExactLaw law;  // outcomes {sigma, W}
  SigmaWBounds bounds;
  double mass_w_exceeded = 0.0;
  double mass_v_exceeded = 0.0;
  double mass_sigma_exceeded = 0.0;
};

inline constexpr std::uint64_t kMaxOracleStates = 10'000'000;

SigmaWLaw sigma_w_law(const CookieEnvironmentSpec& spec, const SigmaWBounds& bounds);

/// Guaranteed bracket on Λ_{W,σ}(λ, η) = log E[exp(λW + ησ); σ < ∞].
struct MgfBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_valid = false;  // false: only `lower` is certified
};

MgfBracket exact_mgf(const SigmaWLaw& law, double lambda, double eta);
MgfBracket exact_mgf(const CookieEnvironmentSpec& spec, double lambda, double eta, const SigmaWBounds& bounds);

/// Bracket [lower, upper] on Λ_V(λ) = -sup{η : Λ_{W,σ}(λ, η) <= 0}, λ < 0,
/// obtained by solving both edges of the exact MGF bracket.
struct RootBracket {
  double lower = 0.0;
  double upper = 0.0;
};
RootBracket exact_lambda_v_bracket(const SigmaWLaw& law, double lambda);

/// Exact law of m + 2 sum_{i<=m} V_i + 2 sum_i V_i^(m) on values <= t_max,
/// composed from transition rows.
ExactLaw representation_law(const CookieEnvironmentSpec& spec, std::uint64_t m, std::uint64_t t_max);

/// Exact P(T_n < T_{-1}) for the walk started at 0, n >= 1.
double probability_right_before_left(const CookieEnvironmentSpec& spec, std::uint64_t n);

/// P(T_n < T_{-1}, T_n <= steps) by path enumeration (steps <= 22). A lower
/// bound on probability_right_before_left that converges to it as steps grow.
double probability_right_before_left_within(const CookieEnvironmentSpec& spec, std::uint64_t n,
                                            std::uint64_t steps);

/// Explicit lower bound on P(T_n < T_{-1}) from the "alternate between 0 and 1,
/// then climb" strategy: (E[prod w] E[prod (1-w)] / 2) (2/n)^{M+1} / 2, n >= 2.
double right_before_left_lower_bound(const CookieEnvironmentSpec& spec, std::uint64_t n);

}  // namespace erw
