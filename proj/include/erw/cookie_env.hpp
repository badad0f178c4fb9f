#pragma once

#include "erw/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace erw {

/// Cookie strengths ω(1..M) at one site: the probability of a step to the right
/// on the j-th visit. Beyond M the walk steps like a fair coin.
class CookieVector {
 public:
  CookieVector() = default;
  explicit CookieVector(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  /// ω(j) for 1-based visit index j; 1/2 for j > M.
  double at(std::size_t j) const noexcept { return j >= 1 && j <= probs_.size() ? probs_[j - 1] : 0.5; }
  /// 1 - ω(j) for 1-based j; 1/2 for j > M.
  double left_at(std::size_t j) const noexcept {
    return j >= 1 && j <= left_.size() ? left_[j - 1] : 0.5;
  }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> left_probs() const noexcept { return left_; }

  /// Swaps right and left probabilities. The complements are stored, so
  /// mirroring twice restores the vector bit for bit.
  CookieVector mirrored() const;

  friend bool operator==(const CookieVector&, const CookieVector&) = default;

 private:
  std::vector<double> probs_;
  std::vector<double> left_;
};

struct MixtureComponent {
  double weight = 1.0;
  CookieVector cookies;
  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// The i.i.d. per-site law of the cookie vector: a point mass or a finite
/// mixture. Immutable once constructed; construction checks that weights sum
/// to one and that both all-right and all-left cookie runs have positive mass.
class CookieEnvironmentSpec {
 public:
  static CookieEnvironmentSpec deterministic(CookieVector cookies);
  static CookieEnvironmentSpec mixture(std::vector<MixtureComponent> components);
  /// All M cookies equal to p.
  static CookieEnvironmentSpec uniform(std::size_t M, double p);
  /// A point mass that skips the ellipticity check, for boundary cases such as
  /// ω ≡ 1. Not a valid environment for the theory; useful as a test fixture.
  static CookieEnvironmentSpec degenerate(CookieVector cookies);

  std::size_t cookies_per_site() const noexcept { return M_; }
  bool is_deterministic() const noexcept { return deterministic_; }
  bool is_elliptic() const noexcept { return elliptic_; }
  std::span<const MixtureComponent> components() const noexcept { return components_; }
  const CookieVector& component(std::size_t k) const { return components_.at(k).cookies; }

  /// E[ω_0(j)].
  double mean_cookie(std::size_t j) const;
  /// E[prod_{j<=M} ω_0(j)].
  double mean_product_right() const;
  /// E[prod_{j<=M} (1 - ω_0(j))].
  double mean_product_left() const;

  /// Canonical text form; equal specs produce equal strings.
  std::string canonical() const;
  std::uint64_t hash() const;

  friend bool operator==(const CookieEnvironmentSpec&, const CookieEnvironmentSpec&) = default;

 private:
  CookieEnvironmentSpec(std::size_t M, bool deterministic, std::vector<MixtureComponent> components,
                        bool elliptic = true);
  void validate() const;

  std::size_t M_ = 0;
  bool deterministic_ = true;
  bool elliptic_ = true;
  std::vector<MixtureComponent> components_;
};

enum class Recurrence { TransientLeft, Recurrent, TransientRight };
enum class SpeedSign { Negative, Zero, Positive };

struct RegimeReport {
  double delta = 0.0;
  Recurrence recurrence = Recurrence::Recurrent;
  SpeedSign speed_sign = SpeedSign::Zero;
};

const char* to_string(Recurrence r);
const char* to_string(SpeedSign s);

/// Expected total drift per site, E[sum_j (2 ω_0(j) - 1)].
double compute_delta(const CookieEnvironmentSpec& spec);

RegimeReport classify_delta(double delta);
RegimeReport classify(const CookieEnvironmentSpec& spec);

std::size_t sample_component(const CookieEnvironmentSpec& spec, Rng& rng);
CookieVector sample_site(const CookieEnvironmentSpec& spec, Rng& rng);

/// Replaces every cookie strength p by 1 - p.
CookieEnvironmentSpec mirror(const CookieEnvironmentSpec& spec);

}  // namespace erw
