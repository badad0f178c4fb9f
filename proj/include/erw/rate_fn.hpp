#pragma once

#include "erw/branching_sim.hpp"
#include "erw/cookie_env.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace erw {

/// Λ_{W,σ}(λ, η) = log E[exp(λW + ησ); σ < ∞] estimated from a batch of cycles.
/// Censored cycles count in the denominator with weight zero. Samples are
/// compressed to distinct (σ, W) pairs, so queries cost O(#distinct).
class EmpiricalMGF {
 public:
  explicit EmpiricalMGF(std::span<const RegenSample> samples);

  struct Query {
    double value = 0.0;  // log of the empirical mean weight; -inf if all weights vanish
    double se = 0.0;     // delta-method standard error of `value`
    double ess = 0.0;    // (sum w)^2 / sum w^2
    double mean_sigma = 0.0;  // tilted E[σ]: ∂Λ/∂η
    double mean_W = 0.0;      // tilted E[W]: ∂Λ/∂λ
    bool reliable() const noexcept { return ess >= 100.0; }
  };
  Query query(double lambda, double eta) const;
  double value(double lambda, double eta) const { return query(lambda, eta).value; }

  std::uint64_t size() const noexcept { return total_; }
  std::uint64_t censored() const noexcept { return censored_; }
  /// Fraction of cycles with σ = 1, an estimate of E[ω_0(1)].
  double sigma_one_fraction() const noexcept;
  /// Means over uncensored cycles.
  double mean_sigma() const noexcept { return mean_sigma_; }
  double mean_W() const noexcept { return mean_w_; }
  /// Uncensored W values (for tail estimation), in the original sample order.
  const std::vector<double>& w_values() const noexcept { return w_values_; }

 private:
  struct Cell {
    double sigma;
    double w;
    double count;
  };
  std::vector<Cell> cells_;
  std::vector<double> w_values_;
  std::uint64_t total_ = 0;
  std::uint64_t censored_ = 0;
  std::uint64_t sigma_one_ = 0;
  double mean_sigma_ = 0.0;
  double mean_w_ = 0.0;
};

inline constexpr double kRootTolerance = 1e-4;

/// One solved node of Λ_V.
struct LambdaVPoint {
  double lambda = 0.0;
  double value = 0.0;  // Λ_V(λ) = -η*
  double eta = 0.0;    // η*
  double residual = 0.0;  // Λ_{W,σ}(λ, η*)
  double se = 0.0;     // standard error of Λ_V(λ)
  double slope = 0.0;  // Λ_V'(λ) from implicit differentiation
  double ess = 0.0;
  bool unreliable = false;
  bool clamped = false;  // no root in the expanded bracket
};

/// Λ_V(λ) = -sup{η : Λ_{W,σ}(λ, η) <= 0} for λ <= 0 by bisection in η.
LambdaVPoint lambda_V(const EmpiricalMGF& mgf, double lambda, double tol = kRootTolerance);

enum class CurveKind { LambdaV, IV, IT, IX };
const char* to_string(CurveKind k);

/// A tabulated function on a sorted grid. `slopes` is filled for Λ_V only.
struct RateCurve {
  CurveKind kind = CurveKind::IV;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> se;
  std::vector<double> slopes;
  std::vector<unsigned char> unreliable;
  // Summary filled by summarize().
  std::optional<std::pair<double, double>> zero_set;  // [lo, hi] of grid points with value <= zero_tol
  double zero_tol = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;

  std::size_t size() const noexcept { return grid.size(); }
  /// Linear interpolation (grid must bracket x).
  double at(double x) const;
};

/// Fills the zero-set interval and endpoint values. The zero set is the hull of
/// grid points with value <= zero_tol.
void summarize(RateCurve& curve, double zero_tol);

/// The default λ-grid: 25 geometric points from -2^4 to -2^-10, then 0.
std::vector<double> default_lambda_grid();

struct LambdaVCurveOptions {
  double tol = kRootTolerance;
  /// Tail index of W_1. Below 1 the mean of W is infinite and Λ_V has an
  /// infinite slope at 0; the slope reported at the 0 node is then +inf.
  std::optional<double> w_tail_index;
};

RateCurve lambda_V_curve(const EmpiricalMGF& mgf, std::span<const double> lambdas,
                         const LambdaVCurveOptions& opt = {});

/// x-grid of I_X on (0, 1]: k / steps for k = 1..steps.
std::vector<double> default_x_grid(std::size_t steps = 400);
/// I_V abscissae matching an x-grid: u = (1/x - 1) / 2, sorted ascending.
std::vector<double> iv_grid_for(std::span<const double> x_grid);

/// I_V(u) = sup_{λ <= 0} (λu - Λ_V(λ)): maximum over the nodes, refined by golden
/// section on a cubic Hermite interpolant of (Λ_V, Λ_V') between neighbours.
/// When the 0 node has infinite slope, the last interval uses
/// Λ(0) - c (-λ)^q with q the W tail index.
RateCurve legendre(const RateCurve& lambda_v, std::span<const double> u_grid,
                   std::optional<double> w_tail_index = std::nullopt);

/// Convex conjugate back to the λ side: sup_u (λu - I(u)) over the grid.
std::vector<double> legendre_back(const RateCurve& iv, std::span<const double> lambdas);

/// I_T(t) = I_V((t - 1) / 2) on t = 1 + 2u.
RateCurve rate_T(const RateCurve& iv);

/// I_X(x) = x I_T(1/x) for x > 0, |x| I_Tbar(1/|x|) for x < 0, I_X(0) = 0.
/// Both inputs must come from the same u-grid so that 1/t lands on grid points.
RateCurve rate_X(const RateCurve& it, const RateCurve& it_mirror);

struct PropertyVerdict {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 when passing; distance to the threshold
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyVerdict> verdicts;
  bool all_pass() const;
  std::string to_text() const;  // one "PASS name ..." / "FAIL name ..." line per verdict
};

/// Reference values for the endpoint and zero-set checks.
struct PropertyExpectations {
  double mean_first_cookie = 0.5;       // E[ω_0(1)]
  double mean_first_cookie_left = 0.5;  // E[1 - ω_0(1)]
  /// For δ > 2: m0 (I_V), 1 + 2 m0 (I_T), v0 (I_X). For δ < -2, I_X uses -v0bar.
  std::optional<double> zero_edge;
  std::optional<double> zero_edge_left;  // I_X on a δ < -2 environment
  /// -Λ_V(0) of the curve's batch (and of the mirrored batch). Censored cycles
  /// lift the whole curve by this amount, so "zero" means "at the floor".
  double floor = 0.0;
  double floor_left = 0.0;
  double endpoint_tol = 0.02;
  double convexity_tol = 1e-9;
  double zero_tol = 0.0;
};

PropertyReport check_properties(const RateCurve& curve, const RegimeReport& regime,
                                const PropertyExpectations& expect);

/// Discrete convexity: min over interior points of the second divided
/// difference, skipping unreliable points. Positive for strictly convex data.
double min_second_difference(const RateCurve& curve, std::size_t from = 0,
                             std::size_t to = static_cast<std::size_t>(-1));

}  // namespace erw
