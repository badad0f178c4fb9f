#pragma once

#include "erw/branching_sim.hpp"
#include "erw/cookie_env.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace erw::harness {

/// The fixed environments the acceptance suite runs on.
namespace canonical {
CookieEnvironmentSpec e0();  // ω ≡ 1/2
CookieEnvironmentSpec e1();  // M = 1, ω = 0.7
CookieEnvironmentSpec e2();  // M = 5, ω = 0.75
CookieEnvironmentSpec e3();  // M = 3, ω = 0.8
}  // namespace canonical

struct Artifact {
  std::string name;  // file name under the output directory
  std::string text;
};

struct AcceptanceResult {
  std::string id;
  bool pass = false;
  std::string summary;  // one line, no timings
  std::string details;  // extra lines (verdicts, per-point tables)
  std::vector<Artifact> artifacts;
  double seconds = 0.0;

  /// "PASS AC1 <summary>" or "FAIL AC1 <summary>".
  std::string line() const;
};

struct AcceptanceContext {
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
  std::uint64_t config_hash = 0;
};

/// Sample batches shared between criteria, drawn on first use.
class SharedBatches {
 public:
  explicit SharedBatches(AcceptanceContext ctx) : ctx_(ctx) {}
  /// 10^6 cycles on E2 (cap 10^6).
  const std::vector<RegenSample>& e2();
  /// 10^6 cycles on E1 (cap 1000).
  const std::vector<RegenSample>& e1();

 private:
  AcceptanceContext ctx_;
  std::unique_ptr<std::vector<RegenSample>> e1_, e2_;
};

AcceptanceResult ac1_oracle_equivalence(const AcceptanceContext& ctx);
AcceptanceResult ac2_representation_identity(const AcceptanceContext& ctx);
AcceptanceResult ac3_speed_formula(const AcceptanceContext& ctx, SharedBatches& batches);
AcceptanceResult ac4_tail_exponents(const AcceptanceContext& ctx, SharedBatches& batches);
AcceptanceResult ac5_slowdown_exponents(const AcceptanceContext& ctx, SharedBatches& batches);
AcceptanceResult ac6_rate_properties(const AcceptanceContext& ctx, SharedBatches& batches);
AcceptanceResult ac7_lambda_v_bracket(const AcceptanceContext& ctx, SharedBatches& batches);
AcceptanceResult ac8_subexponential_floor(const AcceptanceContext& ctx);
AcceptanceResult ac9_heavy_sum_exponent(const AcceptanceContext& ctx);

/// AC1, AC2, AC7, AC8, AC9: the criteria cheap enough to repeat.
std::vector<AcceptanceResult> run_cheap_suite(const AcceptanceContext& ctx);

/// Reruns the cheap suite with workers 1, 4 and 16 and compares every
/// artifact byte for byte.
AcceptanceResult ac10_determinism(const AcceptanceContext& ctx);

using ProgressFn = std::function<void(const AcceptanceResult&)>;

/// AC1..AC10 in order. `progress` is called after each criterion.
std::vector<AcceptanceResult> run_acceptance(const AcceptanceContext& ctx, const ProgressFn& progress = {});

}  // namespace erw::harness
