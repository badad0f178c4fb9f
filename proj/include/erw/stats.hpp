#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace erw {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Empirical frequency of an event with its Wilson score interval.
struct ProbabilityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t reps = 0;
  double p = 0.0;
  double se = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  bool unreliable = false;  // fewer than 30 hits
};

ProbabilityEstimate frequency(std::uint64_t hits, std::uint64_t reps, double z = 1.96);

Estimate mean_and_se(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

/// Total variation distance between two probability vectors of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Weighted least squares fit y ~ X beta with weights w (inverse variances).
struct LinearFit {
  Eigen::VectorXd coef;
  Eigen::MatrixXd cov;  // (X^T W X)^{-1}
  double chi2 = 0.0;
};
LinearFit weighted_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w);

/// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> xs);

}  // namespace erw
