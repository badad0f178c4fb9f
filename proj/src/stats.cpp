#include "erw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace erw {

ProbabilityEstimate frequency(std::uint64_t hits, std::uint64_t reps, double z) {
  ProbabilityEstimate e;
  e.hits = hits;
  e.reps = reps;
  if (reps == 0) return e;
  const double n = static_cast<double>(reps);
  e.p = static_cast<double>(hits) / n;
  e.se = std::sqrt(e.p * (1.0 - e.p) / n);
  const double z2 = z * z;
  const double centre = (e.p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(e.p * (1 - e.p) / n + z2 / (4 * n * n));
  e.wilson_lo = std::max(0.0, centre - half);
  e.wilson_hi = std::min(1.0, centre + half);
  e.unreliable = hits < 30;
  return e;
}

Estimate mean_and_se(std::span<const double> xs) {
  Estimate e;
  if (xs.empty()) return e;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.value = sum / n;
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.value) * (x - e.value);
  e.se = std::sqrt(ss / (n - 1) / n);
  return e;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

LinearFit weighted_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w) {
  if (X.rows() != y.size() || y.size() != w.size() || X.rows() < X.cols())
    throw std::invalid_argument("weighted_least_squares: bad dimensions");
  const Eigen::MatrixXd Xt_w = X.transpose() * w.asDiagonal();
  const Eigen::MatrixXd normal = Xt_w * X;
  LinearFit fit;
  const auto ldlt = normal.ldlt();
  fit.coef = ldlt.solve(Xt_w * y);
  fit.cov = ldlt.solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
  const Eigen::VectorXd r = y - X * fit.coef;
  fit.chi2 = r.dot(w.asDiagonal() * r);
  return fit;
}

double lag1_autocorrelation(std::span<const double> xs) {
  if (xs.size() < 3) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    den += (xs[i] - mean) * (xs[i] - mean);
    if (i + 1 < xs.size()) num += (xs[i] - mean) * (xs[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace erw
