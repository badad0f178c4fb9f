#include "erw/rate_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace erw {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// EmpiricalMGF

EmpiricalMGF::EmpiricalMGF(std::span<const RegenSample> samples) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
  double sum_sigma = 0.0, sum_w = 0.0;
  for (const auto& s : samples) {
    ++total_;
    if (s.censored) {
      ++censored_;
      continue;
    }
    ++counts[{s.sigma, s.W}];
    if (s.sigma == 1) ++sigma_one_;
    sum_sigma += static_cast<double>(s.sigma);
    sum_w += static_cast<double>(s.W);
    w_values_.push_back(static_cast<double>(s.W));
  }
  if (total_ == 0) throw std::invalid_argument("EmpiricalMGF: empty sample batch");
  cells_.reserve(counts.size());
  for (const auto& [key, c] : counts)
    cells_.push_back({static_cast<double>(key.first), static_cast<double>(key.second), static_cast<double>(c)});
  const double kept = static_cast<double>(total_ - censored_);
  if (kept > 0) {
    mean_sigma_ = sum_sigma / kept;
    mean_w_ = sum_w / kept;
  }
}

double EmpiricalMGF::sigma_one_fraction() const noexcept {
  return static_cast<double>(sigma_one_) / static_cast<double>(total_);
}

EmpiricalMGF::Query EmpiricalMGF::query(double lambda, double eta) const {
  Query q;
  if (cells_.empty()) {
    q.value = -kInf;
    return q;
  }
  double top = -kInf;
  for (const auto& c : cells_) top = std::max(top, lambda * c.w + eta * c.sigma);
  double s1 = 0.0, s2 = 0.0, ss = 0.0, sw = 0.0;
  for (const auto& c : cells_) {
    const double w = std::exp(lambda * c.w + eta * c.sigma - top);
    s1 += c.count * w;
    s2 += c.count * w * w;
    ss += c.count * w * c.sigma;
    sw += c.count * w * c.w;
  }
  const double n = static_cast<double>(total_);
  const double mean = s1 / n;
  q.value = top + std::log(mean);
  const double var = std::max(0.0, s2 / n - mean * mean);
  q.se = std::sqrt(var / n) / mean;
  q.ess = s1 * s1 / s2;
  q.mean_sigma = ss / s1;
  q.mean_W = sw / s1;
  return q;
}

// ---------------------------------------------------------------------------
// Λ_V

LambdaVPoint lambda_V(const EmpiricalMGF& mgf, double lambda, double tol) {
  if (lambda > 0.0) throw std::invalid_argument("lambda_V: lambda must be <= 0");
  LambdaVPoint pt;
  pt.lambda = lambda;
  auto f = [&](double eta) { return mgf.value(lambda, eta); };

  const double p1 = mgf.sigma_one_fraction();
  double lo = 0.0;
  double hi = p1 > 0.0 ? -std::log(p1) : 1.0;
  int expansions = 0;
  while (f(hi) < -tol && expansions < 10) {
    lo = hi;
    hi = std::max(2.0 * hi, 1.0);
    ++expansions;
  }
  if (f(hi) < -tol) {
    pt.clamped = true;
    lo = hi;
  } else if (f(lo) > 0.0) {
    hi = lo;  // only when λ = 0 and the batch has no censoring slack
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) <= 0.0 ? lo : hi) = mid;
    }
  }
  pt.eta = lo;
  pt.value = -lo;
  const auto q = mgf.query(lambda, pt.eta);
  pt.residual = q.value;
  pt.ess = q.ess;
  pt.unreliable = !q.reliable() || pt.clamped;
  // Implicit differentiation of Λ_{W,σ}(λ, -Λ_V(λ)) = 0.
  pt.slope = q.mean_sigma > 0.0 ? q.mean_W / q.mean_sigma : 0.0;
  pt.se = q.mean_sigma > 0.0 ? q.se / q.mean_sigma : q.se;
  return pt;
}

// ---------------------------------------------------------------------------
// Curves

const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::LambdaV: return "LambdaV";
    case CurveKind::IV: return "I_V";
    case CurveKind::IT: return "I_T";
    case CurveKind::IX: return "I_X";
  }
  return "?";
}

double RateCurve::at(double x) const {
  if (grid.empty()) throw std::logic_error("RateCurve::at on empty curve");
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(it - grid.begin());
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

void summarize(RateCurve& curve, double zero_tol) {
  curve.zero_tol = zero_tol;
  curve.zero_set.reset();
  if (curve.grid.empty()) return;
  curve.left_value = curve.values.front();
  curve.right_value = curve.values.back();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve.values[i] <= zero_tol)) continue;
    if (!curve.zero_set) curve.zero_set = {curve.grid[i], curve.grid[i]};
    else curve.zero_set->second = curve.grid[i];
  }
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  constexpr int kPoints = 25;
  for (int k = 0; k < kPoints; ++k) g.push_back(-std::exp2(4.0 - 14.0 * k / (kPoints - 1)));
  g.push_back(0.0);
  return g;
}

RateCurve lambda_V_curve(const EmpiricalMGF& mgf, std::span<const double> lambdas,
                         const LambdaVCurveOptions& opt) {
  if (!std::is_sorted(lambdas.begin(), lambdas.end()))
    throw std::invalid_argument("lambda_V_curve: grid must be sorted");
  RateCurve c;
  c.kind = CurveKind::LambdaV;
  for (double l : lambdas) {
    const auto pt = lambda_V(mgf, l, opt.tol);
    c.grid.push_back(l);
    c.values.push_back(pt.value);
    c.se.push_back(pt.se);
    double slope = pt.slope;
    if (l == 0.0 && opt.w_tail_index && *opt.w_tail_index < 1.0) slope = kInf;
    c.slopes.push_back(slope);
    c.unreliable.push_back(pt.unreliable ? 1 : 0);
  }
  summarize(c, 0.0);
  return c;
}

std::vector<double> default_x_grid(std::size_t steps) {
  std::vector<double> g;
  g.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) g.push_back(static_cast<double>(k) / static_cast<double>(steps));
  return g;
}

std::vector<double> iv_grid_for(std::span<const double> x_grid) {
  std::vector<double> u;
  u.reserve(x_grid.size());
  for (double x : x_grid) {
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("iv_grid_for: x must be in (0, 1]");
    u.push_back((1.0 / x - 1.0) / 2.0);
  }
  std::sort(u.begin(), u.end());
  return u;
}

namespace {

// Λ_V between two adjacent nodes.
struct Segment {
  double a, b;    // λ interval
  double ya, yb;  // values
  double ma, mb;  // slopes (mb may be +inf at the 0 node)
  double power = 0.0;  // in (0,1): y(λ) = yb - c (-λ)^power, infinite slope at 0
  double corrected = 0.0;  // > 1: y(λ) = yb + mb λ + c (-λ)^corrected

  double eval(double l) const {
    if (corrected > 0.0) {
      const double c = (ya - yb - mb * a) / std::pow(-a, corrected);
      return yb + mb * l + c * std::pow(-l, corrected);
    }
    if (power > 0.0) {
      const double c = (yb - ya) / std::pow(-a, power);
      return yb - c * std::pow(-l, power);
    }
    const double h = b - a;
    const double t = (l - a) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * ma + (-2 * t3 + 3 * t2) * yb +
           (t3 - t2) * h * mb;
  }

  // max over [a, b] of λu - y(λ).
  double sup(double u) const {
    if (corrected > 0.0) {
      const double k = corrected;
      const double c = (ya - yb - mb * a) / std::pow(-a, k);
      double v = 0.0;
      if (u < mb && c > 0.0) v = std::min(-a, std::pow((mb - u) / (c * k), 1.0 / (k - 1.0)));
      const double best = (mb - u) * v - c * std::pow(v, k) - yb;
      return std::max({best, a * u - ya, -yb});
    }
    if (power > 0.0 && b == 0.0) {
      const double c = (yb - ya) / std::pow(-a, power);
      const double q = power;
      double v = -a;
      if (u > 0.0 && c > 0.0) v = std::min(v, std::pow(c * q / u, 1.0 / (1.0 - q)));
      const double best = -u * v + c * std::pow(v, q) - yb;
      return std::max({best, a * u - ya, -yb});
    }
    // Golden section on the concave objective.
    auto g = [&](double l) { return l * u - eval(l); };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = a, hi = b;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
      if (g1 < g2) {
        lo = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo + phi * (hi - lo);
        g2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi - phi * (hi - lo);
        g1 = g(x1);
      }
    }
    return std::max({g1, g2, a * u - ya, b * u - yb});
  }
};

// The cubic Hermite piece is convex iff 2 ma + mb <= 3 s <= ma + 2 mb.
bool hermite_convex(const Segment& s) {
  const double sec = (s.yb - s.ya) / (s.b - s.a);
  return 2.0 * s.ma + s.mb <= 3.0 * sec + 1e-12 && 3.0 * sec <= s.ma + 2.0 * s.mb + 1e-12;
}

std::vector<Segment> segments_of(const RateCurve& lv, std::optional<double> w_tail_index) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
    Segment s{lv.grid[i], lv.grid[i + 1], lv.values[i], lv.values[i + 1], lv.slopes[i], lv.slopes[i + 1]};
    const double sec = (s.yb - s.ya) / (s.b - s.a);
    const bool last = s.b == 0.0 && s.a < 0.0;
    const bool heavy = w_tail_index && *w_tail_index < 1.0;
    if (last && !heavy && std::isfinite(s.mb)) {
      // Finite mean but possibly infinite variance: Λ ≈ m0 λ + c |λ|^κ, κ in (1, 2].
      const double excess = s.ya - s.yb - s.mb * s.a;
      const double k = excess > 0.0 ? (s.mb - s.ma) * (-s.a) / excess : 0.0;
      if (k > 1.0 && k <= 2.0) {
        s.corrected = k;
        segs.push_back(s);
        continue;
      }
    }
    if (last && (heavy || !std::isfinite(s.mb) || !hermite_convex(s))) {
      // y = yb - c (-λ)^q has slope q * secant at a, and infinite slope at 0.
      double q = sec > 0.0 ? s.ma / sec : 0.0;
      if (!(q > 0.0 && q < 1.0) && heavy) q = *w_tail_index;
      if (q > 0.0 && q < 1.0 && sec > 0.0) {
        s.power = q;
        segs.push_back(s);
        continue;
      }
    }
    if (!std::isfinite(s.mb) || !hermite_convex(s)) {
      // Fall back to the chord; its supremum sits at a vertex.
      s.ma = s.mb = sec;
    }
    segs.push_back(s);
  }
  return segs;
}

}  // namespace

RateCurve legendre(const RateCurve& lambda_v, std::span<const double> u_grid,
                   std::optional<double> w_tail_index) {
  if (lambda_v.kind != CurveKind::LambdaV) throw std::invalid_argument("legendre: expects a Lambda_V curve");
  if (lambda_v.size() < 2) throw std::invalid_argument("legendre: need at least two nodes");
  if (lambda_v.grid.back() > 0.0) throw std::invalid_argument("legendre: nodes must satisfy lambda <= 0");
  const auto segs = segments_of(lambda_v, w_tail_index);
  RateCurve iv;
  iv.kind = CurveKind::IV;
  for (double u : u_grid) {
    std::size_t best = 0;
    double best_val = -kInf;
    for (std::size_t i = 0; i < lambda_v.size(); ++i) {
      const double v = lambda_v.grid[i] * u - lambda_v.values[i];
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    double val = best_val;
    if (best > 0) val = std::max(val, segs[best - 1].sup(u));
    if (best < segs.size()) val = std::max(val, segs[best].sup(u));
    iv.grid.push_back(u);
    iv.values.push_back(std::max(0.0, val));
    iv.se.push_back(lambda_v.se[best]);
    bool flagged = lambda_v.unreliable[best] != 0;
    if (best > 0) flagged = flagged || lambda_v.unreliable[best - 1];
    if (best + 1 < lambda_v.size()) flagged = flagged || lambda_v.unreliable[best + 1];
    iv.unreliable.push_back(flagged ? 1 : 0);
  }
  summarize(iv, 0.0);
  return iv;
}

std::vector<double> legendre_back(const RateCurve& iv, std::span<const double> lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) {
    double best = -kInf;
    for (std::size_t i = 0; i < iv.size(); ++i) best = std::max(best, l * iv.grid[i] - iv.values[i]);
    out.push_back(best);
  }
  return out;
}

RateCurve rate_T(const RateCurve& iv) {
  if (iv.kind != CurveKind::IV) throw std::invalid_argument("rate_T: expects an I_V curve");
  RateCurve it = iv;
  it.kind = CurveKind::IT;
  for (auto& g : it.grid) g = 1.0 + 2.0 * g;
  summarize(it, iv.zero_tol);
  return it;
}

RateCurve rate_X(const RateCurve& it, const RateCurve& it_mirror) {
  if (it.kind != CurveKind::IT || it_mirror.kind != CurveKind::IT)
    throw std::invalid_argument("rate_X: expects two I_T curves");
  RateCurve ix;
  ix.kind = CurveKind::IX;
  auto push = [&](double x, double v, double se, unsigned char flag) {
    ix.grid.push_back(x);
    ix.values.push_back(v);
    ix.se.push_back(se);
    ix.unreliable.push_back(flag);
  };
  for (std::size_t i = 0; i < it_mirror.size(); ++i) {
    const double x = 1.0 / it_mirror.grid[i];
    push(-x, x * it_mirror.values[i], x * it_mirror.se[i], it_mirror.unreliable[i]);
  }
  push(0.0, 0.0, 0.0, 0);
  for (std::size_t k = it.size(); k-- > 0;) {
    const double x = 1.0 / it.grid[k];
    push(x, x * it.values[k], x * it.se[k], it.unreliable[k]);
  }
  summarize(ix, it.zero_tol);
  return ix;
}

// ---------------------------------------------------------------------------
// Property checks

bool PropertyReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
}

std::string PropertyReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& v : verdicts) {
    os << (v.pass ? "PASS " : "FAIL ") << v.name << " margin=" << v.margin;
    if (!v.detail.empty()) os << " " << v.detail;
    os << "\n";
  }
  return os.str();
}

namespace {

struct Reliable {
  std::vector<double> x, y;
};

Reliable reliable_points(const RateCurve& c, std::size_t from = 0, std::size_t to = static_cast<std::size_t>(-1)) {
  Reliable r;
  to = std::min(to, c.size());
  for (std::size_t i = from; i < to; ++i) {
    if (c.unreliable.size() == c.size() && c.unreliable[i]) continue;
    if (!std::isfinite(c.values[i])) continue;
    r.x.push_back(c.grid[i]);
    r.y.push_back(c.values[i]);
  }
  return r;
}

double min_second_difference(const Reliable& r) {
  double m = kInf;
  for (std::size_t i = 1; i + 1 < r.x.size(); ++i) {
    const double d1 = (r.y[i] - r.y[i - 1]) / (r.x[i] - r.x[i - 1]);
    const double d2 = (r.y[i + 1] - r.y[i]) / (r.x[i + 1] - r.x[i]);
    m = std::min(m, 2.0 * (d2 - d1) / (r.x[i + 1] - r.x[i - 1]));
  }
  return m;
}

// Largest increase (sign = +1) or decrease (sign = -1) between neighbours.
double worst_step(const Reliable& r, int sign) {
  double w = 0.0;
  for (std::size_t i = 1; i < r.x.size(); ++i) w = std::max(w, sign * (r.y[i] - r.y[i - 1]));
  return w;
}

std::size_t nearest_index(const RateCurve& c, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (std::abs(c.grid[i] - x) < std::abs(c.grid[best] - x)) best = i;
  return best;
}

double local_step(const RateCurve& c, std::size_t i) {
  double h = 0.0;
  if (i > 0) h = std::max(h, c.grid[i] - c.grid[i - 1]);
  if (i + 1 < c.size()) h = std::max(h, c.grid[i + 1] - c.grid[i]);
  return h;
}

std::string fmt(const char* key, double v) {
  std::ostringstream os;
  os.precision(6);
  os << key << "=" << v;
  return os.str();
}

void add(PropertyReport& rep, std::string name, bool pass, double margin, std::string detail = {}) {
  rep.verdicts.push_back({std::move(name), pass, margin, std::move(detail)});
}

void check_value(PropertyReport& rep, const std::string& name, double got, double want, double tol) {
  const double err = std::abs(got - want);
  add(rep, name, err <= tol, tol - err, fmt("value", got) + " " + fmt("expected", want));
}

// Zero-set edge check for a decreasing curve: the first grid point at or below
// zero_tol must be within one local grid step of `edge`.
void check_zero_edge(PropertyReport& rep, const std::string& name, const RateCurve& c, double edge, double zero_tol) {
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.values[i] <= zero_tol) {
      first = i;
      break;
    }
  if (!first) {
    add(rep, name, false, -1.0, "no grid point at zero");
    return;
  }
  const double step = local_step(c, *first);
  const double err = std::abs(c.grid[*first] - edge);
  bool tail_zero = true;
  for (std::size_t i = *first; i < c.size(); ++i) tail_zero = tail_zero && c.values[i] <= zero_tol;
  add(rep, name, err <= step && tail_zero, step - err,
      fmt("first_zero", c.grid[*first]) + " " + fmt("expected", edge) + " " + fmt("step", step));
}

// Finite-difference slope approaching an endpoint over h = 64, 32, 16, 8 grid
// steps; must grow strictly as h shrinks.
void check_steep_end(PropertyReport& rep, const std::string& name, const RateCurve& c, bool right_end) {
  std::vector<double> slopes;
  const std::size_t n = c.size();
  for (std::size_t h : {64u, 32u, 16u, 8u}) {
    if (h >= n) continue;
    const std::size_t e = right_end ? n - 1 : 0;
    const std::size_t i = right_end ? n - 1 - h : h;
    slopes.push_back(std::abs((c.values[e] - c.values[i]) / (c.grid[e] - c.grid[i])));
  }
  double margin = kInf;
  for (std::size_t k = 1; k < slopes.size(); ++k) margin = std::min(margin, slopes[k] - slopes[k - 1]);
  std::ostringstream os;
  os.precision(5);
  os << "slopes=";
  for (double s : slopes) os << s << ";";
  add(rep, name, slopes.size() >= 2 && margin > 0.0, margin, os.str());
}

}  // namespace

double min_second_difference(const RateCurve& curve, std::size_t from, std::size_t to) {
  return min_second_difference(reliable_points(curve, from, to));
}

PropertyReport check_properties(const RateCurve& curve, const RegimeReport& regime,
                                const PropertyExpectations& expect) {
  PropertyReport rep;
  const std::string kind = to_string(curve.kind);
  const auto all = reliable_points(curve);
  const double conv = min_second_difference(all);
  add(rep, kind + ".convex", conv >= -expect.convexity_tol, conv + expect.convexity_tol, fmt("min_d2", conv));

  const double log_w1 = std::log(expect.mean_first_cookie);
  const bool ballistic_right = regime.delta > 2.0;

  switch (curve.kind) {
    case CurveKind::LambdaV: {
      const double up = worst_step(all, -1);
      add(rep, kind + ".nondecreasing", up <= expect.convexity_tol, expect.convexity_tol - up);
      double hi = -kInf, lo = kInf;
      for (std::size_t i = 0; i < all.x.size(); ++i) {
        if (all.x[i] >= 0.0) continue;
        hi = std::max(hi, all.y[i]);
        lo = std::min(lo, all.y[i]);
      }
      add(rep, kind + ".upper_bound", hi <= 0.0, -hi, fmt("max", hi));
      add(rep, kind + ".lower_bound", lo > log_w1 - expect.endpoint_tol, lo - (log_w1 - expect.endpoint_tol),
          fmt("min", lo) + " " + fmt("log_E_w1", log_w1));
      break;
    }
    case CurveKind::IV:
    case CurveKind::IT: {
      const double down = worst_step(all, +1);
      add(rep, kind + ".nonincreasing", down <= expect.convexity_tol, expect.convexity_tol - down);
      check_value(rep, kind + ".endpoint", curve.values.front(), -log_w1, expect.endpoint_tol);
      const double inf = *std::min_element(curve.values.begin(), curve.values.end());
      add(rep, kind + ".inf_near_zero", inf <= expect.endpoint_tol, expect.endpoint_tol - inf, fmt("inf", inf));
      if (ballistic_right && expect.zero_edge) {
        check_zero_edge(rep, kind + ".zero_set", curve, *expect.zero_edge, expect.floor + expect.zero_tol);
      } else if (!ballistic_right) {
        const double minv = *std::min_element(all.y.begin(), all.y.end()) - expect.floor;
        add(rep, kind + ".positive", minv > expect.zero_tol, minv - expect.zero_tol, fmt("min_above_floor", minv));
      }
      break;
    }
    case CurveKind::IX: {
      const auto zero = nearest_index(curve, 0.0);
      const auto left = reliable_points(curve, 0, zero + 1);
      const auto right = reliable_points(curve, zero);
      const double bad_left = worst_step(left, +1);
      const double bad_right = worst_step(right, -1);
      add(rep, kind + ".nonincreasing_left", bad_left <= expect.convexity_tol, expect.convexity_tol - bad_left);
      add(rep, kind + ".nondecreasing_right", bad_right <= expect.convexity_tol, expect.convexity_tol - bad_right);
      check_value(rep, kind + ".endpoint_right", curve.values.back(), -log_w1, expect.endpoint_tol);
      check_value(rep, kind + ".endpoint_left", curve.values.front(), -std::log(expect.mean_first_cookie_left),
                  expect.endpoint_tol);

      // Zero set.
      const double v0 = expect.zero_edge.value_or(0.0);
      const double v0l = expect.zero_edge_left.value_or(0.0);
      // A side whose cycles escape for real (|δ| > 1 towards it) has a genuine
      // linear piece at 0, so only a recurrent side gets the censoring floor.
      const double fl = regime.delta > 1.0 ? 0.0 : expect.floor_left;
      const double fr = regime.delta < -1.0 ? 0.0 : expect.floor;
      auto at_floor = [&](std::size_t i) {
        const double x = curve.grid[i];
        const double floor = x < 0.0 ? -x * fl : x * fr;
        return curve.values[i] <= floor + expect.zero_tol;
      };
      std::size_t lo = zero, hi = zero;
      while (lo > 0 && at_floor(lo - 1)) --lo;
      while (hi + 1 < curve.size() && at_floor(hi + 1)) ++hi;
      const double want_hi = regime.delta > 2.0 ? v0 : 0.0;
      const double want_lo = regime.delta < -2.0 ? v0l : 0.0;
      const double err_hi = std::abs(curve.grid[hi] - want_hi);
      const double err_lo = std::abs(curve.grid[lo] - want_lo);
      const double tol_hi = want_hi == 0.0 ? 0.0 : local_step(curve, hi);
      const double tol_lo = want_lo == 0.0 ? 0.0 : local_step(curve, lo);
      std::size_t outside = 0;
      for (std::size_t i = 0; i < curve.size(); ++i)
        if ((i < lo || i > hi) && at_floor(i)) ++outside;
      add(rep, kind + ".zero_set", err_hi <= tol_hi && err_lo <= tol_lo && outside == 0,
          std::min(tol_hi - err_hi, tol_lo - err_lo),
          fmt("lo", curve.grid[lo]) + " " + fmt("hi", curve.grid[hi]) + " " + fmt("want_lo", want_lo) + " " +
              fmt("want_hi", want_hi));
      check_steep_end(rep, kind + ".steep_right", curve, true);
      check_steep_end(rep, kind + ".steep_left", curve, false);
      break;
    }
  }
  return rep;
}

}  // namespace erw
