#include "merodiff/nevanlinna.hpp"

#include <algorithm>
#include <cmath>

#include "merodiff/kernels.hpp"

namespace merodiff {

namespace {

constexpr double kPi = 3.141592653589793;

double logplus(const LogComplex& v) { return v.is_zero() ? 0.0 : std::max(0.0, v.logmag); }

double mean_logplus(std::span<const LogComplex> vals) {
  NeumaierSum<double> s;
  for (const auto& v : vals) s.add(logplus(v));
  return s.total() / static_cast<double>(vals.size());
}

}  // namespace

double proximity(const ExprPtr& f, double r, const QuadratureOptions& opt) {
  Registry reg = registry_of(f);
  for (const auto& e : reg.of_kind(PointKind::Pole)) {
    if (std::fabs(std::abs(e.loc) - r) < 1e-9 * r)
      fail(ErrorCode::PoleOnCircle, "pole modulus within 1e-9*r of r=" + std::to_string(r));
  }
  int m = opt.min_points;
  std::vector<LogComplex> vals;
  try {
    vals = eval_circle(f, r, circle_angles(m));
  } catch (const MeroError& e) {
    if (e.code() == ErrorCode::PoleHit)
      fail(ErrorCode::PoleOnCircle, std::string("at r=") + std::to_string(r) + ": " + e.what());
    throw;
  }
  double estimate = mean_logplus(vals);
  while (m < opt.max_points) {
    // New points sit halfway between existing ones.
    std::vector<double> odd(m);
    for (int i = 0; i < m; ++i) odd[i] = 2.0 * kPi * (2 * i + 1) / (2 * m);
    std::vector<LogComplex> nv;
    try {
      nv = eval_circle(f, r, odd);
    } catch (const MeroError& e) {
      if (e.code() == ErrorCode::PoleHit)
        fail(ErrorCode::PoleOnCircle, std::string("at r=") + std::to_string(r) + ": " + e.what());
      throw;
    }
    double refined = 0.5 * (estimate + mean_logplus(nv));
    std::vector<LogComplex> merged(2 * m, LogComplex::zero());
    for (int i = 0; i < m; ++i) {
      merged[2 * i] = vals[i];
      merged[2 * i + 1] = nv[i];
    }
    vals = std::move(merged);
    m *= 2;
    double prev = estimate;
    estimate = refined;
    if (std::fabs(refined - prev) < opt.tol) return estimate;
    // log+ kinks (|f| crossing 1) limit the trapezoid rule to ~1/m^2 decay,
    // so the point cap is a legitimate stop when the estimate has settled
    // well below every downstream tolerance; only a wildly unsettled
    // estimate is an error.
    if (m >= opt.max_points) {
      if (std::fabs(refined - prev) < 1e-4) return estimate;
      fail(ErrorCode::NonConvergent,
           "proximity quadrature at r=" + std::to_string(r) + " did not settle; last=" +
               std::to_string(refined) + " prev=" + std::to_string(prev) +
               " points=" + std::to_string(m));
    }
  }
  fail(ErrorCode::NonConvergent, "unreachable");
}

double counting_integrated(const Registry& reg, double r, PointKind kind) {
  bool side_complete = kind == PointKind::Pole ? reg.poles_complete() : reg.zeros_complete();
  if (!side_complete)
    fail(ErrorCode::IncompleteRegistry, "counting function needs a complete registry side");
  NeumaierSum<double> s;
  for (const auto& e : reg.entries()) {
    if (e.kind != kind) continue;
    double m = std::abs(e.loc);
    if (m > r) continue;
    if (m == 0.0)
      s.add(e.mult * std::log(r));
    else
      s.add(e.mult * std::log(r / m));
  }
  return s.total();
}

namespace {

// Deterministic perturbation within +/-2% of the request. Pole moduli break
// the integral outright; zero moduli only slow the trapezoid rule down, so
// they get a smaller clearance.
double admissible_radius(double r, const Registry& reg, double pole_clearance,
                         std::vector<std::pair<double, double>>* log) {
  static constexpr double kMults[] = {1.0,   1.002, 0.998, 1.005, 0.995, 1.01,
                                      0.99,  1.015, 0.985, 1.02,  0.98};
  double zero_clearance = 1e-3;
  for (double mult : kMults) {
    double cand = r * mult;
    bool ok = true;
    for (const auto& e : reg.entries()) {
      double gap = std::fabs(std::abs(e.loc) - cand);
      double need = (e.kind == PointKind::Pole ? pole_clearance : zero_clearance) * cand;
      if (gap < need) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (mult != 1.0 && log) log->emplace_back(r, cand);
      return cand;
    }
  }
  fail(ErrorCode::NoAdmissibleRadius, "no pole-avoiding radius within 2% of " + std::to_string(r));
}

}  // namespace

GrowthProfile growth_profile(const ExprPtr& f, const Registry& reg, std::span<const double> r_grid,
                             const QuadratureOptions& opt) {
  GrowthProfile p;
  for (double r : r_grid) {
    double used = admissible_radius(r, reg, 0.004, &p.perturbations);
    double m = proximity(f, used, opt);
    double N = counting_integrated(reg, used, PointKind::Pole);
    p.r.push_back(used);
    p.m.push_back(m);
    p.N.push_back(N);
    p.T.push_back(m + N);
  }
  if (p.r.size() >= 2) p.grid_ratio = p.r[1] / p.r[0];
  return p;
}

void estimate_orders(GrowthProfile& p) {
  size_t n = p.r.size();
  if (n < 16 || p.r.back() / p.r.front() < 1e3)
    fail(ErrorCode::InsufficientGrid, "order estimation needs >=16 points over >=3 decades");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (size_t i = n / 2; i < n; ++i) {
    if (p.T[i] <= 0.0 || p.r[i] <= 1.0) continue;
    double ratio = std::log(p.T[i]) / std::log(p.r[i]);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!(hi > -std::numeric_limits<double>::infinity()))
    fail(ErrorCode::InsufficientGrid, "characteristic vanishes on the top half of the grid");
  p.order_est = hi;
  p.lower_order_est = lo;
}

std::vector<double> keldysh_sums(const ExprPtr& f, const ExprPtr& g, std::span<const double> r_grid,
                                 std::vector<std::pair<double, double>>* perturb_log,
                                 const QuadratureOptions& opt) {
  Registry both = Registry::merged(registry_of(f), registry_of(g));
  std::vector<double> out;
  for (double r : r_grid) {
    double used = admissible_radius(r, both, 0.004, perturb_log);
    out.push_back(proximity(f, used, opt) + proximity(g, used, opt));
  }
  return out;
}

bool EpsilonSet::contains(Complex z) const {
  for (const auto& d : discs)
    if (std::abs(z - d.center) < d.radius) return true;
  return false;
}

EpsilonSet build_epsilon_set(const Registry& reg, EpsilonRule rule, double h, double alpha) {
  EpsilonSet out;
  for (const auto& e : reg.entries()) {
    double m = std::abs(e.loc);
    if (rule == EpsilonRule::Exclusion) {
      out.discs.push_back({e.loc, 2.0 * h});
      if (m > 0) out.ratio_sum += 2.0 * h / m;
    } else {
      if (m <= 2.718281828459045) continue;
      double rad = m / std::pow(std::log(m), alpha + 1.0);
      out.discs.push_back({e.loc, rad});
      out.ratio_sum += rad / m;
    }
  }
  if (rule == EpsilonRule::Exclusion && reg.entries().size() >= 8) {
    // Desk surrogate for sum 1/|a_k| = inf: fit the counting exponent on the
    // outer half of the moduli; >= 0.98 is treated as divergent.
    std::vector<double> mods;
    for (const auto& e : reg.entries())
      for (long i = 0; i < e.mult; ++i) mods.push_back(std::abs(e.loc));
    std::sort(mods.begin(), mods.end());
    double r2 = mods.back();
    double r1 = mods[mods.size() / 2];
    if (r2 > r1 && r1 > 0) {
      auto count_le = [&](double r) {
        return static_cast<double>(std::upper_bound(mods.begin(), mods.end(), r) - mods.begin());
      };
      double s = std::log(count_le(r2) / count_le(r1)) / std::log(r2 / r1);
      out.divergent_flag = s >= 0.98;
    }
  }
  return out;
}

double RadialSet::measure() const {
  double m = 0;
  for (const auto& [a, b] : intervals) m += b - a;
  return m;
}

double RadialSet::log_measure(double r) const {
  double m = 0;
  for (const auto& [a, b] : intervals) {
    double lo = std::max(a, 1.0);
    double hi = std::min(b, r);
    if (hi > lo) m += std::log(hi / lo);
  }
  return m;
}

bool RadialSet::contains(double r) const {
  for (const auto& [a, b] : intervals)
    if (r >= a && r <= b) return true;
  return false;
}

namespace {

std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

std::vector<std::pair<double, double>> complement_in(
    const std::vector<std::pair<double, double>>& merged, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  double cursor = lo;
  for (const auto& [a, b] : merged) {
    if (b <= lo || a >= hi) continue;
    double ca = std::max(a, lo), cb = std::min(b, hi);
    if (ca > cursor) out.emplace_back(cursor, ca);
    cursor = std::max(cursor, cb);
  }
  if (cursor < hi) out.emplace_back(cursor, hi);
  return out;
}

}  // namespace

RadialSet circle_avoidance(const EpsilonSet& eps, double lo, double hi) {
  std::vector<std::pair<double, double>> shadows;
  for (const auto& d : eps.discs) {
    double m = std::abs(d.center);
    shadows.emplace_back(m - d.radius, m + d.radius);
  }
  RadialSet s;
  s.domain_lo = lo;
  s.domain_hi = hi;
  s.intervals = complement_in(merge_intervals(std::move(shadows)), lo, hi);
  return s;
}

double log_density_at(const RadialSet& s, double r) {
  if (r <= 1.0) return 0.0;
  return s.log_measure(r) / std::log(r);
}

std::pair<double, double> log_density_bounds(const RadialSet& s, std::span<const double> r_grid) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  size_t n = r_grid.size();
  for (size_t i = n / 2; i < n; ++i) {
    double d = log_density_at(s, r_grid[i]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo < std::numeric_limits<double>::infinity()))
    fail(ErrorCode::InsufficientGrid, "log density needs grid points > 1");
  return {lo, hi};
}

LogDerivReport logderiv_bound_check(const ExprPtr& g, double r, double beta,
                                    const QuadratureOptions& opt) {
  Registry reg = registry_of(g);
  if (reg.min_modulus_gap(r) < 1e-5 * r)
    fail(ErrorCode::PoleOnCircle,
         "zero/pole within margin of the sample circle r=" + std::to_string(r));
  ExprPtr gp = differentiate(g);
  double T = proximity(g, admissible_radius(beta * r, reg, 0.004, nullptr), opt) +
             counting_integrated(reg, beta * r, PointKind::Pole);
  if (T <= 0) T = 1e-12;
  const int kSamples = 1 << 12;
  auto angles = circle_angles(kSamples);
  auto gv = eval_circle(g, r, angles);
  auto gpv = eval_circle(gp, r, angles);
  std::vector<RegEntry> nearby;
  for (const auto& e : reg.entries())
    if (std::abs(e.loc) < beta * r) nearby.push_back(e);
  double d_fit = 0.0, max_lhs = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    if (gv[i].is_zero()) fail(ErrorCode::PoleOnCircle, "zero of g on the sample circle");
    double lhs = std::exp(std::min(700.0, gpv[i].logmag - gv[i].logmag));
    max_lhs = std::max(max_lhs, lhs);
    Complex z(r * std::cos(angles[i]), r * std::sin(angles[i]));
    double sum = 0.0;
    for (const auto& e : nearby) sum += 2.0 * e.mult / std::abs(z - e.loc);
    d_fit = std::max(d_fit, (lhs - sum) * r / T);
  }
  return {d_fit, max_lhs, kSamples};
}

double miles_rossi_measure(const ExprPtr& f, double r, double gamma) {
  Registry reg = registry_of(f);
  if (!reg.of_kind(PointKind::Pole).empty())
    fail(ErrorCode::DomainError, "miles-rossi statistic needs an entire representation");
  if (!reg.zeros_complete())
    fail(ErrorCode::IncompleteRegistry, "zero counting needs a complete zero registry");
  long n0 = reg.count_inside(r, PointKind::Zero);
  if (n0 == 0) fail(ErrorCode::NoZeros, "n(r,1/f)=0 at r=" + std::to_string(r));
  const int kSamples = 1 << 14;
  auto angles = circle_angles(kSamples);
  auto fv = eval_circle(f, r, angles);
  auto fpv = eval_circle(differentiate(f), r, angles);
  double thresh = std::log(gamma * static_cast<double>(n0));
  long count = 0;
  for (int i = 0; i < kSamples; ++i) {
    if (fv[i].is_zero()) {
      ++count;  // zero of f on the circle: |zf'/f| unbounded there
      continue;
    }
    double t = std::log(r) + fpv[i].logmag - fv[i].logmag;
    if (t > thresh) ++count;
  }
  return 2.0 * kPi * static_cast<double>(count) / kSamples;
}

ArcResult arc_theta(const ExprPtr& H, double r) {
  const int kSamples = 1 << 14;
  auto angles = circle_angles(kSamples);
  std::vector<LogComplex> hv;
  try {
    hv = eval_circle(H, r, angles);
  } catch (const MeroError& e) {
    fail(ErrorCode::ZeroOnCircle, std::string("evaluating |H| on circle: ") + e.what());
  }
  double m0 = std::numeric_limits<double>::infinity();
  for (const auto& v : hv) m0 = std::min(m0, v.is_zero() ? -std::numeric_limits<double>::infinity() : v.logmag);
  if (m0 > 0.0) return {2.0 * kPi, true, m0};

  auto above = [&](double theta) {
    LogComplex v = evaluate(H, Complex(r * std::cos(theta), r * std::sin(theta)));
    return !v.is_zero() && v.logmag > 0.0;
  };
  std::vector<char> ind(kSamples);
  bool any = false;
  for (int i = 0; i < kSamples; ++i) {
    ind[i] = !hv[i].is_zero() && hv[i].logmag > 0.0;
    any = any || ind[i];
  }
  if (!any) return {0.0, false, m0};

  // Refine each indicator transition to 2*pi/2^20 by bisection.
  double step = 2.0 * kPi / kSamples;
  auto refine = [&](int i) {
    // transition between sample i and i+1
    double lo = angles[i], hi = angles[i] + step;
    bool lo_above = ind[i];
    for (int it = 0; it < 6; ++it) {
      double mid = 0.5 * (lo + hi);
      if (above(mid) == lo_above)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  double longest = 0.0;
  int start = -1;
  for (int i = 0; i < kSamples; ++i)
    if (!ind[i]) {
      start = i;
      break;
    }
  // Scan the circular indicator once, starting from a false sample, and
  // refine the endpoints of each maximal true run.
  for (int step = 0; step < kSamples;) {
    if (!ind[(start + step) % kSamples]) {
      ++step;
      continue;
    }
    int first = (start + step) % kSamples;
    while (step < kSamples && ind[(start + step) % kSamples]) ++step;
    int last = (start + step - 1) % kSamples;
    double a0 = refine((first - 1 + kSamples) % kSamples);
    double a1 = refine(last);
    double len = a1 - a0;
    while (len < 0) len += 2.0 * kPi;
    while (len > 2.0 * kPi) len -= 2.0 * kPi;
    longest = std::max(longest, len);
  }
  return {longest, false, m0};
}

RadialSet pole_coincidence_set(const Registry& reg, double R) {
  if (!reg.poles_complete())
    fail(ErrorCode::IncompleteRegistry, "pole coincidence set needs complete poles");
  std::vector<std::pair<double, double>> excluded;
  for (const auto& e : reg.entries()) {
    if (e.kind != PointKind::Pole) continue;
    double m = std::abs(e.loc);
    excluded.emplace_back(m, m + 1.0);
  }
  RadialSet s;
  s.domain_lo = R / 2;
  s.domain_hi = R;
  s.intervals = complement_in(merge_intervals(std::move(excluded)), R / 2, R);
  return s;
}

}  // namespace merodiff
