#include "merodiff/wiman.hpp"

#include <algorithm>
#include <cmath>

#include "merodiff/kernels.hpp"

namespace merodiff {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}
}  // namespace

TaylorWindow taylor_coeffs(const ExprPtr& f, int m, double r) {
  if (m < 1 || r <= 0) fail(ErrorCode::DomainError, "bad taylor window request");
  Registry reg = registry_of(f);
  double nearest_pole = std::numeric_limits<double>::infinity();
  for (const auto& e : reg.of_kind(PointKind::Pole)) {
    double mod = std::abs(e.loc);
    if (mod <= r) fail(ErrorCode::PoleInDisk, "registered pole inside extraction disk");
    nearest_pole = std::min(nearest_pole, mod);
  }
  int M = next_pow2(std::max(8 * m, 64));
  auto angles = circle_angles(M);
  auto vals = eval_circle(f, r, angles);
  std::vector<Complex> samples(M);
  for (int j = 0; j < M; ++j) {
    if (!vals[j].is_zero() && vals[j].logmag > 690.0)
      fail(ErrorCode::Overflow, "circle values exceed the linear double range");
    samples[j] = to_complex(vals[j]);
  }

  // root-of-unity table: e^{-2*pi*i*j/M}
  std::vector<Complex> tw(M);
  for (int j = 0; j < M; ++j) tw[j] = Complex(std::cos(kTwoPi * j / M), -std::sin(kTwoPi * j / M));

  TaylorWindow w;
  w.radius = r;
  double logr = std::log(r);
  double logM = std::log(static_cast<double>(M));
  for (int k = 0; k < m; ++k) {
    NeumaierSum<double> re, im;
    std::size_t idx = 0;
    for (int j = 0; j < M; ++j) {
      const Complex& t = tw[idx];
      re.add(samples[j].real() * t.real() - samples[j].imag() * t.imag());
      im.add(samples[j].real() * t.imag() + samples[j].imag() * t.real());
      idx += k;
      if (idx >= static_cast<std::size_t>(M)) idx -= M;
    }
    Complex s(re.total(), im.total());
    if (s == Complex(0, 0)) {
      w.log_coeffs.push_back(LogComplex::zero());
    } else {
      double lm = std::log(std::abs(s)) - logM - k * logr;
      double a = std::arg(s);
      if (a <= -kPi) a = kPi;
      w.log_coeffs.push_back({lm, a});
    }
  }

  // Flag coefficients whose term |a_k| r^k is buried below the maximum term.
  double log_mu = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k)
    if (!w.log_coeffs[k].is_zero()) log_mu = std::max(log_mu, w.log_coeffs[k].logmag + k * logr);
  w.flagged.assign(m, 0);
  w.coeffs.resize(m);
  for (int k = 0; k < m; ++k) {
    bool buried = w.log_coeffs[k].is_zero() ||
                  w.log_coeffs[k].logmag + k * logr < log_mu + std::log(1e-14);
    if (buried) {
      w.flagged[k] = 1;
      w.coeffs[k] = Complex(0, 0);
      w.log_coeffs[k] = LogComplex::zero();
    } else {
      w.coeffs[k] = to_complex(w.log_coeffs[k]);
    }
  }

  // Aliasing tail bound via Cauchy on a test radius outside r.
  double r_out = std::min(2.0 * r, 0.9 * nearest_pole);
  if (r_out > 1.02 * r) {
    auto out_vals = eval_circle(f, r_out, circle_angles(256));
    double max_out = -std::numeric_limits<double>::infinity();
    for (const auto& v : out_vals)
      if (!v.is_zero()) max_out = std::max(max_out, v.logmag);
    w.error_bound_log = max_out + M * (logr - std::log(r_out));
    w.log_r_out = std::log(r_out);
  } else {
    w.error_bound_log = std::numeric_limits<double>::infinity();
    w.log_r_out = logr;
  }
  return w;
}

MaxTerm max_term_central_index(const TaylorWindow& w, double r) {
  int m = static_cast<int>(w.log_coeffs.size());
  double logr = std::log(r);
  double best = -std::numeric_limits<double>::infinity();
  int best_k = -1;
  for (int k = 0; k < m; ++k) {
    if (w.log_coeffs[k].is_zero()) continue;
    double v = w.log_coeffs[k].logmag + k * logr;
    double tol = 1e-12 * (1.0 + std::fabs(v));
    if (v > best + tol) {
      best = v;
      best_k = k;
    } else if (v >= best - tol) {
      best_k = k;  // tie: the definition takes the largest index
      best = std::max(best, v);
    }
  }
  if (best_k < 0) fail(ErrorCode::DomainError, "window has no usable coefficients");
  if (best_k >= m - 2)
    fail(ErrorCode::WindowTooShort, "maximum term at the window edge (k=" +
                                        std::to_string(best_k) + ", m=" + std::to_string(m) + ")");
  return {best, best_k};
}

WvResult wv_ratio_check(const ExprPtr& f, int n, double r, int window_len) {
  TaylorWindow w = taylor_coeffs(f, window_len, r);
  MaxTerm mt = max_term_central_index(w, r);

  const int kCoarse = 1 << 12;
  auto angles = circle_angles(kCoarse);
  auto vals = eval_circle(f, r, angles);
  int best_i = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarse; ++i) {
    double lm = vals[i].is_zero() ? -std::numeric_limits<double>::infinity() : vals[i].logmag;
    if (lm > best) {
      best = lm;
      best_i = i;
    }
  }
  // flat-modulus flag: a rival peak of essentially the same height far away
  bool flat = false;
  for (int i = 0; i < kCoarse; ++i) {
    int d = std::abs(i - best_i);
    d = std::min(d, kCoarse - d);
    if (d <= 8) continue;
    double lm = vals[i].is_zero() ? -std::numeric_limits<double>::infinity() : vals[i].logmag;
    if (lm > best - 1e-12 * (1.0 + std::fabs(best))) {
      flat = true;
      break;
    }
  }

  auto lm_at = [&](double theta) {
    LogComplex v = evaluate(f, Complex(r * std::cos(theta), r * std::sin(theta)));
    return v.is_zero() ? -std::numeric_limits<double>::infinity() : v.logmag;
  };
  double step = kTwoPi / kCoarse;
  double a = angles[best_i] - step, b = angles[best_i] + step;
  // golden-section ascent on log|f|
  const double kGr = 0.6180339887498949;
  double x1 = b - kGr * (b - a), x2 = a + kGr * (b - a);
  double f1 = lm_at(x1), f2 = lm_at(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGr * (b - a);
      f2 = lm_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGr * (b - a);
      f1 = lm_at(x1);
    }
  }
  double theta_star = 0.5 * (a + b);
  Complex zs(r * std::cos(theta_star), r * std::sin(theta_star));

  if (mt.central_index < 1)
    fail(ErrorCode::DomainError, "central index 0: ratio statistic undefined");
  ExprPtr fn = differentiate_n(f, n);
  LogComplex ratio = evaluate(fn, zs) / evaluate(f, zs);
  ratio = ratio * lc_pow(lc_from_cx(Cx<double>{zs.real(), zs.imag()}), n);
  ratio = ratio / LogComplex{n * std::log(static_cast<double>(mt.central_index)), 0.0};
  double dev = ratio.logmag > 50.0 ? std::numeric_limits<double>::infinity()
                                   : std::abs(to_complex(ratio) - Complex(1, 0));
  return {dev, theta_star, flat, mt.central_index, mt.log_mu};
}

CentralIndexProfile central_index_profile(const ExprPtr& f, std::span<const double> r_grid,
                                          int window_len) {
  CentralIndexProfile p;
  for (double r : r_grid) {
    TaylorWindow w = taylor_coeffs(f, window_len, r);
    MaxTerm mt = max_term_central_index(w, r);
    if (!p.N.empty() && mt.central_index < p.N.back()) p.monotone = false;
    p.r.push_back(r);
    p.log_mu.push_back(mt.log_mu);
    p.N.push_back(mt.central_index);
  }
  return p;
}

double central_index_order(const CentralIndexProfile& p) {
  size_t n = p.r.size();
  if (n < 3 || p.r.back() / p.r.front() < 1e3)
    fail(ErrorCode::InsufficientGrid, "central index order needs >= 3 decades");
  double hi = 0.0;
  for (size_t i = n / 2; i < n; ++i) {
    if (p.r[i] <= 1.0) continue;
    double N = std::max(1, p.N[i]);
    hi = std::max(hi, std::log(N) / std::log(p.r[i]));
  }
  return hi;
}

}  // namespace merodiff
