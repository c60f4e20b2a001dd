#include "merodiff/contour.hpp"

#include <algorithm>
#include <cmath>

namespace merodiff {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

double seg_distance(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  double t = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}
}  // namespace

Contour Contour::circle(Complex center, double radius, int orientation) {
  if (radius <= 0) fail(ErrorCode::DomainError, "circle radius must be positive");
  Contour c;
  c.shape = Shape::Circle;
  c.center = center;
  c.radius = radius;
  c.orientation = orientation;
  return c;
}

Contour Contour::rectangle(Complex lo, Complex hi, int orientation) {
  if (!(hi.real() > lo.real()) || !(hi.imag() > lo.imag()))
    fail(ErrorCode::DomainError, "degenerate rectangle");
  Contour c;
  c.shape = Shape::Rectangle;
  c.lo = lo;
  c.hi = hi;
  c.center = 0.5 * (lo + hi);
  c.orientation = orientation;
  return c;
}

Complex Contour::at(double t) const {
  if (shape == Shape::Circle) {
    double a = kTwoPi * t;
    return center + Complex(radius * std::cos(a), radius * std::sin(a));
  }
  double w = hi.real() - lo.real();
  double h = hi.imag() - lo.imag();
  double per = 2 * (w + h);
  double s = t * per;
  if (s < w) return {lo.real() + s, lo.imag()};
  s -= w;
  if (s < h) return {hi.real(), lo.imag() + s};
  s -= h;
  if (s < w) return {hi.real() - s, hi.imag()};
  s -= w;
  return {lo.real(), hi.imag() - s};
}

double Contour::scale() const {
  if (shape == Shape::Circle) return radius;
  return std::abs(hi - lo);
}

double Contour::distance_to(Complex p) const {
  if (shape == Shape::Circle) return std::fabs(std::abs(p - center) - radius);
  Complex a = lo, b{hi.real(), lo.imag()}, c = hi, d{lo.real(), hi.imag()};
  return std::min(std::min(seg_distance(p, a, b), seg_distance(p, b, c)),
                  std::min(seg_distance(p, c, d), seg_distance(p, d, a)));
}

CountResult winding_count(const ExprPtr& f, const Contour& c) {
  if (is_zero_expr(*f)) fail(ErrorCode::DomainError, "winding of the zero function");
  Registry reg = registry_of(f);
  double margin = 1e-9 * c.scale();
  for (const auto& e : reg.entries()) {
    if (c.distance_to(e.loc) < margin)
      fail(ErrorCode::BoundaryHit, "registered zero/pole within margin of the contour");
  }

  auto phase_at = [&](double t) {
    LogComplex v;
    try {
      v = evaluate(f, c.at(t));
    } catch (const MeroError& e) {
      if (e.code() == ErrorCode::PoleHit)
        fail(ErrorCode::BoundaryHit, std::string("pole met on the contour: ") + e.what());
      throw;
    }
    if (v.is_zero()) fail(ErrorCode::BoundaryHit, "zero met on the contour");
    return v.arg;
  };

  const std::size_t kBudget = 1 << 20;
  std::vector<std::pair<double, double>> samples;  // (t, arg), sorted by t
  samples.reserve(1024);
  for (int i = 0; i < 256; ++i) {
    double t = i / 256.0;
    samples.emplace_back(t, phase_at(t));
  }
  bool refined = false;
  while (true) {
    bool clean = true;
    std::vector<std::pair<double, double>> next;
    next.reserve(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& cur = samples[i];
      const auto& nxt = samples[(i + 1) % samples.size()];
      next.push_back(cur);
      double t1 = i + 1 == samples.size() ? nxt.first + 1.0 : nxt.first;
      if (std::fabs(wrap_angle(nxt.second - cur.second)) >= kPi / 2) {
        double tm = 0.5 * (cur.first + t1);
        if (tm >= 1.0) tm -= 1.0;
        next.emplace_back(tm, phase_at(tm));
        clean = false;
        refined = true;
      }
    }
    samples = std::move(next);
    if (clean) break;
    if (samples.size() > kBudget)
      fail(ErrorCode::NonConvergent,
           "winding refinement budget exhausted (" + std::to_string(samples.size()) + " samples)");
  }

  NeumaierSum<double> total;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& cur = samples[i];
    const auto& nxt = samples[(i + 1) % samples.size()];
    total.add(wrap_angle(nxt.second - cur.second));
  }
  double turns = total.total() / kTwoPi * c.orientation;
  long net = std::lround(turns);
  double residual = std::fabs(turns - static_cast<double>(net));
  if (residual >= 0.1)
    fail(ErrorCode::NonConvergent, "winding residual " + std::to_string(residual) + " turns");
  return {net, samples.size(), refined, residual};
}

long count_zeros_in_disk(const ExprPtr& f, double r, std::optional<long> poles_inside) {
  long poles;
  if (poles_inside) {
    poles = *poles_inside;
  } else {
    Registry reg = registry_of(f);
    if (!reg.poles_complete())
      fail(ErrorCode::IncompleteRegistry,
           "zero counting needs the pole count inside the disk (override or complete registry)");
    poles = reg.count_inside(r, PointKind::Pole);
  }
  CountResult w = winding_count(f, Contour::circle(Complex(0, 0), r));
  return w.net + poles;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

double frac(double x) { return x - std::floor(x); }

struct Subdivider {
  const ExprPtr& f;
  const std::vector<RegEntry>& poles;
  int max_depth;
  double tol;
  std::vector<ZeroBox> out;

  long poles_in(Complex lo, Complex hi) const {
    long n = 0;
    for (const auto& e : poles) {
      if (e.loc.real() >= lo.real() && e.loc.real() <= hi.real() && e.loc.imag() >= lo.imag() &&
          e.loc.imag() <= hi.imag())
        n += e.mult;
    }
    return n;
  }

  long count_box(Complex lo, Complex hi) const {
    CountResult w = winding_count(f, Contour::rectangle(lo, hi));
    return w.net + poles_in(lo, hi);
  }

  void subdivide(Complex lo, Complex hi, int depth, long count) {
    if (count <= 0) return;
    double diam = std::abs(hi - lo);
    if (diam <= tol || depth >= max_depth) {
      out.push_back({0.5 * (lo + hi), 0.5 * (hi.real() - lo.real()),
                     0.5 * (hi.imag() - lo.imag()), count, diam <= tol});
      return;
    }
    double w = hi.real() - lo.real();
    double h = hi.imag() - lo.imag();
    for (int attempt = 0; attempt <= 12; ++attempt) {
      double ox = attempt == 0 ? 0.0 : (frac(attempt * kGolden) - 0.5) * 0.02;
      double oy = attempt == 0 ? 0.0 : (frac(attempt * kGolden * kGolden) - 0.5) * 0.02;
      double cx = lo.real() + w * (0.5 + ox);
      double cy = lo.imag() + h * (0.5 + oy);
      Complex c00_lo = lo, c00_hi{cx, cy};
      Complex c10_lo{cx, lo.imag()}, c10_hi{hi.real(), cy};
      Complex c01_lo{lo.real(), cy}, c01_hi{cx, hi.imag()};
      Complex c11_lo{cx, cy}, c11_hi = hi;
      try {
        long n00 = count_box(c00_lo, c00_hi);
        long n10 = count_box(c10_lo, c10_hi);
        long n01 = count_box(c01_lo, c01_hi);
        long n11 = count_box(c11_lo, c11_hi);
        if (n00 + n10 + n01 + n11 != count) continue;  // a point sat on a shared edge
        subdivide(c00_lo, c00_hi, depth + 1, n00);
        subdivide(c10_lo, c10_hi, depth + 1, n10);
        subdivide(c01_lo, c01_hi, depth + 1, n01);
        subdivide(c11_lo, c11_hi, depth + 1, n11);
        return;
      } catch (const MeroError& e) {
        if (e.code() != ErrorCode::BoundaryHit && e.code() != ErrorCode::NonConvergent) throw;
      }
    }
    fail(ErrorCode::BoundaryHit, "subdivision jitter budget exhausted");
  }
};

}  // namespace

std::vector<ZeroBox> locate_zeros(const ExprPtr& f, Complex lo, Complex hi, int max_depth,
                                  double tol, const std::vector<RegEntry>* pole_list) {
  std::vector<RegEntry> poles;
  if (pole_list) {
    poles = *pole_list;
  } else {
    Registry reg = registry_of(f);
    if (!reg.poles_complete())
      fail(ErrorCode::IncompleteRegistry, "zero localization needs a known pole list");
    poles = reg.of_kind(PointKind::Pole);
  }
  Subdivider s{f, poles, max_depth, tol, {}};
  long top = s.count_box(lo, hi);
  s.subdivide(lo, hi, 0, top);
  std::sort(s.out.begin(), s.out.end(), [](const ZeroBox& a, const ZeroBox& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return s.out;
}

}  // namespace merodiff
