#ifndef MERODIFF_LOGCOMPLEX_HPP
#define MERODIFF_LOGCOMPLEX_HPP

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "merodiff/scalar.hpp"

namespace merodiff {

// Complex value stored as (log-modulus, argument). logmag = -inf encodes 0
// (arg 0 by convention). Products add logmags and wrap arguments, so values
// spanning thousands of orders of magnitude never overflow.
template <class R>
struct BasicLogComplex {
  R logmag;
  R arg;

  static BasicLogComplex zero() {
    return {-ScalarTraits<R>::pos_inf(), ScalarTraits<R>::from_double(0.0)};
  }
  static BasicLogComplex one() {
    return {ScalarTraits<R>::from_double(0.0), ScalarTraits<R>::from_double(0.0)};
  }
  bool is_zero() const {
    using std::isinf;
    return isinf(logmag) && logmag < ScalarTraits<R>::from_double(0.0);
  }

  friend BasicLogComplex operator*(const BasicLogComplex& a, const BasicLogComplex& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.logmag + b.logmag, wrap_angle(a.arg + b.arg)};
  }
  friend BasicLogComplex operator/(const BasicLogComplex& a, const BasicLogComplex& b) {
    if (a.is_zero()) return zero();
    return {a.logmag - b.logmag, wrap_angle(a.arg - b.arg)};
  }
};

using LogComplex = BasicLogComplex<double>;
using LogComplexHp = BasicLogComplex<BigReal>;

template <class R>
BasicLogComplex<R> lc_neg(const BasicLogComplex<R>& a) {
  if (a.is_zero()) return a;
  return {a.logmag, wrap_angle(a.arg + ScalarTraits<R>::pi())};
}

template <class R>
BasicLogComplex<R> lc_conj(const BasicLogComplex<R>& a) {
  if (a.is_zero()) return a;
  return {a.logmag, wrap_angle(-a.arg)};
}

template <class R>
BasicLogComplex<R> lc_pow(const BasicLogComplex<R>& a, long n) {
  if (a.is_zero()) return a;
  R k = ScalarTraits<R>::from_double(static_cast<double>(n));
  return {a.logmag * k, wrap_angle(a.arg * k)};
}

template <class R>
BasicLogComplex<R> lc_from_cx(const Cx<R>& z) {
  using std::atan2;
  using std::log;
  R m = abs(z);
  if (m == ScalarTraits<R>::from_double(0.0)) return BasicLogComplex<R>::zero();
  R a = atan2(z.im, z.re);
  R pi = ScalarTraits<R>::pi();
  if (a <= -pi) a = pi;  // atan2(-0, x<0) lands on -pi; the invariant wants (+pi]
  return {log(m), a};
}

template <class R>
Cx<R> lc_to_cx(const BasicLogComplex<R>& v) {
  using std::cos;
  using std::exp;
  using std::sin;
  if (v.is_zero()) {
    return {ScalarTraits<R>::from_double(0.0), ScalarTraits<R>::from_double(0.0)};
  }
  R m = exp(v.logmag);
  return {m * cos(v.arg), m * sin(v.arg)};
}

// Conversion to a linear complex double. A logmag beyond the double exponent
// range yields signed-infinity components, never a silent wrap.
Complex to_complex(const LogComplex& v);

template <class R>
struct NeumaierSum {
  R s = ScalarTraits<R>::from_double(0.0);
  R c = ScalarTraits<R>::from_double(0.0);
  void add(const R& x) {
    using std::abs;
    R t = s + x;
    if (abs(s) >= abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  R total() const { return s + c; }
};

// Compensated sum of log-scale values: all addends are rescaled by the
// maximum logmag, accumulated with Neumaier compensation, and the result is
// returned in log scale. `worst_drop` (natural-log units the result fell
// below the largest addend) drives the precision-loss escalation policy.
template <class R>
BasicLogComplex<R> log_sum(std::span<const BasicLogComplex<R>> terms, R* worst_drop = nullptr) {
  using std::cos;
  using std::exp;
  using std::isinf;
  using std::log;
  using std::sin;
  R zero = ScalarTraits<R>::from_double(0.0);
  bool any = false;
  R maxlog = zero;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    if (!any || t.logmag > maxlog) maxlog = t.logmag;
    any = true;
  }
  if (!any) return BasicLogComplex<R>::zero();
  NeumaierSum<R> re, im;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    R w = exp(t.logmag - maxlog);
    re.add(w * cos(t.arg));
    im.add(w * sin(t.arg));
  }
  R re_t = re.total();
  R im_t = im.total();
  if (re_t == zero && im_t == zero) {
    // Exact cancellation of the rescaled addends. The true value may still
    // be nonzero below this precision, so the drop is recorded as infinite;
    // the double path escalates on it, the extended path accepts the zero.
    if (worst_drop) *worst_drop = ScalarTraits<R>::pos_inf();
    return BasicLogComplex<R>::zero();
  }
  using std::hypot;
  R m = hypot(re_t, im_t);
  R drop = -log(m);
  if (worst_drop && drop > *worst_drop) *worst_drop = drop;
  using std::atan2;
  R a = atan2(im_t, re_t);
  R pi = ScalarTraits<R>::pi();
  if (a <= -pi) a = pi;
  return {maxlog + log(m), a};
}

template <class R>
R max2(const R& a, const R& b) {
  return a > b ? a : b;
}

// |a - b| / max(|a|, |b|), evaluated after rescaling by the larger logmag.
template <class R>
double lc_rel_dev(const BasicLogComplex<R>& a, const BasicLogComplex<R>& b) {
  using std::cos;
  using std::exp;
  using std::sin;
  if (a.is_zero() && b.is_zero()) return 0.0;
  if (a.is_zero() || b.is_zero()) return 1.0;
  R s = max2(a.logmag, b.logmag);
  R wa = exp(a.logmag - s), wb = exp(b.logmag - s);
  Cx<R> ca{wa * cos(a.arg), wa * sin(a.arg)};
  Cx<R> cb{wb * cos(b.arg), wb * sin(b.arg)};
  R num = abs(Cx<R>{ca.re - cb.re, ca.im - cb.im});
  R den = max2(abs(ca), abs(cb));
  return ScalarTraits<R>::to_double(num / den);
}

inline LogComplex lc_down_hp(const LogComplexHp& v) {
  return {v.logmag.to_double(), v.arg.to_double()};
}

}  // namespace merodiff

#endif
