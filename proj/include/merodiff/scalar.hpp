#ifndef MERODIFF_SCALAR_HPP
#define MERODIFF_SCALAR_HPP

#include <cmath>
#include <complex>
#include <limits>

#include "merodiff/bigreal.hpp"

namespace merodiff {

using Complex = std::complex<double>;

// Scalar trait: the evaluation machinery is templated over R in {double, BigReal}.
template <class R>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_double(double d) { return d; }
  static double to_double(double d) { return d; }
  static double pi() { return 3.141592653589793238462643383279502884; }
  static double pos_inf() { return std::numeric_limits<double>::infinity(); }
  // Natural log of the unit roundoff.
  static double eps_log() { return -36.7368005696771; }  // log(2^-53)
  static double mantissa_nats() { return 53 * 0.6931471805599453; }
};

template <>
struct ScalarTraits<BigReal> {
  static BigReal from_double(double d) { return BigReal(d); }
  static double to_double(const BigReal& x) { return x.to_double(); }
  static BigReal pi() { return BigReal::pi(); }
  static BigReal pos_inf() { return BigReal::pos_inf(); }
  static double eps_log() {
    return -0.6931471805599453 * static_cast<double>(working_precision());
  }
  static double mantissa_nats() {
    return 0.6931471805599453 * static_cast<double>(working_precision());
  }
};

// Minimal complex value over R. std::complex is only guaranteed for built-in
// floating types, so both precisions go through this one struct.
template <class R>
struct Cx {
  R re{};
  R im{};

  Cx() = default;
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator/(const Cx& a, const Cx& b) {
    R d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend Cx conj(const Cx& a) { return {a.re, -a.im}; }
};

template <class R>
R abs(const Cx<R>& a) {
  using std::hypot;
  return hypot(a.re, a.im);
}

template <class R>
R arg(const Cx<R>& a) {
  using std::atan2;
  return atan2(a.im, a.re);
}

template <class R>
Cx<R> cx_from(const Complex& z) {
  return {ScalarTraits<R>::from_double(z.real()), ScalarTraits<R>::from_double(z.imag())};
}

template <class R>
Complex cx_to_complex(const Cx<R>& z) {
  return {ScalarTraits<R>::to_double(z.re), ScalarTraits<R>::to_double(z.im)};
}

using BigComplex = Cx<BigReal>;

inline BigComplex big_complex(double re, double im) { return {BigReal(re), BigReal(im)}; }
inline BigComplex big_complex(const Complex& z) { return big_complex(z.real(), z.imag()); }
inline Complex to_complexd(const BigComplex& z) { return {z.re.to_double(), z.im.to_double()}; }

// Wrap an angle into (-pi, pi]. The modulus 2*pi is applied in a split
// hi/lo representation so the reduction stays accurate for |x| up to ~1e6.
inline double wrap_angle(double x) {
  static constexpr double kTwoPiHi = 6.283185307179586;
  static constexpr double kTwoPiLo = 2.4492935982947064e-16;
  double n = std::nearbyint(x * 0.15915494309189535);
  double r = x - n * kTwoPiHi;
  r -= n * kTwoPiLo;
  if (r <= -3.141592653589793) r += kTwoPiHi;
  if (r > 3.141592653589793) r -= kTwoPiHi;
  return r;
}

inline BigReal wrap_angle(const BigReal& x) {
  BigReal pi = BigReal::pi();
  BigReal two_pi = pi + pi;
  BigReal r = fmod(x, two_pi);
  if (r <= -pi) r = r + two_pi;
  if (r > pi) r = r - two_pi;
  return r;
}

}  // namespace merodiff

#endif
