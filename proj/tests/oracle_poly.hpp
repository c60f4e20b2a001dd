// Test-only oracles, independent of the library evaluation paths:
//  - dense symbolic expansion of rational expression trees
//  - Durand-Kerner polynomial roots
//  - brute-force forward-difference recurrence on plain complex callables
#ifndef MERODIFF_TESTS_ORACLE_POLY_HPP
#define MERODIFF_TESTS_ORACLE_POLY_HPP

#include <complex>
#include <functional>
#include <vector>

#include "merodiff/expr.hpp"

namespace oracle {

using merodiff::BigComplex;
using merodiff::BigReal;

struct Poly {
  std::vector<BigComplex> c;  // c[k] multiplies z^k; empty = zero polynomial

  static Poly zero();
  static Poly constant(const BigComplex& v);
  static Poly monomial(int k, const BigComplex& v);
  int degree() const { return static_cast<int>(c.size()) - 1; }
  void trim(double rel_tol = 0.0);
  BigComplex eval(const BigComplex& z) const;
  Poly shifted(const BigComplex& a) const;  // p(z + a)
  Poly derivative() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const BigComplex& s, const Poly& a);

struct Rat {
  Poly num, den;
};

// Expand any expression tree into a dense rational function. Only usable on
// rational trees of modest degree (tests keep K small).
Rat expand_rational(const merodiff::ExprPtr& e);

// max |coeff| of p relative to scale (0 scale = absolute)
double max_coeff_abs(const Poly& p);
bool poly_is_zero(const Poly& p, double tol);

// Durand-Kerner in double precision; coeffs[k] multiplies z^k.
std::vector<std::complex<double>> poly_roots(std::vector<std::complex<double>> coeffs,
                                             int iters = 400);

std::vector<std::complex<double>> to_double_poly(const Poly& p);

// D^n f by the recurrence, on a plain callable.
std::complex<double> brute_delta(const std::function<std::complex<double>(std::complex<double>)>& f,
                                 int n, std::complex<double> z);

}  // namespace oracle

#endif
