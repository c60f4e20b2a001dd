#include <doctest.h>

#include <cmath>

#include "merodiff/stats.hpp"
#include "oracle_poly.hpp"

using namespace merodiff;

namespace {

double rel_err(Complex a, Complex b) {
  double m = std::max(std::abs(a), std::abs(b));
  return m == 0 ? 0.0 : std::abs(a - b) / m;
}

}  // namespace

TEST_SUITE_BEGIN("expr");

TEST_CASE("evaluate: monomial at 2") {
  LogComplex v = evaluate(make_monomial(2), Complex(2, 0));
  CHECK(v.logmag == doctest::Approx(std::log(4.0)));
  CHECK(v.arg == 0.0);
}

TEST_CASE("evaluate: factor product cases") {
  // A_1 = 4*1^4 = 4, so the single factor at z = 4 is 1 + 4/4 = 2
  ExprPtr H = make_factor_product(std::vector<Complex>{{4, 0}});
  CHECK(rel_err(evaluate_c(H, Complex(4, 0)), Complex(2, 0)) < 1e-15);
  // zero of the factor
  CHECK(evaluate(H, Complex(-4, 0)).is_zero());
}

TEST_CASE("evaluate: quotient pole") {
  ExprPtr q = make_quotient(make_const(Complex(1, 0)), make_var());
  CHECK_THROWS_AS((void)evaluate(q, Complex(0, 0)), MeroError);
  CHECK(rel_err(evaluate_c(q, Complex(2, 0)), Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("evaluate: partial fractions pole hit and value") {
  ExprPtr g = make_partial_fractions({{Complex(1, 0), Complex(1, 0)}});
  CHECK_THROWS_AS((void)evaluate(g, Complex(1, 0)), MeroError);
  CHECK(rel_err(evaluate_c(g, Complex(3, 0)), Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("evaluate is deterministic bit for bit") {
  ExprPtr f = make_quotient(make_factor_product(std::vector<Complex>{{4, 0}, {64, 0}, {729, 0}}),
                            make_partial_fractions({{Complex(0, 0.5), Complex(-2, 2)},
                                                    {Complex(0, -0.5), Complex(2, 2)}}));
  Complex z(1.7, -0.3);
  LogComplex a = evaluate(f, z);
  LogComplex b = evaluate(f, z);
  CHECK(a.logmag == b.logmag);
  CHECK(a.arg == b.arg);
}

TEST_CASE("differentiate: basics") {
  CHECK(is_zero_expr(*differentiate(make_const(Complex(3, 1)))));
  // (z^2)' = 2z pointwise
  ExprPtr d = differentiate(make_monomial(2));
  Complex z(1.3, 0.4);
  CHECK(rel_err(evaluate_c(d, z), 2.0 * z) < 1e-15);
  // partial fraction term-wise power rule: (c/(z-p))' = -c/(z-p)^2
  ExprPtr g = make_partial_fractions({{Complex(2, 0), Complex(1, 1)}});
  ExprPtr gp = differentiate(g);
  Complex w(0.2, -0.6);
  Complex expect = -2.0 / ((w - Complex(1, 1)) * (w - Complex(1, 1)));
  CHECK(rel_err(evaluate_c(gp, w), expect) < 1e-14);
}

TEST_CASE("differentiate: factor product via logarithmic derivative") {
  ExprPtr H = make_factor_product(std::vector<Complex>{{4, 0}, {64, 0}});
  ExprPtr Hp = differentiate(H);
  // H' = H * (1/(z+4) + 1/(z+64))
  Complex z(2.5, 1.5);
  Complex h = evaluate_c(H, z);
  Complex expect = h * (1.0 / (z + 4.0) + 1.0 / (z + 64.0));
  CHECK(rel_err(evaluate_c(Hp, z), expect) < 1e-14);
  // symbolic cross-check
  oracle::Rat r = oracle::expand_rational(Hp);
  oracle::Rat manual = oracle::expand_rational(
      make_sum({make_product({make_const(Complex(1.0 / 4, 0)),
                              make_factor_product(std::vector<Complex>{{64, 0}})}),
                make_product({make_const(Complex(1.0 / 64, 0)),
                              make_factor_product(std::vector<Complex>{{4, 0}})})}));
  oracle::Poly diff = r.num * manual.den - manual.num * r.den;
  CHECK(oracle::poly_is_zero(diff, 1e-60));
}

TEST_CASE("shift: evaluation, composition, pole translation") {
  CHECK(rel_err(evaluate_c(make_shift(make_var(), Complex(1, 0)), Complex(0, 0)), Complex(1, 0)) <
        1e-15);
  // composition law on random samples
  ExprPtr e = make_quotient(make_monomial(2),
                            make_factor_product(std::vector<Complex>{{3, 0}, {11, 0}}));
  ExprPtr s1 = make_shift(make_shift(e, Complex(0.5, 0.25)), Complex(-0.125, 1.0));
  ExprPtr s2 = make_shift(e, Complex(0.375, 1.25));
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    Complex z = rng.in_disk(8.0);
    if (registry_of(s2).min_distance_to(z) < 0.1) continue;
    CHECK(lc_rel_dev(evaluate(s1, z), evaluate(s2, z)) < 1e-12);
  }
  // pole translation: shift of 1/z by 1 has its pole at -1
  Registry reg = registry_of(make_shift(make_partial_fractions({{Complex(1, 0), Complex(0, 0)}}),
                                        Complex(1, 0)));
  REQUIRE(reg.entries().size() == 1);
  CHECK(reg.entries()[0].kind == PointKind::Pole);
  CHECK(std::abs(reg.entries()[0].loc - Complex(-1, 0)) < 1e-15);
}

TEST_CASE("differentiate and shift commute") {
  ExprPtr e = make_quotient(make_factor_product(std::vector<Complex>{{2, 0}, {32, 0}}),
                            make_shift(make_monomial(1), Complex(-5, 1)));
  ExprPtr a = differentiate(make_shift(e, Complex(0.7, -0.2)));
  ExprPtr b = make_shift(differentiate(e), Complex(0.7, -0.2));
  Registry reg = registry_of(a);
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Complex z = rng.in_disk(10.0);
    if (reg.min_distance_to(z) < 0.2) continue;
    CHECK(lc_rel_dev(evaluate(a, z), evaluate(b, z)) < 1e-12);
  }
}

TEST_CASE("registry: spec cases") {
  Registry r1 = registry_of(make_factor_product(std::vector<Complex>{{4, 0}, {64, 0}}));
  CHECK(r1.complete());
  CHECK(r1.count_inside(100, PointKind::Zero) == 2);
  CHECK(r1.count_inside(10, PointKind::Zero) == 1);

  Registry r2 = registry_of(
      make_quotient(make_var(), make_factor_product(std::vector<Complex>{{4, 0}})));
  CHECK(r2.complete());
  CHECK(r2.count_inside(10, PointKind::Zero) == 1);
  CHECK(r2.count_inside(10, PointKind::Pole) == 1);
  CHECK(r2.mult_at_origin(PointKind::Zero) == 1);

  // sum of two partial-fraction groups: poles listed, not complete
  Registry r3 = registry_of(make_sum({make_partial_fractions({{Complex(1, 0), Complex(2, 0)}}),
                                      make_partial_fractions({{Complex(1, 0), Complex(-2, 0)}})}));
  CHECK_FALSE(r3.complete());
  CHECK(r3.count_inside(10, PointKind::Pole) == 2);
}

TEST_CASE("registry: duplicate merge and cancellation") {
  // (z-1) * (z-1) -> double zero at 1
  ExprPtr lin = make_shift(make_monomial(1), Complex(-1, 0));
  Registry r = registry_of(make_product({lin, lin}));
  REQUIRE(r.entries().size() == 1);
  CHECK(r.entries()[0].mult == 2);
  // (z-1)/(z-1) style cancellation
  Registry q = registry_of(make_quotient(lin, lin));
  CHECK(q.entries().empty());
  CHECK(q.complete());
}

TEST_CASE("precision escalation fires on catastrophic cancellation") {
  // (z + 1e-20) - z: the double path cancels exactly, the escalated path
  // recovers the true tiny difference from the extended-precision offset.
  PrecisionGuard guard(256);
  BigComplex tiny{BigReal::from_string("1e-20"), BigReal(0.0)};
  ExprPtr f = make_sum(
      {make_shift(make_var(), tiny), make_product({make_const(Complex(-1, 0)), make_var()})});
  LogComplex v = evaluate(f, Complex(0.3, 0.1));
  CHECK(v.logmag == doctest::Approx(std::log(1e-20)).epsilon(1e-10));
}

TEST_CASE("hp and double paths agree away from cancellation") {
  ExprPtr f = make_quotient(make_factor_product(std::vector<Complex>{{4, 0}, {64, 0}}),
                            make_shift(make_monomial(2), Complex(3, -1)));
  Complex z(1.25, 0.5);
  PrecisionGuard guard(256);
  LogComplexHp hp = evaluate_hp(f, big_complex(z));
  LogComplex d = evaluate(f, z);
  CHECK(d.logmag == doctest::Approx(hp.logmag.to_double()).epsilon(1e-13));
  CHECK(d.arg == doctest::Approx(hp.arg.to_double()).epsilon(1e-13));
}

TEST_SUITE_END();
