#include <doctest.h>

#include <cmath>

#include "merodiff/counterexample.hpp"
#include "merodiff/diffops.hpp"
#include "merodiff/nevanlinna.hpp"
#include "merodiff/stats.hpp"
#include "oracle_poly.hpp"

using namespace merodiff;

TEST_SUITE_BEGIN("counterexample");

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(OneZeroSpec{{}, 4.0}), MeroError);
  CHECK_THROWS_AS(validate(OneZeroSpec{{2, 6}, 4.0}), MeroError);  // ratio 3 < 4
  CHECK_NOTHROW(validate(OneZeroSpec{{2, 10, 60}, 4.0}));
}

TEST_CASE("H construction") {
  OneZeroSpec one{{1}, 4.0};
  ExprPtr H = build_H(one);
  // n = (1): H = 1 + z/4
  Complex z(0.37, -1.2);
  CHECK(std::abs(evaluate_c(H, z) - (1.0 + z / 4.0)) < 1e-15);
  CHECK(std::abs(evaluate_c(H, Complex(0, 0)) - Complex(1, 0)) < 1e-15);

  // n = (1,4): zeros at -4 and -1024; H'(-4) from the symbolic oracle
  OneZeroSpec two{{1, 4}, 4.0};
  ExprPtr H2 = build_H(two);
  CHECK(evaluate(H2, Complex(-4, 0)).is_zero());
  CHECK(evaluate(H2, Complex(-1024, 0)).is_zero());
  oracle::Rat r = oracle::expand_rational(differentiate(H2));
  PrecisionGuard guard(256);
  BigComplex hp4 = r.num.eval(big_complex(-4, 0));
  BigComplex den4 = r.den.eval(big_complex(-4, 0));
  Complex expect = to_complexd(BigComplex{hp4.re / den4.re - 0 * hp4.im, hp4.im / den4.re});
  // direct evaluation agrees with the expansion
  CHECK(std::abs(evaluate_c(differentiate(H2), Complex(-4, 0)) - expect) < 1e-12);
  // and the value is (1/4)(1 - 4/1024)
  CHECK(expect.real() == doctest::Approx(0.25 * (1.0 - 4.0 / 1024.0)).epsilon(1e-12));
}

TEST_CASE("h has the lattice zeros and the origin pole") {
  OneZeroSpec one{{1}, 4.0};
  ExprPtr h = build_h(one);
  for (Complex beta : bundle_zero_lattice(one)) {
    CHECK(evaluate(h, beta).is_zero());
  }
  // h(1) = H(1)
  CHECK(std::abs(evaluate_c(h, Complex(1, 0)) - evaluate_c(build_H(one), Complex(1, 0))) < 1e-14);
  Registry reg = registry_of(h);
  CHECK(reg.complete());
  CHECK(reg.mult_at_origin(PointKind::Pole) == 1);
  CHECK(reg.count_inside(3, PointKind::Zero) == 4);
}

TEST_CASE("the derivative identity h'(z) = 4 z^2 H'(z^4) - h(z)/z, symbolically for K=1") {
  // at the lattice zeros the second term drops, giving h'(beta) = 4 beta^2 H'(beta^4);
  // for K = 1, H' = 1/4 so h'(z) + h(z)/z - z^2 must vanish identically
  OneZeroSpec one{{1}, 4.0};
  ExprPtr h = build_h(one);
  ExprPtr lhs = make_sum({differentiate(h), make_quotient(h, make_var()),
                          make_product({make_const(Complex(-1, 0)), make_monomial(2)})});
  oracle::Rat r = oracle::expand_rational(lhs);
  CHECK(oracle::poly_is_zero(r.num, 1e-60 * oracle::max_coeff_abs(r.den)));
}

TEST_CASE("residues: K=1 closed form and antisymmetry") {
  PrecisionGuard guard(256);
  ResidueReport rep = residues(OneZeroSpec{{1}, 4.0}, 256);
  REQUIRE(rep.c.size() == 1);
  // c_1 = 1/h'(-1+i) = i/2
  CHECK(std::abs(to_complexd(rep.c[0]) - Complex(0, 0.5)) < 1e-50);

  // residue of 1/h at -n-i n equals -c via the antisymmetry
  ExprPtr hp = differentiate(build_h(OneZeroSpec{{1}, 4.0}));
  LogComplexHp a = evaluate_hp(hp, big_complex(-1, -1));
  LogComplexHp inv{-a.logmag, wrap_angle(-a.arg)};
  CHECK(std::abs(to_complexd(lc_to_cx(inv)) - Complex(0, -0.5)) < 1e-50);
}

TEST_CASE("residues: decay report for the default sequence") {
  ResidueReport rep = residues(OneZeroSpec{{2, 10, 60}, 4.0}, 256);
  REQUIRE(rep.nk_ck.size() == 3);
  // independent route: c_k = 1/(4 beta^2 H'(beta^4)) evaluated directly
  ExprPtr Hp = differentiate(build_H(OneZeroSpec{{2, 10, 60}, 4.0}));
  PrecisionGuard guard(256);
  for (size_t k = 0; k < 3; ++k) {
    double n = static_cast<double>(std::vector<long>{2, 10, 60}[k]);
    BigComplex beta = big_complex(-n, n);
    BigComplex b2 = beta * beta;
    BigComplex b4 = b2 * b2;
    LogComplexHp hpv = evaluate_hp(Hp, b4);
    LogComplexHp hprime = lc_from_cx(BigComplex{BigReal(4.0), BigReal(0.0)} * b2) * hpv;
    LogComplexHp inv{-hprime.logmag, wrap_angle(-hprime.arg)};
    CHECK(lc_rel_dev(inv, lc_from_cx(rep.c[k])) < 1e-60);
  }
  // measured sizes: first pair contracts like n1/n2, later pairs much faster
  CHECK(rep.nk_ck[0] == doctest::Approx(4.0065).epsilon(1e-3));
  CHECK(rep.nk_ck[1] == doctest::Approx(0.8019).epsilon(1e-3));
  CHECK(rep.nk_ck[2] == doctest::Approx(1.0294e-4).epsilon(1e-3));
  CHECK(rep.decay_ratios[0] == doctest::Approx(0.2).epsilon(0.01));
  CHECK(rep.decay_ratios[1] < 1e-2);
}

TEST_CASE("g: pole structure and rational identity for K=1") {
  OneZeroSpec one{{1}, 4.0};
  OneZeroBundle b = build_bundle(one, 256);
  Registry reg = registry_of(b.g);
  CHECK(reg.complete());
  CHECK(reg.count_inside(3, PointKind::Pole) == 4);
  CHECK(reg.mult_at_origin(PointKind::Zero) == 1);

  // symbolic: g must equal z/H(z^4) = 4z/(4 + z^4), i.e. g*(4+z^4) - 4z = 0
  oracle::Rat rg = oracle::expand_rational(b.g);
  oracle::Poly hz4;
  hz4.c = {merodiff::big_complex(4, 0), merodiff::big_complex(0, 0), merodiff::big_complex(0, 0),
           merodiff::big_complex(0, 0), merodiff::big_complex(1, 0)};
  oracle::Poly lhs = rg.num * hz4 - merodiff::big_complex(4, 0) * (oracle::Poly::monomial(1, merodiff::big_complex(1, 0)) * rg.den);
  CHECK(oracle::poly_is_zero(lhs, 1e-55 * std::max(1.0, oracle::max_coeff_abs(rg.den))));

  // residue check at -1+i is +c_1 (brute-force partial fractions of 4z/(4+z^4))
  auto dens = oracle::poly_roots({{4, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}});
  REQUIRE(dens.size() == 4);
  for (auto p : dens) {
    // residue of 4z/(z^4+4) at p: 4p / (4p^3) = 1/p^2
    std::complex<double> res = 1.0 / (p * p);
    bool matched = false;
    for (const auto& t : b.g->pf) {
      if (std::abs(t.pole_d - Complex(p.real(), p.imag())) < 1e-9)
        matched = std::abs(t.coeff_d - Complex(res.real(), res.imag())) < 1e-9;
    }
    CHECK(matched);
  }
}

TEST_CASE("telescoping: the j-sum difference collapses to the bracket, symbolically (K=1)") {
  OneZeroSpec one{{1}, 4.0};
  OneZeroBundle b = build_bundle(one, 256);
  ExprPtr delta_f = forward_difference(b.f, 1).expr;
  oracle::Rat lhs = oracle::expand_rational(delta_f);
  oracle::Rat rhs = oracle::expand_rational(b.g);
  oracle::Poly diff = lhs.num * rhs.den - rhs.num * lhs.den;
  double scale = std::max(oracle::max_coeff_abs(lhs.num) * oracle::max_coeff_abs(rhs.den), 1.0);
  CHECK(oracle::poly_is_zero(diff, 1e-55 * scale));
}

TEST_CASE("f: pole lattice structure") {
  OneZeroSpec spec{{2, 10}, 4.0};
  std::vector<BigComplex> c = residues(spec, 256).c;
  ExprPtr f = build_f(spec, c);
  Registry reg = registry_of(f);
  // 2*(2*2) + 2*(2*10) = 48 simple poles
  CHECK(reg.count_inside(1e9, PointKind::Pole) == 48);
  // none on the real axis
  for (const auto& e : reg.entries()) CHECK(std::fabs(e.loc.imag()) >= 2.0);
  // closed under conjugation and z -> 1 - conj(z)
  for (const auto& e : reg.entries()) {
    CHECK(reg.min_distance_to(std::conj(e.loc)) < 1e-12);
    CHECK(reg.min_distance_to(1.0 - std::conj(e.loc)) < 1e-12);
  }
  // g's lattice is closed under conjugation and z -> -conj(z)
  Registry greg = registry_of(build_g(spec, c));
  for (const auto& e : greg.entries()) {
    if (e.kind != PointKind::Pole) continue;
    CHECK(greg.min_distance_to(std::conj(e.loc)) < 1e-12);
    CHECK(greg.min_distance_to(-std::conj(e.loc)) < 1e-12);
  }
}

TEST_CASE("bundle verification at K=2") {
  OneZeroBundle b = build_bundle({{2, 10}, 4.0}, 256);
  BundleVerification v = verify_bundle(b, 40, 424242);
  CHECK(v.err_delta <= 1e-12);
  CHECK(v.err_rational <= 1e-10);
  CHECK(v.winding_net == 1 - 8);
  CHECK(v.zeros_in_disk == 1);
  CHECK(v.err_antisym <= 1e-12);
  CHECK(v.pass());
}

TEST_CASE("first difference of f equals g pointwise (recurrence route)") {
  OneZeroBundle b = build_bundle({{2, 10}, 4.0}, 256);
  ExprPtr delta_f = forward_difference(b.f, 1).expr;
  Registry fl = registry_of(b.f);
  Rng rng(7);
  int done = 0;
  while (done < 60) {
    Complex z = rng.in_disk(15.0);
    if (fl.min_distance_to(z) < 0.3 || fl.min_distance_to(z + Complex(1, 0)) < 0.3 ||
        registry_of(b.g).min_distance_to(z) < 0.3)
      continue;
    CHECK(lc_rel_dev(evaluate(delta_f, z), evaluate(b.g, z)) < 1e-12);
    ++done;
  }
}

TEST_SUITE_END();
