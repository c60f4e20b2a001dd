#include <doctest.h>

#include <cmath>

#include "merodiff/counterexample.hpp"
#include "merodiff/experiments.hpp"
#include "merodiff/nevanlinna.hpp"
#include "merodiff/stats.hpp"

using namespace merodiff;

TEST_SUITE_BEGIN("nevanlinna");

TEST_CASE("proximity closed forms") {
  double e = 2.718281828459045;
  CHECK(proximity(make_var(), e) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(proximity(make_const(Complex(0.5, 0)), 7.0) == 0.0);
  // oracle: m(r, z^2) = 2 log r
  CHECK(proximity(make_monomial(2), e) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(proximity(make_monomial(2), 25.0) == doctest::Approx(2 * std::log(25.0)).epsilon(1e-8));
}

TEST_CASE("pole on circle is rejected") {
  ExprPtr f = make_partial_fractions({{Complex(1, 0), Complex(1, 0)}});
  CHECK_THROWS_AS((void)proximity(f, 1.0), MeroError);
}

TEST_CASE("integrated counting function") {
  Registry one_pole({{Complex(0, 1), 1, PointKind::Pole}}, true, true);
  CHECK(counting_integrated(one_pole, 2.718281828459045, PointKind::Pole) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(counting_integrated(Registry::empty_complete(), 10.0, PointKind::Pole) == 0.0);
}

TEST_CASE("counting on the K=2 bundle matches the direct sum") {
  OneZeroSpec spec{{2, 10}, 4.0};
  OneZeroBundle b = build_bundle(spec, 256);
  Registry reg = registry_of(b.f);
  double r = 17.0;
  // oracle: direct sum over the lattice poles
  NeumaierSum<double> s;
  for (long k : spec.n_seq) {
    for (long j = -k; j <= k - 1; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Complex p(-static_cast<double>(j), sgn * static_cast<double>(k));
        if (std::abs(p) <= r) s.add(std::log(r / std::abs(p)));
      }
    }
  }
  CHECK(counting_integrated(reg, r, PointKind::Pole) == doctest::Approx(s.total()).epsilon(1e-12));
}

TEST_CASE("characteristic identity and monotonicity") {
  ExprPtr f = make_quotient(make_factor_product(std::vector<Complex>{{2, 0}, {31, 0}}),
                            make_shift(make_monomial(1), Complex(4, 3)));
  Registry reg = registry_of(f);
  auto grid = geometric_grid(2, 2000, 18);
  GrowthProfile p = growth_profile(f, reg, grid);
  for (size_t i = 0; i < p.r.size(); ++i) {
    CHECK(p.T[i] == p.m[i] + p.N[i]);
    if (i) CHECK(p.T[i] >= p.T[i - 1] - 1e-6);
  }
}

TEST_CASE("rational characteristic slope is the degree") {
  // T(r) ~ d log r for rational functions; fitted slope within 5% on the top decade
  ExprPtr f = make_quotient(
      make_factor_product(std::vector<Complex>{{1, 0}, {2, 0}, {3, 0}}),
      make_shift(make_monomial(1), Complex(0.5, 0.5)));  // degree max(3,1) = 3
  Registry reg = registry_of(f);
  auto grid = geometric_grid(1e3, 1e8, 20);
  GrowthProfile p = growth_profile(f, reg, grid);
  size_t n = p.r.size();
  double slope = (p.T[n - 1] - p.T[n - 5]) / (std::log(p.r[n - 1]) - std::log(p.r[n - 5]));
  CHECK(slope == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("order estimate for the order-1/3 lattice") {
  // radii midway between consecutive cubes keep the quadrature comfortable
  std::vector<double> grid;
  for (int k = 100; k <= 1250; k = static_cast<int>(k * 1.17))
    grid.push_back(0.5 * (std::pow(k, 3) + std::pow(k + 1.0, 3)));
  REQUIRE(grid.size() >= 16);
  REQUIRE(grid.back() / grid.front() >= 1e3);
  ExprPtr f = build_cube_product(1800);
  GrowthProfile p = growth_profile(f, registry_of(f), grid);
  estimate_orders(p);
  CHECK(p.order_est >= 0.28);
  CHECK(p.order_est <= 0.40);
  CHECK(p.lower_order_est <= p.order_est + 1e-9);
}

TEST_CASE("order estimate guards") {
  GrowthProfile p;
  p.r = {1, 2};
  p.T = {1, 1};
  CHECK_THROWS_AS(estimate_orders(p), MeroError);
}

TEST_CASE("keldysh sums on constants vanish") {
  auto grid = geometric_grid(2, 100, 8);
  auto sums = keldysh_sums(make_const(Complex(0.1, 0)), make_const(Complex(0.1, 0)), grid);
  for (double s : sums) CHECK(s == 0.0);
}

TEST_CASE("epsilon set construction") {
  // poles at -k^3, h = 1: discs of radius 2, convergent ratio sum
  std::vector<RegEntry> entries;
  double expect = 0;
  for (int k = 1; k <= 30; ++k) {
    entries.push_back({Complex(-std::pow(k, 3), 0), 1, PointKind::Pole});
    expect += 2.0 / std::pow(k, 3);
  }
  EpsilonSet eps = build_epsilon_set(Registry(entries, true, true), EpsilonRule::Exclusion, 1.0);
  CHECK(eps.discs.size() == 30);
  CHECK(eps.ratio_sum == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(eps.divergent_flag);
  CHECK(eps.contains(Complex(-8.5, 1.0)));
  CHECK_FALSE(eps.contains(Complex(-15, 0)));

  EpsilonSet none = build_epsilon_set(Registry::empty_complete(), EpsilonRule::Exclusion, 1.0);
  CHECK(none.discs.empty());

  // the order-1 lattice violates the summability hypothesis
  EpsilonSet div = build_epsilon_set(registry_of(build_linear_product(400)),
                                     EpsilonRule::Exclusion, 1.0);
  CHECK(div.divergent_flag);
}

TEST_CASE("circle avoidance and logarithmic density") {
  EpsilonSet none;
  RadialSet all = circle_avoidance(none, 1.0, 1e4);
  auto grid = geometric_grid(1.0, 1e4, 16);
  auto [lo, hi] = log_density_bounds(all, grid);
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));

  EpsilonSet one;
  one.discs.push_back({Complex(100, 0), 50});
  RadialSet avoid = circle_avoidance(one, 1.0, 1e4);
  // excluded shadow is [50, 150]: log measure log 3 exactly
  CHECK(std::log(1e4) - avoid.log_measure(1e4) == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // gundersen-rule set for the order-1/3 lattice: small excluded density,
  // cross-checked against a dense sampling oracle
  EpsilonSet gun = build_epsilon_set(registry_of(build_cube_product(25)),
                                     EpsilonRule::Gundersen, 1.0, 3.0);
  RadialSet av = circle_avoidance(gun, 1.0, 1e4);
  double density = log_density_at(av, 1e4);
  CHECK(1.0 - density < 0.05);
  long hits = 0;
  const int samples = 200000;
  for (int i = 0; i < samples; ++i) {
    double r = std::exp(std::log(1e4) * (i + 0.5) / samples);
    if (av.contains(r)) ++hits;
  }
  CHECK(static_cast<double>(hits) / samples == doctest::Approx(density).epsilon(1e-3));
}

TEST_CASE("log density bounds are ordered in [0,1]") {
  EpsilonSet eps;
  eps.discs.push_back({Complex(40, 0), 20});
  eps.discs.push_back({Complex(400, 0), 100});
  RadialSet s = circle_avoidance(eps, 1.0, 1e5);
  auto grid = geometric_grid(1.0, 1e5, 20);
  auto [lo, hi] = log_density_bounds(s, grid);
  CHECK(lo >= 0.0);
  CHECK(lo <= hi);
  CHECK(hi <= 1.0);
}

TEST_CASE("logarithmic derivative bound") {
  // g = z: |g'/g| = 1/r, the lattice sum alone dominates
  LogDerivReport rz = logderiv_bound_check(make_var(), 10.0, 2.0);
  CHECK(rz.d_fit <= 1e-9);
  CHECK(rz.max_lhs == doctest::Approx(0.1).epsilon(1e-6));

  // g = (z-1)(z-2): fitted constant bounded across the grid
  ExprPtr g = make_product({make_shift(make_monomial(1), Complex(-1, 0)),
                            make_shift(make_monomial(1), Complex(-2, 0))});
  double lo = 1e300, hi = 0;
  for (double r : geometric_grid(10, 1e4, 8)) {
    LogDerivReport rep = logderiv_bound_check(g, r, 2.0);
    double fit = std::max(rep.d_fit, 1e-3);
    lo = std::min(lo, fit);
    hi = std::max(hi, fit);
  }
  CHECK(hi / lo < 10.0);

  // zero close to the circle violates the margin precondition
  ExprPtr close = make_shift(make_monomial(1), Complex(-(10.0 + 1e-6), 0));
  CHECK_THROWS_AS((void)logderiv_bound_check(close, 10.0, 2.0), MeroError);
}

TEST_CASE("miles-rossi angular measure") {
  // f = z^m: |z f'/f| = m = n(r,1/f), so U_r is the whole circle for gamma < 1
  CHECK(miles_rossi_measure(make_monomial(3), 5.0, 0.5) ==
        doctest::Approx(2 * 3.141592653589793).epsilon(1e-12));
  // monotone non-increasing in gamma
  ExprPtr f = build_cube_product(20);
  double r = 400.0;
  double prev = 1e9;
  for (double gamma : {0.25, 0.5, 0.75, 0.95}) {
    double m = miles_rossi_measure(f, r, gamma);
    CHECK(m <= prev + 1e-12);
    prev = m;
  }
  // no zeros inside the radius: degenerate statistic
  ExprPtr one_zero = make_factor_product(std::vector<Complex>{{100, 0}});
  CHECK_THROWS_AS((void)miles_rossi_measure(one_zero, 5.0, 0.5), MeroError);
}

TEST_CASE("longest arc statistic") {
  ArcResult a = arc_theta(make_var(), 2.0);
  CHECK(a.min_modulus_exceeds_one);
  CHECK(a.theta == doctest::Approx(2 * 3.141592653589793));

  // H = z - 2 on |z| = 1: |H| >= 1 with equality at one tangent point
  ArcResult b = arc_theta(make_shift(make_monomial(1), Complex(-2, 0)), 1.0);
  CHECK_FALSE(b.min_modulus_exceeds_one);
  CHECK(b.theta == doctest::Approx(2 * 3.141592653589793).epsilon(1e-3));

  // order-1/3 lattice: the flag holds on a positive fraction of tail radii
  ExprPtr H = build_cube_product(25);
  int flags = 0, total = 0;
  for (double r : geometric_grid(10, 1e4, 12)) {
    ArcResult c = arc_theta(H, r);
    ++total;
    if (c.min_modulus_exceeds_one) ++flags;
  }
  CHECK(flags * 4 >= total);
}

TEST_CASE("pole coincidence set") {
  RadialSet none = pole_coincidence_set(Registry::empty_complete(), 100.0);
  CHECK(none.measure() == doctest::Approx(50.0));

  Registry one({{Complex(0, 70), 1, PointKind::Pole}}, true, true);
  RadialSet s = pole_coincidence_set(one, 100.0);
  CHECK(s.measure() == doctest::Approx(49.0));

  OneZeroBundle b = build_bundle({{2, 10, 60}, 4.0}, 256);
  RadialSet big = pole_coincidence_set(registry_of(b.f), 240.0);
  CHECK(big.measure() >= 0.9 * 120.0);
}

TEST_CASE("proximity of a product is subadditive up to log 2 per term") {
  Rng rng(77);
  for (int i = 0; i < 6; ++i) {
    ExprPtr a = make_shift(make_monomial(1), rng.in_disk(2.0));
    ExprPtr b = make_quotient(make_const(Complex(rng.uniform(0.5, 4), 0)),
                              make_shift(make_monomial(1), rng.in_disk(2.0)));
    double r = rng.uniform(5.0, 50.0);
    double lhs = proximity(make_product({a, b}), r);
    CHECK(lhs <= proximity(a, r) + proximity(b, r) + 2 * std::log(2.0) + 1e-7);
  }
}

TEST_SUITE_END();
