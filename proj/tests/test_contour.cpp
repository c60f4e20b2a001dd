#include <doctest.h>

#include <cmath>

#include "merodiff/contour.hpp"
#include "merodiff/stats.hpp"
#include "merodiff/diffops.hpp"
#include "oracle_poly.hpp"

using namespace merodiff;

namespace {

ExprPtr from_roots(const std::vector<Complex>& roots) {
  std::vector<ExprPtr> kids;
  for (Complex r : roots) kids.push_back(make_shift(make_monomial(1), -r));
  return make_product(std::move(kids));
}

}  // namespace

TEST_SUITE_BEGIN("contour");

TEST_CASE("winding of z around the unit circle") {
  CountResult w = winding_count(make_var(), Contour::circle({0, 0}, 1));
  CHECK(w.net == 1);
  CHECK(w.residual_turns < 1e-9);
}

TEST_CASE("double zero inside, pole outside") {
  ExprPtr f = make_quotient(from_roots({{0.5, 0}, {0.5, 0}}),
                            make_shift(make_monomial(1), Complex(2, 0)));
  CHECK(winding_count(f, Contour::circle({0, 0}, 1)).net == 2);
}

TEST_CASE("orientation reversal negates the count") {
  ExprPtr f = from_roots({{0.3, 0.2}, {-0.4, 0.1}});
  CHECK(winding_count(f, Contour::circle({0, 0}, 1, -1)).net ==
        -winding_count(f, Contour::circle({0, 0}, 1)).net);
}

TEST_CASE("boundary guard") {
  CHECK_THROWS_AS((void)winding_count(make_var(), Contour::circle({1, 0}, 1)), MeroError);
}

TEST_CASE("randomized rationals match registry counts exactly") {
  Rng rng(20240809);
  int done = 0;
  while (done < 40) {
    int nz = static_cast<int>(rng.next() % 4);
    int np = static_cast<int>(rng.next() % 3);
    std::vector<Complex> zs, ps;
    for (int i = 0; i < nz; ++i) zs.push_back(rng.in_disk(3.0));
    for (int i = 0; i < np; ++i) ps.push_back(rng.in_disk(3.0));
    double R = rng.uniform(0.5, 4.0);
    bool clear = true;
    long expect = 0;
    for (Complex z : zs) {
      clear = clear && std::fabs(std::abs(z) - R) > 0.05;
      if (std::abs(z) < R) ++expect;
    }
    for (Complex p : ps) {
      clear = clear && std::fabs(std::abs(p) - R) > 0.05;
      if (std::abs(p) < R) --expect;
    }
    if (!clear) continue;
    ExprPtr f = zs.empty() && ps.empty() ? make_const(Complex(2, 1))
                : ps.empty()             ? from_roots(zs)
                : zs.empty() ? make_quotient(make_const(Complex(1, 0)), from_roots(ps))
                             : make_quotient(from_roots(zs), from_roots(ps));
    CountResult w = winding_count(f, Contour::circle({0, 0}, R));
    CHECK(w.net == expect);
    Registry reg = registry_of(f);
    CHECK(w.net == reg.count_inside(R, PointKind::Zero) - reg.count_inside(R, PointKind::Pole));
    ++done;
  }
}

TEST_CASE("rectangle winding") {
  ExprPtr f = from_roots({{0.25, 0.25}});
  CHECK(winding_count(f, Contour::rectangle({0, 0}, {1, 1})).net == 1);
  CHECK(winding_count(f, Contour::rectangle({-1, -1}, {0, 0})).net == 0);
}

TEST_CASE("count_zeros_in_disk") {
  ExprPtr H = make_factor_product(std::vector<Complex>{{4, 0}, {64, 0}});
  CHECK(count_zeros_in_disk(H, 10) == 1);
  ExprPtr inv = make_quotient(make_const(Complex(1, 0)),
                              make_shift(make_monomial(1), Complex(-1, 0)));
  CHECK(count_zeros_in_disk(inv, 2) == 0);
}

TEST_CASE("locate_zeros finds the roots of z^2 - 1") {
  ExprPtr f = from_roots({{1, 0}, {-1, 0}});
  auto boxes = locate_zeros(f, Complex(-2, -2), Complex(2, 2), 40, 1e-8);
  REQUIRE(boxes.size() == 2);
  CHECK(std::abs(boxes[0].center - Complex(-1, 0)) < 1e-7);
  CHECK(std::abs(boxes[1].center - Complex(1, 0)) < 1e-7);
  CHECK(boxes[0].count == 1);
  CHECK(boxes[1].count == 1);
  CHECK(boxes[0].resolved);
}

TEST_CASE("locate_zeros matches known roots of a rational") {
  std::vector<Complex> roots{{0.5, 0.75}, {-1.25, -0.5}, {1.5, -1.0}};
  ExprPtr f = make_quotient(from_roots(roots), make_shift(make_monomial(1), Complex(-4, 4)));
  std::vector<RegEntry> poles{{Complex(4, -4), 1, PointKind::Pole}};
  auto boxes = locate_zeros(f, Complex(-3, -3), Complex(3, 3), 40, 1e-8, &poles);
  REQUIRE(boxes.size() == roots.size());
  long total = 0;
  for (const auto& b : boxes) {
    total += b.count;
    double best = 1e9;
    for (Complex r : roots) best = std::min(best, std::abs(b.center - r));
    CHECK(best < 1e-7);
  }
  CHECK(total == 3);
}

TEST_CASE("divided difference of a cubic: zero count matches the root oracle") {
  // f = z^3 - 2z + 1; D f = 3z^2 + 3z - 1, so G = D f / f has exactly the
  // roots of that quadratic as zeros (none coincide with zeros of f).
  ExprPtr f = make_sum({make_monomial(3), make_product({make_const(Complex(-2, 0)), make_var()}),
                        make_const(Complex(1, 0))});
  ExprPtr G = make_quotient(forward_difference(f, 1).expr, f);
  auto roots = oracle::poly_roots({{-1, 0}, {3, 0}, {3, 0}});
  REQUIRE(roots.size() == 2);
  // poles of G inside the box = zeros of f there (cubic roots: 1, golden pair)
  auto froots = oracle::poly_roots({{1, 0}, {-2, 0}, {0, 0}, {1, 0}});
  std::vector<RegEntry> poles;
  for (auto r : froots) poles.push_back({Complex(r.real(), r.imag()), 1, PointKind::Pole});
  auto boxes = locate_zeros(G, Complex(-4, -4), Complex(4, 4), 40, 1e-8, &poles);
  long total = 0;
  for (const auto& b : boxes) {
    total += b.count;
    double best = 1e9;
    for (auto r : roots) best = std::min(best, std::abs(b.center - Complex(r.real(), r.imag())));
    CHECK(best < 1e-6);
  }
  CHECK(total == static_cast<long>(roots.size()));
}

TEST_CASE("leaf counts sum to the top-level count") {
  std::vector<Complex> roots{{0.1, 0.1}, {0.1, 0.1}, {-0.7, 0.3}, {0.9, -0.9}};
  ExprPtr f = from_roots(roots);
  auto boxes = locate_zeros(f, Complex(-2, -2), Complex(2, 2), 24, 1e-6);
  long total = 0;
  for (const auto& b : boxes) total += b.count;
  CHECK(total == 4);
}

TEST_SUITE_END();
