#include <doctest.h>

#include <cmath>

#include "merodiff/logcomplex.hpp"

using namespace merodiff;

TEST_SUITE_BEGIN("core");

TEST_CASE("bigreal round trip and arithmetic") {
  PrecisionGuard guard(256);
  BigReal x = BigReal::from_string("0.1");
  CHECK(x.precision() == 256);
  BigReal y = BigReal::from_string(x.to_string());
  CHECK(x == y);
  BigReal two(2.0);
  CHECK(sqrt(two * two) == two);
  CHECK(exp(log(two)).to_double() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("working precision guard is scoped") {
  mpfr_prec_t before = working_precision();
  {
    PrecisionGuard guard(512);
    CHECK(working_precision() == 512);
    BigReal v(1.0);
    CHECK(v.precision() == 512);
  }
  CHECK(working_precision() == before);
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(3.5 * 3.141592653589793) == doctest::Approx(-0.5 * 3.141592653589793));
  CHECK(wrap_angle(-3.141592653589793) == doctest::Approx(3.141592653589793));
  // large multiples stay accurate
  double big = 1e5 * 2.0 * 3.141592653589793 + 0.25;
  CHECK(wrap_angle(big) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("log-scale product adds logmags and wraps args") {
  LogComplex a{std::log(2.0), 2.5};
  LogComplex b{std::log(3.0), 2.0};
  LogComplex p = a * b;
  CHECK(p.logmag == doctest::Approx(std::log(6.0)));
  CHECK(p.arg == doctest::Approx(4.5 - 2 * 3.141592653589793));
  LogComplex z = LogComplex::zero();
  CHECK((a * z).is_zero());
}

TEST_CASE("to_complex basics and overflow indicator") {
  CHECK(to_complex({0.0, 0.0}) == Complex(1, 0));
  CHECK(to_complex(LogComplex::zero()) == Complex(0, 0));
  Complex v = to_complex({std::log(2.0), 3.141592653589793});
  CHECK(v.real() == doctest::Approx(-2.0));
  CHECK(std::abs(v.imag()) < 1e-15);
  Complex inf = to_complex({1000.0, 0.0});
  CHECK(std::isinf(inf.real()));
  CHECK(inf.real() > 0);
}

TEST_CASE("log_sum compensates and reports drops") {
  // 1 + 1e-30 - 1 in log scale: result must recover 1e-30 via compensation
  std::vector<LogComplex> terms{{0.0, 0.0}, {std::log(1e-30), 0.0}, {0.0, 3.141592653589793}};
  double drop = 0;
  LogComplex s = log_sum(std::span<const LogComplex>(terms), &drop);
  CHECK(s.logmag == doctest::Approx(std::log(1e-30)).epsilon(1e-12));
  CHECK(drop == doctest::Approx(std::log(1e30)).epsilon(1e-12));

  // exact cancellation reports an infinite drop and a zero value
  std::vector<LogComplex> cancel{{0.25, 0.0}, {0.25, 3.141592653589793}};
  drop = 0;
  LogComplex z = log_sum(std::span<const LogComplex>(cancel), &drop);
  CHECK(z.is_zero());
  CHECK(std::isinf(drop));
}

TEST_CASE("log_sum in extended precision") {
  PrecisionGuard guard(256);
  std::vector<LogComplexHp> terms{{BigReal(0.0), BigReal(0.0)},
                                  {BigReal(std::log(1e-60)), BigReal(0.0)},
                                  {BigReal(0.0), BigReal::pi()}};
  BigReal drop(0.0);
  LogComplexHp s = log_sum(std::span<const LogComplexHp>(terms), &drop);
  CHECK(s.logmag.to_double() == doctest::Approx(std::log(1e-60)).epsilon(1e-10));
}

TEST_CASE("rel_dev") {
  LogComplex a{std::log(2.0), 0.1};
  CHECK(lc_rel_dev(a, a) == 0.0);
  LogComplex b{std::log(2.0) + 1e-8, 0.1};
  CHECK(lc_rel_dev(a, b) == doctest::Approx(1e-8).epsilon(1e-3));
  CHECK(lc_rel_dev(LogComplex::zero(), LogComplex::zero()) == 0.0);
  CHECK(lc_rel_dev(a, LogComplex::zero()) == 1.0);
}

TEST_SUITE_END();
