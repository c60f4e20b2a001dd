#include "merodiff/diffops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "merodiff/kernels.hpp"
#include "merodiff/stats.hpp"

namespace merodiff {

namespace {
constexpr double kPi = 3.141592653589793;

ExprPtr delta_once(const ExprPtr& e) {
  return make_sum({make_shift(e, Complex(1, 0)), make_product({make_const(Complex(-1, 0)), e})});
}

long long binomial(int n, int k) {
  long long c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

template <class R>
BasicLogComplex<R> binomial_eval_impl(const ExprPtr& f, int n, const Cx<R>& z, EvalCtx<R>& ctx) {
  std::vector<BasicLogComplex<R>> terms;
  terms.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    Cx<R> zk{z.re + ScalarTraits<R>::from_double(k), z.im};
    BasicLogComplex<R> v = eval_node<R>(*f, zk, ctx);
    double coeff = static_cast<double>(binomial(n, k));
    BasicLogComplex<R> scale{ScalarTraits<R>::from_double(std::log(coeff)),
                             ScalarTraits<R>::from_double((n - k) % 2 ? kPi : 0.0)};
    terms.push_back(v * scale);
  }
  return log_sum(std::span<const BasicLogComplex<R>>(terms), &ctx.worst_drop);
}

}  // namespace

DifferenceResult forward_difference(const ExprPtr& f, int n) {
  if (n < 1) fail(ErrorCode::DomainError, "difference order must be >= 1");
  ExprPtr e = f;
  for (int i = 0; i < n; ++i) e = delta_once(e);
  return {e, n, f};
}

LogComplex binomial_difference_eval(const ExprPtr& f, int n, Complex z) {
  EvalCtx<double> ctx;
  LogComplex v = binomial_eval_impl<double>(f, n, Cx<double>{z.real(), z.imag()}, ctx);
  if (ctx.worst_drop <= kEscalationDropNats) return v;
  PrecisionGuard guard(escalation_bits());
  EvalCtx<BigReal> ctx2;
  LogComplexHp w = binomial_eval_impl<BigReal>(f, n, cx_from<BigReal>(z), ctx2);
  double budget = ScalarTraits<BigReal>::mantissa_nats() - kEscalationDropNats;
  double d2 = ctx2.worst_drop.to_double();
  if (std::isfinite(d2) && d2 > budget)
    fail(ErrorCode::PrecisionLoss, "binomial difference lost the extended budget");
  return lc_down_hp(w);
}

LogComplexHp binomial_difference_eval_hp(const ExprPtr& f, int n, const BigComplex& z) {
  EvalCtx<BigReal> ctx;
  LogComplexHp v = binomial_eval_impl<BigReal>(f, n, z, ctx);
  double budget = ScalarTraits<BigReal>::mantissa_nats() - kEscalationDropNats;
  double d = ctx.worst_drop.to_double();
  if (std::isfinite(d) && d > budget)
    fail(ErrorCode::PrecisionLoss, "binomial difference lost the extended budget");
  return v;
}

ExprPtr divided_difference(const ExprPtr& f, int n) {
  if (is_zero_expr(*f)) fail(ErrorCode::DomainError, "divided difference of the zero function");
  return make_quotient(forward_difference(f, n).expr, f);
}

double check_commutation(const ExprPtr& f, int n, int samples, uint64_t seed,
                         double sample_radius) {
  ExprPtr lhs = differentiate(forward_difference(f, n).expr);
  ExprPtr rhs = forward_difference(differentiate(f), n).expr;
  Registry reg = registry_of(f);
  Rng rng(seed);
  double worst = 0.0;
  int done = 0, attempts = 0;
  int budget = 40 * samples + 100;
  while (done < samples && attempts < budget) {
    ++attempts;
    Complex z = rng.in_disk(sample_radius);
    // keep clear of poles shifted through the difference stencil
    bool ok = true;
    for (int k = -1; k <= n + 1 && ok; ++k)
      ok = reg.min_distance_to(z + Complex(k, 0)) > 0.15;
    if (!ok) continue;
    try {
      LogComplex a = evaluate(lhs, z);
      LogComplex b = evaluate(rhs, z);
      worst = std::max(worst, lc_rel_dev(a, b));
      ++done;
    } catch (const MeroError& e) {
      if (e.code() != ErrorCode::PoleHit) throw;
    }
  }
  if (done < samples)
    fail(ErrorCode::PoleHit, "could not place enough samples away from poles");
  return worst;
}

double AsymptoticReport::bottom_median() const {
  std::vector<double> devs;
  for (const auto& row : rows)
    if (row.admitted > 0) devs.push_back(row.max_dev);
  return bottom_decile_median(devs);
}

double AsymptoticReport::top_median() const {
  std::vector<double> devs;
  for (const auto& row : rows)
    if (row.admitted > 0) devs.push_back(row.max_dev);
  return top_decile_median(devs);
}

bool AsymptoticReport::trend_ok() const { return top_median() < bottom_median(); }

AsymptoticReport asymptotic_difference_check(const ExprPtr& f, int n, double c_max,
                                             std::span<const double> r_grid,
                                             const EpsilonSet& eps, double order_est) {
  if (order_est > 0.95)
    fail(ErrorCode::DomainError,
         "asymptotic difference relations need order < 1 (measured estimate " +
             std::to_string(order_est) + " > 0.95)");
  AsymptoticReport rep;
  rep.order_n = n;
  rep.c_max = c_max;

  ExprPtr fn = differentiate_n(f, n);
  ExprPtr delta_n = n == 1 ? nullptr : forward_difference(f, n).expr;
  // fixed offsets for the first-difference sweep
  const Complex c_offsets[4] = {Complex(c_max, 0), Complex(0, c_max), Complex(-c_max, 0),
                                Complex(c_max * 0.35355339059327373, c_max * 0.35355339059327373)};

  for (double r : r_grid) {
    int m = std::max(256, static_cast<int>(std::ceil(32.0 * r)));
    auto angles = circle_angles(m);
    std::vector<double> devs(m, -1.0);  // -1 = excluded
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
      Complex z(r * std::cos(angles[i]), r * std::sin(angles[i]));
      if (eps.contains(z)) continue;
      try {
        double dev = 0.0;
        if (n == 1) {
          LogComplex fp = evaluate(fn, z);
          LogComplex fz = evaluate(f, z);
          for (const Complex& c : c_offsets) {
            LogComplex fzc = evaluate(f, z + c);
            std::array<LogComplex, 2> pair{fzc, lc_neg(fz)};
            LogComplex diff = log_sum(std::span<const LogComplex>(pair));
            LogComplex den = fp * lc_from_cx(Cx<double>{c.real(), c.imag()});
            if (den.is_zero()) {
              dev = std::numeric_limits<double>::infinity();
              break;
            }
            LogComplex ratio = diff / den;
            dev = std::max(dev, ratio.logmag > 50.0
                                    ? std::numeric_limits<double>::infinity()
                                    : std::abs(to_complex(ratio) - Complex(1, 0)));
          }
        } else {
          LogComplex dn = evaluate(delta_n, z);
          LogComplex dfn = evaluate(fn, z);
          if (dfn.is_zero()) {
            dev = std::numeric_limits<double>::infinity();
          } else {
            LogComplex ratio = dn / dfn;
            dev = ratio.logmag > 50.0 ? std::numeric_limits<double>::infinity()
                                      : std::abs(to_complex(ratio) - Complex(1, 0));
          }
        }
        devs[i] = dev;
      } catch (const MeroError&) {
        // a stencil point fell on a pole: drop the sample
      }
    }
    AsymptoticRow row;
    row.r = r;
    row.admitted = 0;
    double worst = 0.0;
    int excluded = 0;
    for (int i = 0; i < m; ++i) {
      if (devs[i] < 0) {
        ++excluded;
      } else {
        ++row.admitted;
        worst = std::max(worst, devs[i]);
      }
    }
    row.excluded_fraction = static_cast<double>(excluded) / m;
    row.max_dev = row.admitted ? worst : std::numeric_limits<double>::quiet_NaN();
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace merodiff
