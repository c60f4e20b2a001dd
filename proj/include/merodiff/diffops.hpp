#ifndef MERODIFF_DIFFOPS_HPP
#define MERODIFF_DIFFOPS_HPP

#include <span>
#include <vector>

#include "merodiff/expr.hpp"
#include "merodiff/nevanlinna.hpp"

namespace merodiff {

struct DifferenceResult {
  ExprPtr expr;  // tree for the n-th forward difference
  int order_n;
  ExprPtr base;
};

// n-fold forward difference built structurally from the recurrence
// D^{n+1}f(z) = D^n f(z+1) - D^n f(z); shifts stay symbolic.
DifferenceResult forward_difference(const ExprPtr& f, int n);

// Independent evaluation oracle: the binomial closed form
// D^n f(z) = sum_{k=0..n} (-1)^{n-k} C(n,k) f(z+k), compensated.
LogComplex binomial_difference_eval(const ExprPtr& f, int n, Complex z);
LogComplexHp binomial_difference_eval_hp(const ExprPtr& f, int n, const BigComplex& z);

ExprPtr divided_difference(const ExprPtr& f, int n);

// Max relative deviation between d/dz(D^n f) and D^n(f') at random points
// away from poles.
double check_commutation(const ExprPtr& f, int n, int samples, uint64_t seed,
                         double sample_radius = 20.0);

struct AsymptoticRow {
  double r;
  double max_dev;            // NaN when the whole circle is excluded
  double excluded_fraction;  // fraction of sampled angles inside the eps-set
  int admitted;
};

struct AsymptoticReport {
  int order_n = 1;
  double c_max = 1.0;
  std::vector<AsymptoticRow> rows;
  double bottom_median() const;
  double top_median() const;
  bool trend_ok() const;  // top-decile median < bottom-decile median
};

// Off-eps-set deviation sweep. n = 1 records |(f(z+c)-f(z))/(c f'(z)) - 1|
// over sampled offsets |c| <= c_max; n >= 2 records |D^n f(z)/f^(n)(z) - 1|.
// order_est is the caller's empirical order estimate (must be <= 0.95).
AsymptoticReport asymptotic_difference_check(const ExprPtr& f, int n, double c_max,
                                             std::span<const double> r_grid,
                                             const EpsilonSet& eps, double order_est);

}  // namespace merodiff

#endif
