#ifndef MERODIFF_WIMAN_HPP
#define MERODIFF_WIMAN_HPP

#include <span>
#include <vector>

#include "merodiff/expr.hpp"

namespace merodiff {

struct TaylorWindow {
  std::vector<Complex> coeffs;          // flagged entries reported as 0
  std::vector<LogComplex> log_coeffs;   // authoritative (coeffs may under/overflow)
  std::vector<char> flagged;            // |a_k| r^k fell below mu(r)*1e-14
  double radius = 1.0;
  // Aliasing tail bound: |error in a_k| <= exp(error_bound_log - k*log_r_out).
  double error_bound_log = 0.0;
  double log_r_out = 0.0;
};

// Cauchy-integral coefficient extraction on |z| = r with >= 8m equal angles.
TaylorWindow taylor_coeffs(const ExprPtr& f, int m, double r);

struct MaxTerm {
  double log_mu;
  int central_index;  // largest k attaining the maximum term
};

MaxTerm max_term_central_index(const TaylorWindow& w, double r);

struct WvResult {
  double deviation;   // |f^(n)(z*)/f(z*) * z*^n / N(r)^n - 1|
  double theta_star;
  bool flat_modulus;  // max-modulus point not isolated at tolerance
  int central_index;
  double log_mu;
};

WvResult wv_ratio_check(const ExprPtr& f, int n, double r, int window_len);

struct CentralIndexProfile {
  std::vector<double> r;
  std::vector<double> log_mu;
  std::vector<int> N;
  bool monotone = true;
};

CentralIndexProfile central_index_profile(const ExprPtr& f, std::span<const double> r_grid,
                                          int window_len);

// max of log N / log r over the top half of the grid; needs >= 3 decades.
double central_index_order(const CentralIndexProfile& p);

}  // namespace merodiff

#endif
