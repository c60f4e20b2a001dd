#ifndef MERODIFF_NEVANLINNA_HPP
#define MERODIFF_NEVANLINNA_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "merodiff/expr.hpp"

namespace merodiff {

struct QuadratureOptions {
  double tol = 1e-9;       // absolute tolerance between successive doublings
  int min_points = 64;
  int max_points = 1 << 16;
};

// Proximity function m(r,f): circle mean of log+|f| by periodic trapezoid
// rule with point doubling.
double proximity(const ExprPtr& f, double r, const QuadratureOptions& opt = {});

// Integrated counting function N(r): sum over 0<|a|<=r of mult*log(r/|a|)
// plus (multiplicity at 0)*log r.
double counting_integrated(const Registry& reg, double r, PointKind kind);

struct GrowthProfile {
  std::vector<double> r, m, N, T;
  double order_est = 0.0;
  double lower_order_est = 0.0;
  double grid_ratio = 0.0;
  std::vector<std::pair<double, double>> perturbations;  // (requested r, used r)
};

// Builds T = m + N over the grid. Radii colliding with pole moduli are
// auto-perturbed within +/-2% and logged.
GrowthProfile growth_profile(const ExprPtr& f, const Registry& reg, std::span<const double> r_grid,
                             const QuadratureOptions& opt = {});

// Fills order_est / lower_order_est as max/min of log T / log r over the top
// half of the grid. Requires >= 16 points spanning >= 3 decades.
void estimate_orders(GrowthProfile& p);

// m(r,f) + m(r,g) along the grid; pole-avoiding radii auto-selected within
// +/-2% of each request.
std::vector<double> keldysh_sums(const ExprPtr& f, const ExprPtr& g, std::span<const double> r_grid,
                                 std::vector<std::pair<double, double>>* perturb_log = nullptr,
                                 const QuadratureOptions& opt = {});

enum class EpsilonRule { Exclusion, Gundersen };

struct EpsilonDisc {
  Complex center;
  double radius;
};

// Countable-union-of-discs exclusion region with summable radius/center
// ratios (recorded in ratio_sum over the stored discs).
struct EpsilonSet {
  std::vector<EpsilonDisc> discs;
  double ratio_sum = 0.0;
  // Exclusion rule was applied to a registry whose 1/|a_k| tail looks
  // divergent (reported, never fatal).
  bool divergent_flag = false;
  bool contains(Complex z) const;
};

// exclusion: discs B(a_k, 2h). gundersen: B(a_k, |a_k|/(log|a_k|)^(alpha+1))
// for |a_k| > e.
EpsilonSet build_epsilon_set(const Registry& reg, EpsilonRule rule, double h, double alpha = 3.0);

// Set of radii, stored as disjoint member intervals of a domain segment.
struct RadialSet {
  std::vector<std::pair<double, double>> intervals;
  double domain_lo = 1.0;
  double domain_hi = 1.0;
  double measure() const;               // linear measure of the member set
  double log_measure(double r) const;   // integral of dt/t over members in [1, r]
  bool contains(double r) const;
};

// Radii in [lo, hi] whose circle S(0,r) meets no disc of the set.
RadialSet circle_avoidance(const EpsilonSet& eps, double lo, double hi);

double log_density_at(const RadialSet& s, double r);
// (lower, upper) surrogates: min/max density over the top half of the grid.
std::pair<double, double> log_density_bounds(const RadialSet& s, std::span<const double> r_grid);

struct LogDerivReport {
  double d_fit;      // minimal constant making the bound hold at all samples
  double max_lhs;    // max |g'/g| seen
  int samples;
};

// Samples |g'/g| on S(0,r) and fits the smallest d making
// |g'/g| <= d*T(beta r,g)/r + sum 2/|z-a_k| hold at every sample.
LogDerivReport logderiv_bound_check(const ExprPtr& g, double r, double beta,
                                    const QuadratureOptions& opt = {});

// Lebesgue measure of U_r = {theta : |z f'(z)/f(z)| > gamma * n(r,1/f)},
// sampled at resolution 2*pi/2^14. Requires an entire representation.
double miles_rossi_measure(const ExprPtr& f, double r, double gamma);

struct ArcResult {
  double theta;                   // length of the longest arc with |H| > 1
  bool min_modulus_exceeds_one;   // then theta = 2*pi by convention
  double log_m0;                  // log of the minimum modulus over samples
};

ArcResult arc_theta(const ExprPtr& H, double r);

// Exact interval list of r in [R/2, R] with no pole modulus in (r-1, r].
RadialSet pole_coincidence_set(const Registry& reg, double R);

}  // namespace merodiff

#endif
