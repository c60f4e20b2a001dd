#ifndef MERODIFF_COUNTEREXAMPLE_HPP
#define MERODIFF_COUNTEREXAMPLE_HPP

#include <vector>

#include "merodiff/expr.hpp"

namespace merodiff {

// Driving sequence n_1 < ... < n_K for the one-zero pair construction.
struct OneZeroSpec {
  std::vector<long> n_seq;
  double ratio_floor = 4.0;  // minimum accepted n_{k+1}/n_k
};

void validate(const OneZeroSpec& spec);

// H(z) = prod_k (1 + z/A_k), A_k = 4 n_k^4.
ExprPtr build_H(const OneZeroSpec& spec);

// h(z) = H(z^4)/z, realized as the exact product of the linear factors
// (z - n_k(+-1+-i))/A_k over z. Zeros at the 4K points +-n_k +- i n_k,
// one simple pole at 0.
ExprPtr build_h(const OneZeroSpec& spec);

struct ResidueReport {
  std::vector<BigComplex> c;          // c_k = 1/h'(-n_k + i n_k)
  std::vector<double> nk_ck;          // n_k |c_k|
  std::vector<double> decay_ratios;   // consecutive nk_ck ratios
};

// Residues of 1/h at -n_k + i n_k in extended precision. Asserts that the
// n_k|c_k| terms decrease strictly, with < 1e-2 decay from the second
// consecutive pair on (the first pair only contracts like n_1/n_2).
ResidueReport residues(const OneZeroSpec& spec, mpfr_prec_t bits);

// g: per k the four simple-pole terms with residues +-c_k at +-n_k +- i n_k;
// registry carries the single zero at 0 known from g = z/H(z^4).
ExprPtr build_g(const OneZeroSpec& spec, const std::vector<BigComplex>& c);

// f: per k and j = -n_k..n_k-1 the terms c_k/(z+j-i n_k) - c_k/(z+j+i n_k).
ExprPtr build_f(const OneZeroSpec& spec, const std::vector<BigComplex>& c);

struct OneZeroBundle {
  OneZeroSpec spec;
  mpfr_prec_t bits = 256;
  ExprPtr H, h, g, f;
  std::vector<BigComplex> c;
  std::vector<double> nk_ck;
  std::vector<double> decay_ratios;
};

OneZeroBundle build_bundle(const OneZeroSpec& spec, mpfr_prec_t bits = 256);

struct IdentitySample {
  Complex z{};
  double err = 0.0;
};

struct BundleVerification {
  double err_delta = 0.0;     // (i)  f(z+1) - f(z) = g(z)
  IdentitySample worst_delta;
  double err_rational = 0.0;  // (ii) g(z) * H(z^4) / z = 1
  IdentitySample worst_rational;
  long winding_net = 0;       // (iii) net winding of g on |z| = 1.5*sqrt(2)*n_K
  long expected_net = 0;
  long zeros_in_disk = 0;
  double err_antisym = 0.0;   // (iv) h'(i b) = -h'(b) at the 4K zeros
  int samples = 0;

  bool pass(double tol_delta = 1e-12, double tol_rational = 1e-10,
            double tol_antisym = 1e-12) const {
    return err_delta <= tol_delta && err_rational <= tol_rational && winding_net == expected_net &&
           zeros_in_disk == 1 && err_antisym <= tol_antisym;
  }
};

// Verifies the finite-K identities at random points away from poles, in
// extended precision. Throws IdentityFailure only on degenerate inputs;
// numeric outcomes are reported for the caller to judge.
BundleVerification verify_bundle(const OneZeroBundle& b, int samples, uint64_t seed);

// All 4K zeros +-n_k +- i n_k of h.
std::vector<Complex> bundle_zero_lattice(const OneZeroSpec& spec);

}  // namespace merodiff

#endif
