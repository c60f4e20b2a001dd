#include "merodiff/counterexample.hpp"

#include <array>
#include <cmath>

#include "merodiff/contour.hpp"
#include "merodiff/stats.hpp"

namespace merodiff {

void validate(const OneZeroSpec& spec) {
  if (spec.n_seq.empty()) fail(ErrorCode::DomainError, "n_seq must have K >= 1 entries");
  for (size_t i = 0; i < spec.n_seq.size(); ++i) {
    if (spec.n_seq[i] < 1) fail(ErrorCode::DomainError, "n_k must be positive");
    if (i > 0) {
      double ratio = static_cast<double>(spec.n_seq[i]) / spec.n_seq[i - 1];
      if (ratio < spec.ratio_floor)
        fail(ErrorCode::DomainError, "n_{k+1}/n_k = " + std::to_string(ratio) +
                                         " below ratio floor " + std::to_string(spec.ratio_floor));
    }
  }
}

namespace {

double a_of(long n) {
  double nd = static_cast<double>(n);
  return 4.0 * nd * nd * nd * nd;
}

}  // namespace

std::vector<Complex> bundle_zero_lattice(const OneZeroSpec& spec) {
  std::vector<Complex> zs;
  for (long n : spec.n_seq) {
    double nd = static_cast<double>(n);
    zs.push_back({-nd, nd});
    zs.push_back({nd, nd});
    zs.push_back({-nd, -nd});
    zs.push_back({nd, -nd});
  }
  return zs;
}

ExprPtr build_H(const OneZeroSpec& spec) {
  validate(spec);
  std::vector<Complex> as;
  for (long n : spec.n_seq) as.push_back({a_of(n), 0.0});
  return make_factor_product(as);
}

ExprPtr build_h(const OneZeroSpec& spec) {
  validate(spec);
  // 1 + z^4/A_k = (1/A_k) * prod over the four roots w = n_k(+-1 +- i) of (z - w)
  std::vector<ExprPtr> kids;
  for (long n : spec.n_seq) {
    double nd = static_cast<double>(n);
    kids.push_back(make_const(Complex(1.0 / a_of(n), 0.0)));
    for (const Complex w : {Complex(nd, nd), Complex(-nd, nd), Complex(-nd, -nd), Complex(nd, -nd)})
      kids.push_back(make_shift(make_var(), -w));
  }
  return make_quotient(make_product(std::move(kids)), make_var());
}

ResidueReport residues(const OneZeroSpec& spec, mpfr_prec_t bits) {
  validate(spec);
  PrecisionGuard guard(bits);
  ExprPtr hp = differentiate(build_h(spec));
  ResidueReport rep;
  for (long n : spec.n_seq) {
    double nd = static_cast<double>(n);
    LogComplexHp v = evaluate_hp(hp, big_complex(-nd, nd));
    if (v.is_zero() || v.logmag.to_double() < -230.0)
      fail(ErrorCode::DegenerateZero, "h' vanishes at a lattice zero (n=" + std::to_string(n) + ")");
    LogComplexHp inv{-v.logmag, wrap_angle(-v.arg)};
    rep.c.push_back(lc_to_cx(inv));
    rep.nk_ck.push_back(nd * std::exp(inv.logmag.to_double()));
  }
  for (size_t i = 1; i < rep.nk_ck.size(); ++i)
    rep.decay_ratios.push_back(rep.nk_ck[i] / rep.nk_ck[i - 1]);
  for (size_t i = 0; i < rep.decay_ratios.size(); ++i) {
    if (rep.decay_ratios[i] >= 1.0)
      fail(ErrorCode::DegenerateZero, "n_k|c_k| terms are not strictly decreasing");
    if (i >= 1 && rep.decay_ratios[i] >= 1e-2)
      fail(ErrorCode::DegenerateZero, "n_k|c_k| tail decay slower than 1e-2 per step");
  }
  return rep;
}

ExprPtr build_g(const OneZeroSpec& spec, const std::vector<BigComplex>& c) {
  validate(spec);
  std::vector<std::pair<BigComplex, BigComplex>> terms;
  for (size_t k = 0; k < spec.n_seq.size(); ++k) {
    double nd = static_cast<double>(spec.n_seq[k]);
    const BigComplex& ck = c[k];
    terms.emplace_back(ck, big_complex(-nd, nd));
    terms.emplace_back(-ck, big_complex(nd, nd));
    terms.emplace_back(-ck, big_complex(-nd, -nd));
    terms.emplace_back(ck, big_complex(nd, -nd));
  }
  ExprPtr g = make_partial_fractions(std::move(terms));
  // g = z/H(z^4) exactly at finite K, so its zero set is {0}.
  std::vector<RegEntry> entries{{Complex(0, 0), 1, PointKind::Zero}};
  for (const Complex& p : bundle_zero_lattice(spec)) entries.push_back({p, 1, PointKind::Pole});
  return with_registry(std::move(g), Registry(std::move(entries), true, true));
}

ExprPtr build_f(const OneZeroSpec& spec, const std::vector<BigComplex>& c) {
  validate(spec);
  std::vector<std::pair<BigComplex, BigComplex>> terms;
  for (size_t k = 0; k < spec.n_seq.size(); ++k) {
    long n = spec.n_seq[k];
    double nd = static_cast<double>(n);
    const BigComplex& ck = c[k];
    for (long j = -n; j <= n - 1; ++j) {
      double jd = static_cast<double>(j);
      terms.emplace_back(ck, big_complex(-jd, nd));
      terms.emplace_back(-ck, big_complex(-jd, -nd));
    }
  }
  return make_partial_fractions(std::move(terms));
}

OneZeroBundle build_bundle(const OneZeroSpec& spec, mpfr_prec_t bits) {
  validate(spec);
  PrecisionGuard guard(bits);
  OneZeroBundle b;
  b.spec = spec;
  b.bits = bits;
  b.H = build_H(spec);
  b.h = build_h(spec);
  ResidueReport rep = residues(spec, bits);
  b.c = rep.c;
  b.nk_ck = rep.nk_ck;
  b.decay_ratios = rep.decay_ratios;
  b.g = build_g(spec, b.c);
  b.f = build_f(spec, b.c);
  return b;
}

BundleVerification verify_bundle(const OneZeroBundle& b, int samples, uint64_t seed) {
  PrecisionGuard guard(b.bits);
  BundleVerification out;
  out.samples = samples;
  long nK = b.spec.n_seq.back();
  long K = static_cast<long>(b.spec.n_seq.size());
  Registry fpoles = registry_of(b.f);
  Registry gpoles = registry_of(b.g);

  Rng rng(seed);
  int done = 0, attempts = 0;
  while (done < samples && attempts < 100 * samples + 1000) {
    ++attempts;
    Complex z = rng.in_disk(1.5 * static_cast<double>(nK));
    if (fpoles.min_distance_to(z) < 0.25 || fpoles.min_distance_to(z + Complex(1, 0)) < 0.25 ||
        gpoles.min_distance_to(z) < 0.25 || std::abs(z) < 0.05)
      continue;
    BigComplex zh = big_complex(z);
    // (i) telescoping: f(z+1) - f(z) = g(z)
    LogComplexHp fz1 = evaluate_hp(b.f, {zh.re + BigReal(1.0), zh.im});
    LogComplexHp fz = evaluate_hp(b.f, zh);
    std::array<LogComplexHp, 2> diff_terms{fz1, lc_neg(fz)};
    LogComplexHp delta = log_sum(std::span<const LogComplexHp>(diff_terms));
    LogComplexHp gz = evaluate_hp(b.g, zh);
    double e1 = lc_rel_dev(delta, gz);
    if (e1 > out.err_delta) {
      out.err_delta = e1;
      out.worst_delta = {z, e1};
    }
    // (ii) rational identity: g(z) * H(z^4) / z = 1
    BigComplex z2 = zh * zh;
    LogComplexHp Hz4 = evaluate_hp(b.H, z2 * z2);
    LogComplexHp ratio = gz * Hz4 / lc_from_cx(zh);
    Cx<BigReal> lin = lc_to_cx(ratio);
    double e2 = ScalarTraits<BigReal>::to_double(
        abs(Cx<BigReal>{lin.re - BigReal(1.0), lin.im}));
    if (e2 > out.err_rational) {
      out.err_rational = e2;
      out.worst_rational = {z, e2};
    }
    ++done;
  }
  if (done < samples)
    fail(ErrorCode::IdentityFailure, "could not place verification samples away from poles");

  // (iii) argument principle on |z| = 1.5*sqrt(2)*n_K
  double R = 1.5 * std::sqrt(2.0) * static_cast<double>(nK);
  CountResult w = winding_count(b.g, Contour::circle(Complex(0, 0), R));
  out.winding_net = w.net;
  out.expected_net = 1 - 4 * K;
  out.zeros_in_disk = count_zeros_in_disk(b.g, R);

  // (iv) h'(i b) = -h'(b) at every lattice zero
  ExprPtr hp = differentiate(b.h);
  for (const Complex& beta : bundle_zero_lattice(b.spec)) {
    BigComplex bb = big_complex(beta);
    BigComplex ib{-bb.im, bb.re};
    LogComplexHp lhs = evaluate_hp(hp, ib);
    LogComplexHp rhs = lc_neg(evaluate_hp(hp, bb));
    out.err_antisym = std::max(out.err_antisym, lc_rel_dev(lhs, rhs));
  }
  return out;
}

}  // namespace merodiff
