#include "merodiff/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace merodiff {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kDblEps = 2.220446049250313e-16;

thread_local mpfr_prec_t g_escalation_bits = 256;

std::string cx_str(const Complex& z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}
}  // namespace

mpfr_prec_t escalation_bits() { return g_escalation_bits; }
void set_escalation_bits(mpfr_prec_t bits) { g_escalation_bits = bits; }

Complex to_complex(const LogComplex& v) {
  if (v.is_zero()) return {0.0, 0.0};
  double c = std::cos(v.arg), s = std::sin(v.arg);
  if (v.logmag > 709.0) {
    double inf = std::numeric_limits<double>::infinity();
    return {c == 0 ? 0.0 : std::copysign(inf, c), s == 0 ? 0.0 : std::copysign(inf, s)};
  }
  double m = std::exp(v.logmag);
  return {m * c, m * s};
}

// ---------------- construction ----------------

namespace {

ExprPtr base_node(NodeKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

ExprPtr finish_const(std::shared_ptr<Expr> e) {
  e->cval_d = to_complexd(e->cval);
  e->cval_lc = lc_from_cx(Cx<double>{e->cval_d.real(), e->cval_d.imag()});
  return e;
}

const Expr& deref(const ExprPtr& p) { return *p; }

}  // namespace

bool is_const_value(const Expr& e, const Complex& v) {
  return e.kind == NodeKind::Const && e.cval_d == v;
}

ExprPtr make_const(const Complex& c) { return make_const(big_complex(c)); }

ExprPtr make_const(const BigComplex& c) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Const;
  e->cval = c;
  return finish_const(std::move(e));
}

ExprPtr make_var() { return base_node(NodeKind::Var); }

ExprPtr make_monomial(long k) {
  if (k < 1) fail(ErrorCode::DomainError, "monomial exponent must be positive");
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Monomial;
  e->power = k;
  return e;
}

ExprPtr make_sum(std::vector<ExprPtr> kids) {
  std::vector<ExprPtr> keep;
  BigComplex cacc = big_complex(0, 0);
  bool have_const = false;
  for (auto& k : kids) {
    if (!k) fail(ErrorCode::DomainError, "null child in sum");
    if (is_zero_expr(*k)) continue;
    if (k->kind == NodeKind::Const) {
      cacc = cacc + k->cval;
      have_const = true;
      continue;
    }
    keep.push_back(std::move(k));
  }
  if (have_const && !(cacc.re == BigReal(0.0) && cacc.im == BigReal(0.0)))
    keep.insert(keep.begin(), make_const(cacc));
  if (keep.empty()) return make_const(Complex(0, 0));
  if (keep.size() == 1) return keep[0];
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Sum;
  e->kids = std::move(keep);
  return e;
}

ExprPtr make_product(std::vector<ExprPtr> kids) {
  std::vector<ExprPtr> keep;
  BigComplex cacc = big_complex(1, 0);
  bool have_const = false;
  for (auto& k : kids) {
    if (!k) fail(ErrorCode::DomainError, "null child in product");
    if (is_zero_expr(*k)) return make_const(Complex(0, 0));
    if (k->kind == NodeKind::Const) {
      cacc = cacc * k->cval;
      have_const = true;
      continue;
    }
    keep.push_back(std::move(k));
  }
  if (have_const && !(cacc.re == BigReal(1.0) && cacc.im == BigReal(0.0)))
    keep.insert(keep.begin(), make_const(cacc));
  if (keep.empty()) return make_const(Complex(1, 0));
  if (keep.size() == 1) return keep[0];
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Product;
  e->kids = std::move(keep);
  return e;
}

ExprPtr make_quotient(ExprPtr num, ExprPtr den) {
  if (!num || !den) fail(ErrorCode::DomainError, "null child in quotient");
  if (is_zero_expr(*den)) fail(ErrorCode::DomainError, "identically-zero denominator");
  if (is_zero_expr(*num)) return make_const(Complex(0, 0));
  if (is_const_value(*den, Complex(1, 0))) return num;
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Quotient;
  e->kids = {std::move(num), std::move(den)};
  return e;
}

ExprPtr make_shift(ExprPtr child, const Complex& c) { return make_shift(std::move(child), big_complex(c)); }

ExprPtr make_shift(ExprPtr child, const BigComplex& c) {
  if (!child) fail(ErrorCode::DomainError, "null child in shift");
  if (c.re == BigReal(0.0) && c.im == BigReal(0.0)) return child;
  if (child->kind == NodeKind::Const) return child;
  BigComplex off = c;
  if (child->kind == NodeKind::Shift) {
    off = off + child->cval;
    ExprPtr inner = child->kids[0];
    if (off.re == BigReal(0.0) && off.im == BigReal(0.0)) return inner;
    child = inner;
  }
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Shift;
  e->kids = {std::move(child)};
  e->cval = off;
  return finish_const(std::move(e));
}

ExprPtr make_factor_product(const std::vector<Complex>& as) {
  std::vector<BigComplex> hp;
  hp.reserve(as.size());
  for (auto& a : as) hp.push_back(big_complex(a));
  return make_factor_product(std::move(hp));
}

ExprPtr make_factor_product(std::vector<BigComplex> as) {
  if (as.empty()) return make_const(Complex(1, 0));
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::FactorProduct;
  for (auto& a : as) {
    Complex ad = to_complexd(a);
    if (ad == Complex(0, 0)) fail(ErrorCode::DomainError, "factor product requires A_k != 0");
    e->factors_d.push_back(ad);
  }
  e->factors = std::move(as);
  return e;
}

ExprPtr make_partial_fractions(const std::vector<std::pair<Complex, Complex>>& terms) {
  std::vector<std::pair<BigComplex, BigComplex>> hp;
  hp.reserve(terms.size());
  for (auto& [c, p] : terms) hp.emplace_back(big_complex(c), big_complex(p));
  return make_partial_fractions(std::move(hp));
}

ExprPtr make_partial_fractions(std::vector<std::pair<BigComplex, BigComplex>> terms) {
  if (terms.empty()) return make_const(Complex(0, 0));
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::PartialFractions;
  for (auto& [c, p] : terms) {
    PfTerm t;
    t.coeff = std::move(c);
    t.pole = std::move(p);
    t.coeff_d = to_complexd(t.coeff);
    t.pole_d = to_complexd(t.pole);
    e->pf.push_back(std::move(t));
  }
  std::vector<Complex> poles;
  for (auto& t : e->pf) poles.push_back(t.pole_d);
  std::sort(poles.begin(), poles.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (size_t i = 1; i < poles.size(); ++i)
    if (Registry::same_location(poles[i - 1], poles[i]))
      fail(ErrorCode::DomainError, "partial fractions require distinct poles");
  return e;
}

ExprPtr with_registry(ExprPtr e, Registry reg) {
  auto copy = std::make_shared<Expr>(*e);
  copy->reg_override = std::make_shared<const Registry>(std::move(reg));
  return copy;
}

// ---------------- evaluation ----------------

namespace {

template <class R>
Cx<R> node_constant(const Expr& e) {
  if constexpr (std::is_same_v<R, double>) {
    return Cx<double>{e.cval_d.real(), e.cval_d.imag()};
  } else {
    return e.cval;
  }
}

// Fast double path for a factor product: running complex product with
// power-of-two renormalization, one log/atan2 at the end.
LogComplex eval_factor_product_d(const Expr& e, const Cx<double>& z) {
  double ex2 = 0.0;
  Cx<double> p{1.0, 0.0};
  for (const Complex& a : e.factors_d) {
    Cx<double> ca{a.real(), a.imag()};
    Cx<double> w = Cx<double>{z.re + ca.re, z.im + ca.im} / ca;
    p = p * w;
    double m = std::max(std::fabs(p.re), std::fabs(p.im));
    if (m == 0.0) return LogComplex::zero();
    if (m > 1e150 || m < 1e-150) {
      int e2 = 0;
      std::frexp(m, &e2);
      double scale = std::ldexp(1.0, -e2);
      p.re *= scale;
      p.im *= scale;
      ex2 += e2;
    }
  }
  double mag = std::hypot(p.re, p.im);
  if (mag == 0.0) return LogComplex::zero();
  double a = std::atan2(p.im, p.re);
  if (a <= -3.141592653589793) a = 3.141592653589793;
  return {ex2 * kLn2 + std::log(mag), a};
}

// Fast double path for partial fractions: linear compensated summation.
LogComplex eval_partial_fractions_d(const Expr& e, const Cx<double>& z, double* worst_drop) {
  NeumaierSum<double> re, im;
  double max2 = 0.0;
  double zmag = std::hypot(z.re, z.im);
  for (const PfTerm& t : e.pf) {
    Cx<double> d{z.re - t.pole_d.real(), z.im - t.pole_d.imag()};
    double d2 = d.re * d.re + d.im * d.im;
    double tol = 64 * kDblEps * (1.0 + zmag + std::abs(t.pole_d));
    if (d2 <= tol * tol)
      fail(ErrorCode::PoleHit, "partial fraction pole at z=" + cx_str(t.pole_d));
    Cx<double> term = Cx<double>{t.coeff_d.real(), t.coeff_d.imag()} / d;
    re.add(term.re);
    im.add(term.im);
    max2 = std::max(max2, term.re * term.re + term.im * term.im);
  }
  double re_t = re.total(), im_t = im.total();
  if (re_t == 0.0 && im_t == 0.0) {
    if (worst_drop) *worst_drop = std::numeric_limits<double>::infinity();
    return LogComplex::zero();
  }
  double mag = std::hypot(re_t, im_t);
  double drop = 0.5 * std::log(max2) - std::log(mag);
  if (worst_drop && drop > *worst_drop) *worst_drop = drop;
  double a = std::atan2(im_t, re_t);
  if (a <= -3.141592653589793) a = 3.141592653589793;
  return {std::log(mag), a};
}

}  // namespace

template <class R>
BasicLogComplex<R> eval_node(const Expr& e, const Cx<R>& z, EvalCtx<R>& ctx) {
  using LC = BasicLogComplex<R>;
  switch (e.kind) {
    case NodeKind::Const:
      if constexpr (std::is_same_v<R, double>)
        return e.cval_lc;
      else
        return lc_from_cx(Cx<BigReal>(e.cval));
    case NodeKind::Var:
      return lc_from_cx(z);
    case NodeKind::Monomial:
      return lc_pow(lc_from_cx(z), e.power);
    case NodeKind::Sum: {
      std::vector<LC> vals;
      vals.reserve(e.kids.size());
      for (const auto& k : e.kids) vals.push_back(eval_node(*k, z, ctx));
      return log_sum(std::span<const LC>(vals), &ctx.worst_drop);
    }
    case NodeKind::Product: {
      LC acc = LC::one();
      for (const auto& k : e.kids) acc = acc * eval_node(*k, z, ctx);
      return acc;
    }
    case NodeKind::Quotient: {
      LC n = eval_node(*e.kids[0], z, ctx);
      LC d = eval_node(*e.kids[1], z, ctx);
      if (d.is_zero())
        fail(ErrorCode::PoleHit, "denominator vanished at z=" + cx_str(cx_to_complex(z)));
      if (n.is_zero()) return LC::zero();
      return n / d;
    }
    case NodeKind::Shift: {
      Cx<R> c = node_constant<R>(e);
      return eval_node(*e.kids[0], Cx<R>{z.re + c.re, z.im + c.im}, ctx);
    }
    case NodeKind::FactorProduct: {
      if constexpr (std::is_same_v<R, double>) {
        return eval_factor_product_d(e, z);
      } else {
        LC acc = LC::one();
        for (const BigComplex& a : e.factors) {
          Cx<R> w = Cx<R>{z.re + a.re, z.im + a.im} / Cx<R>(a);
          acc = acc * lc_from_cx(w);
        }
        return acc;
      }
    }
    case NodeKind::PartialFractions: {
      if constexpr (std::is_same_v<R, double>) {
        return eval_partial_fractions_d(e, z, &ctx.worst_drop);
      } else {
        std::vector<LC> vals;
        vals.reserve(e.pf.size());
        R zmag = abs(z);
        for (const PfTerm& t : e.pf) {
          Cx<R> d{z.re - t.pole.re, z.im - t.pole.im};
          R dist = abs(d);
          R tol = exp(BigReal(ScalarTraits<R>::eps_log() + 4.16)) * (BigReal(1.0) + zmag + abs(Cx<R>(t.pole)));
          if (dist <= tol) fail(ErrorCode::PoleHit, "partial fraction pole at z=" + cx_str(t.pole_d));
          vals.push_back(lc_from_cx(Cx<R>(t.coeff)) / lc_from_cx(d));
        }
        return log_sum(std::span<const LC>(vals), &ctx.worst_drop);
      }
    }
  }
  fail(ErrorCode::DomainError, "unreachable node kind");
}

template LogComplex eval_node<double>(const Expr&, const Cx<double>&, EvalCtx<double>&);
template LogComplexHp eval_node<BigReal>(const Expr&, const Cx<BigReal>&, EvalCtx<BigReal>&);

LogComplex evaluate(const ExprPtr& f, Complex z) {
  EvalCtx<double> ctx;
  LogComplex v = eval_node<double>(deref(f), Cx<double>{z.real(), z.imag()}, ctx);
  if (ctx.worst_drop <= kEscalationDropNats) return v;
  PrecisionGuard guard(escalation_bits());
  EvalCtx<BigReal> ctx2;
  LogComplexHp w = eval_node<BigReal>(deref(f), cx_from<BigReal>(z), ctx2);
  double budget = ScalarTraits<BigReal>::mantissa_nats() - kEscalationDropNats;
  double d2 = ctx2.worst_drop.to_double();
  if (std::isfinite(d2) && d2 > budget)
    fail(ErrorCode::PrecisionLoss, "cancellation of " + std::to_string(d2) +
                                       " nats exceeds extended budget at z=" + cx_str(z));
  return lc_down_hp(w);
}

Complex evaluate_c(const ExprPtr& f, Complex z) { return to_complex(evaluate(f, z)); }

LogComplexHp evaluate_hp(const ExprPtr& f, const BigComplex& z) {
  EvalCtx<BigReal> ctx;
  LogComplexHp v = eval_node<BigReal>(deref(f), z, ctx);
  double budget = ScalarTraits<BigReal>::mantissa_nats() - kEscalationDropNats;
  double d = ctx.worst_drop.to_double();
  if (std::isfinite(d) && d > budget)
    fail(ErrorCode::PrecisionLoss, "cancellation exceeds extended budget");
  return v;
}

// ---------------- differentiation ----------------

ExprPtr differentiate(const ExprPtr& f) {
  switch (f->kind) {
    case NodeKind::Const:
      return make_const(Complex(0, 0));
    case NodeKind::Var:
      return make_const(Complex(1, 0));
    case NodeKind::Monomial:
      if (f->power == 1) return make_const(Complex(1, 0));
      return make_product({make_const(Complex(static_cast<double>(f->power), 0)),
                           make_monomial(f->power - 1)});
    case NodeKind::Sum: {
      std::vector<ExprPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(differentiate(k));
      return make_sum(std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<ExprPtr> terms;
      for (size_t i = 0; i < f->kids.size(); ++i) {
        std::vector<ExprPtr> kids = f->kids;
        kids[i] = differentiate(f->kids[i]);
        terms.push_back(make_product(std::move(kids)));
      }
      return make_sum(std::move(terms));
    }
    case NodeKind::Quotient: {
      const ExprPtr& n = f->kids[0];
      const ExprPtr& d = f->kids[1];
      ExprPtr num = make_sum({make_product({differentiate(n), d}),
                              make_product({make_const(Complex(-1, 0)), n, differentiate(d)})});
      return make_quotient(std::move(num), make_product({d, d}));
    }
    case NodeKind::Shift:
      return make_shift(differentiate(f->kids[0]), f->cval);
    case NodeKind::FactorProduct: {
      // logarithmic derivative: H'/H = sum 1/(z + A_k), duplicates grouped
      std::vector<std::pair<BigComplex, BigComplex>> terms;
      std::vector<char> used(f->factors.size(), 0);
      for (size_t i = 0; i < f->factors.size(); ++i) {
        if (used[i]) continue;
        int count = 1;
        for (size_t j = i + 1; j < f->factors.size(); ++j) {
          if (!used[j] && f->factors_d[j] == f->factors_d[i]) {
            used[j] = 1;
            ++count;
          }
        }
        terms.emplace_back(big_complex(static_cast<double>(count), 0), -f->factors[i]);
      }
      return make_product({f, make_partial_fractions(std::move(terms))});
    }
    case NodeKind::PartialFractions: {
      std::vector<ExprPtr> terms;
      for (const PfTerm& t : f->pf) {
        terms.push_back(make_quotient(make_const(-t.coeff),
                                      make_shift(make_monomial(2), -t.pole)));
      }
      return make_sum(std::move(terms));
    }
  }
  fail(ErrorCode::DomainError, "unreachable node kind");
}

ExprPtr differentiate_n(ExprPtr f, int n) {
  for (int i = 0; i < n; ++i) f = differentiate(f);
  return f;
}

// ---------------- registry ----------------

Registry registry_of(const ExprPtr& f) {
  if (f->reg_override) return *f->reg_override;
  switch (f->kind) {
    case NodeKind::Const:
      return Registry::empty_complete();
    case NodeKind::Var:
      return Registry({{Complex(0, 0), 1, PointKind::Zero}}, true, true);
    case NodeKind::Monomial:
      return Registry({{Complex(0, 0), f->power, PointKind::Zero}}, true, true);
    case NodeKind::Sum: {
      // Zero set of a sum is not algebraically derivable; poles inherit from
      // the terms. Same-location poles across terms may cancel, so pole
      // completeness survives only when no such collision exists.
      bool pc = true;
      std::vector<std::pair<size_t, RegEntry>> pole_entries;
      for (size_t i = 0; i < f->kids.size(); ++i) {
        Registry r = registry_of(f->kids[i]);
        pc = pc && r.poles_complete();
        for (const auto& e : r.of_kind(PointKind::Pole)) pole_entries.emplace_back(i, e);
      }
      std::sort(pole_entries.begin(), pole_entries.end(), [](const auto& a, const auto& b) {
        Complex x = a.second.loc, y = b.second.loc;
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
      });
      std::vector<RegEntry> out;
      for (size_t i = 0; i < pole_entries.size(); ++i) {
        const auto& [child, e] = pole_entries[i];
        if (!out.empty() && Registry::same_location(out.back().loc, e.loc)) {
          if (pole_entries[i - 1].first != child) pc = false;  // cross-term collision
          out.back().mult = std::max(out.back().mult, e.mult);
          continue;
        }
        out.push_back(e);
      }
      return Registry(std::move(out), false, pc);
    }
    case NodeKind::Product: {
      Registry acc = Registry::empty_complete();
      for (const auto& k : f->kids) acc = Registry::merged(acc, registry_of(k));
      return acc;
    }
    case NodeKind::Quotient:
      return Registry::merged(registry_of(f->kids[0]), registry_of(f->kids[1]).inverted());
    case NodeKind::Shift:
      return registry_of(f->kids[0]).translated(-f->cval_d);
    case NodeKind::FactorProduct: {
      std::vector<RegEntry> e;
      for (const Complex& a : f->factors_d) e.push_back({-a, 1, PointKind::Zero});
      return Registry(std::move(e), true, true);
    }
    case NodeKind::PartialFractions: {
      std::vector<RegEntry> e;
      for (const PfTerm& t : f->pf) e.push_back({t.pole_d, 1, PointKind::Pole});
      // A single term c/(z-p) has no zeros at all; with two or more terms
      // the zero set is unknown.
      bool zc = f->pf.size() == 1;
      return Registry(std::move(e), zc, true);
    }
  }
  fail(ErrorCode::DomainError, "unreachable node kind");
}

}  // namespace merodiff
