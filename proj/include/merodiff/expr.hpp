#ifndef MERODIFF_EXPR_HPP
#define MERODIFF_EXPR_HPP

#include <memory>
#include <utility>
#include <vector>

#include "merodiff/errors.hpp"
#include "merodiff/logcomplex.hpp"
#include "merodiff/registry.hpp"
#include "merodiff/scalar.hpp"

namespace merodiff {

enum class NodeKind {
  Const,
  Var,
  Monomial,
  Sum,
  Product,
  Quotient,
  Shift,
  FactorProduct,      // product of factors (1 + z/A_k)
  PartialFractions,   // sum of terms c_k / (z - p_k), distinct simple poles
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct PfTerm {
  BigComplex coeff;
  BigComplex pole;
  Complex coeff_d;
  Complex pole_d;
};

// Immutable expression tree denoting a meromorphic function. Node constants
// are stored in extended precision (with cached double mirrors) so the same
// tree serves both evaluation paths. Trees are safe to share across threads.
class Expr {
 public:
  NodeKind kind = NodeKind::Const;

  BigComplex cval;   // Const value or Shift offset
  Complex cval_d{};  // double mirror of cval
  LogComplex cval_lc = LogComplex::zero();

  long power = 0;  // Monomial exponent (>= 1)

  std::vector<ExprPtr> kids;  // Sum/Product children, Quotient {num, den}, Shift {child}

  std::vector<BigComplex> factors;  // FactorProduct A_k
  std::vector<Complex> factors_d;

  std::vector<PfTerm> pf;  // PartialFractions terms

  std::shared_ptr<const Registry> reg_override;
};

// --- construction (exact-only local folds, no general simplification) ---
ExprPtr make_const(const Complex& c);
ExprPtr make_const(const BigComplex& c);
ExprPtr make_var();
ExprPtr make_monomial(long k);
ExprPtr make_sum(std::vector<ExprPtr> kids);
ExprPtr make_product(std::vector<ExprPtr> kids);
ExprPtr make_quotient(ExprPtr num, ExprPtr den);
ExprPtr make_shift(ExprPtr child, const Complex& c);
ExprPtr make_shift(ExprPtr child, const BigComplex& c);
ExprPtr make_factor_product(const std::vector<Complex>& as);
ExprPtr make_factor_product(std::vector<BigComplex> as);
ExprPtr make_partial_fractions(const std::vector<std::pair<Complex, Complex>>& terms);
ExprPtr make_partial_fractions(std::vector<std::pair<BigComplex, BigComplex>> terms);

// Attach a caller-known registry (e.g. from an exact identity) to a tree
// whose zero set is not algebraically derivable.
ExprPtr with_registry(ExprPtr e, Registry reg);

bool is_const_value(const Expr& e, const Complex& v);
inline bool is_zero_expr(const Expr& e) { return is_const_value(e, Complex(0, 0)); }

// --- evaluation ---

// Escalation threshold from the precision-loss policy: a compensated sum
// whose result falls more than this many natural-log units below its largest
// addend re-runs in extended precision.
inline constexpr double kEscalationDropNats = 45.0;

// Mantissa bits used by the escalation path (thread-local, default 256).
mpfr_prec_t escalation_bits();
void set_escalation_bits(mpfr_prec_t bits);

template <class R>
struct EvalCtx {
  R worst_drop = ScalarTraits<R>::from_double(0.0);
};

template <class R>
BasicLogComplex<R> eval_node(const Expr& e, const Cx<R>& z, EvalCtx<R>& ctx);

// Double-precision evaluation with automatic escalation to the extended
// path on catastrophic cancellation. Throws PoleHit / PrecisionLoss.
LogComplex evaluate(const ExprPtr& f, Complex z);
Complex evaluate_c(const ExprPtr& f, Complex z);

// Extended-precision evaluation at the current working precision.
LogComplexHp evaluate_hp(const ExprPtr& f, const BigComplex& z);

// --- structure ops ---
ExprPtr differentiate(const ExprPtr& f);
ExprPtr differentiate_n(ExprPtr f, int n);
Registry registry_of(const ExprPtr& f);

}  // namespace merodiff

#endif
