#include "merodiff/bigreal.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace merodiff {

namespace {
thread_local mpfr_prec_t g_working_prec = 256;
}

mpfr_prec_t working_precision() { return g_working_prec; }

void set_working_precision(mpfr_prec_t bits) {
  g_working_prec = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits;
}

BigReal BigReal::from_string(const std::string& s) {
  BigReal r;
  mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi() {
  BigReal r;
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::pos_inf() {
  BigReal r;
  mpfr_set_inf(r.v_, +1);
  return r;
}

BigReal BigReal::neg_inf() {
  BigReal r;
  mpfr_set_inf(r.v_, -1);
  return r;
}

std::string BigReal::to_string() const {
  // digits10 = ceil(prec * log10(2)) + 2 guarantees decimal round-trip.
  int digits = static_cast<int>(std::ceil(precision() * 0.3010299956639812)) + 2;
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

#define MERODIFF_BIN_OP(name, fun)                              \
  BigReal name(const BigReal& a, const BigReal& b) {            \
    BigReal r;                                                  \
    fun(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                  \
    return r;                                                   \
  }

MERODIFF_BIN_OP(operator+, mpfr_add)
MERODIFF_BIN_OP(operator-, mpfr_sub)
MERODIFF_BIN_OP(operator*, mpfr_mul)
MERODIFF_BIN_OP(operator/, mpfr_div)
MERODIFF_BIN_OP(atan2, mpfr_atan2)
MERODIFF_BIN_OP(hypot, mpfr_hypot)
MERODIFF_BIN_OP(fmod, mpfr_fmod)
MERODIFF_BIN_OP(max, mpfr_max)
MERODIFF_BIN_OP(min, mpfr_min)
#undef MERODIFF_BIN_OP

#define MERODIFF_UN_OP(name, fun)              \
  BigReal name(const BigReal& a) {             \
    BigReal r;                                 \
    fun(r.raw(), a.raw(), MPFR_RNDN);          \
    return r;                                  \
  }

MERODIFF_UN_OP(operator-, mpfr_neg)
MERODIFF_UN_OP(abs, mpfr_abs)
MERODIFF_UN_OP(sqrt, mpfr_sqrt)
MERODIFF_UN_OP(exp, mpfr_exp)
MERODIFF_UN_OP(log, mpfr_log)
MERODIFF_UN_OP(log1p, mpfr_log1p)
MERODIFF_UN_OP(cos, mpfr_cos)
MERODIFF_UN_OP(sin, mpfr_sin)
#undef MERODIFF_UN_OP

}  // namespace merodiff
