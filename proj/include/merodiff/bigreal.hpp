#ifndef MERODIFF_BIGREAL_HPP
#define MERODIFF_BIGREAL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

namespace merodiff {

// Thread-local working precision for extended evaluation, in mantissa bits.
// All BigReal arithmetic rounds results to the working precision active at
// the time of the operation.
mpfr_prec_t working_precision();
void set_working_precision(mpfr_prec_t bits);

class PrecisionGuard {
 public:
  explicit PrecisionGuard(mpfr_prec_t bits) : saved_(working_precision()) {
    set_working_precision(bits);
  }
  ~PrecisionGuard() { set_working_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Arbitrary-precision real backed by mpfr_t, value semantics, round-to-nearest.
class BigReal {
 public:
  BigReal() { mpfr_init2(v_, working_precision()); }
  BigReal(double d) {  // NOLINT: implicit by design, mirrors double literals
    mpfr_init2(v_, working_precision());
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, 64);
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  static BigReal from_string(const std::string& s);
  static BigReal pi();
  static BigReal pos_inf();
  static BigReal neg_inf();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Decimal string with enough digits to reparse to the identical value.
  std::string to_string() const;

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);
  BigReal& operator+=(const BigReal& b) { return *this = *this + b; }
  BigReal& operator-=(const BigReal& b) { return *this = *this - b; }
  BigReal& operator*=(const BigReal& b) { return *this = *this * b; }
  BigReal& operator/=(const BigReal& b) { return *this = *this / b; }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return !mpfr_equal_p(a.v_, b.v_); }

  friend BigReal abs(const BigReal& a);
  friend BigReal sqrt(const BigReal& a);
  friend BigReal exp(const BigReal& a);
  friend BigReal log(const BigReal& a);
  friend BigReal log1p(const BigReal& a);
  friend BigReal cos(const BigReal& a);
  friend BigReal sin(const BigReal& a);
  friend BigReal atan2(const BigReal& y, const BigReal& x);
  friend BigReal hypot(const BigReal& x, const BigReal& y);
  friend BigReal fmod(const BigReal& a, const BigReal& b);
  friend BigReal max(const BigReal& a, const BigReal& b);
  friend BigReal min(const BigReal& a, const BigReal& b);
  friend bool isfinite(const BigReal& a) { return mpfr_number_p(a.v_); }
  friend bool isinf(const BigReal& a) { return mpfr_inf_p(a.v_); }
  friend bool isnan(const BigReal& a) { return mpfr_nan_p(a.v_); }

 private:
  mpfr_t v_;
};

}  // namespace merodiff

#endif
