#include "merodiff/kernels.hpp"

#include <cmath>
#include <optional>

namespace merodiff {

std::vector<double> circle_angles(int count) {
  std::vector<double> a(count);
  for (int i = 0; i < count; ++i) a[i] = 2.0 * 3.141592653589793 * i / count;
  return a;
}

namespace {

struct SlotError {
  ErrorCode code;
  std::string msg;
};

template <class PointFn>
std::vector<LogComplex> run_parallel(size_t n, const PointFn& at) {
  std::vector<LogComplex> out(n, LogComplex::zero());
  std::vector<std::optional<SlotError>> errs(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      out[i] = at(static_cast<size_t>(i));
    } catch (const MeroError& e) {
      errs[i] = SlotError{e.code(), e.what()};
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (errs[i]) throw MeroError(errs[i]->code, errs[i]->msg);
  return out;
}

template <class PointFn>
std::vector<LogComplex> run_serial(size_t n, const PointFn& at) {
  std::vector<LogComplex> out(n, LogComplex::zero());
  for (size_t i = 0; i < n; ++i) out[i] = at(i);
  return out;
}

}  // namespace

std::vector<LogComplex> eval_circle(const ExprPtr& f, double r, std::span<const double> angles) {
  return run_parallel(angles.size(), [&](size_t i) {
    return evaluate(f, Complex(r * std::cos(angles[i]), r * std::sin(angles[i])));
  });
}

std::vector<LogComplex> eval_circle_serial(const ExprPtr& f, double r,
                                           std::span<const double> angles) {
  return run_serial(angles.size(), [&](size_t i) {
    return evaluate(f, Complex(r * std::cos(angles[i]), r * std::sin(angles[i])));
  });
}

std::vector<LogComplex> eval_points(const ExprPtr& f, std::span<const Complex> pts) {
  return run_parallel(pts.size(), [&](size_t i) { return evaluate(f, pts[i]); });
}

std::vector<LogComplex> eval_points_serial(const ExprPtr& f, std::span<const Complex> pts) {
  return run_serial(pts.size(), [&](size_t i) { return evaluate(f, pts[i]); });
}

}  // namespace merodiff
