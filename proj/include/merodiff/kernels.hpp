#ifndef MERODIFF_KERNELS_HPP
#define MERODIFF_KERNELS_HPP

#include <span>
#include <vector>

#include "merodiff/expr.hpp"

namespace merodiff {

// Data-parallel evaluation kernels. The OpenMP variants write one slot per
// sample and reduce serially in index order, so results are bit-identical to
// the serial reference for any thread count. Evaluation errors inside a
// parallel region are captured per slot and rethrown in index order.

std::vector<double> circle_angles(int count);

// f(r*e^{i*theta}) for each angle.
std::vector<LogComplex> eval_circle(const ExprPtr& f, double r, std::span<const double> angles);
std::vector<LogComplex> eval_circle_serial(const ExprPtr& f, double r,
                                           std::span<const double> angles);

std::vector<LogComplex> eval_points(const ExprPtr& f, std::span<const Complex> pts);
std::vector<LogComplex> eval_points_serial(const ExprPtr& f, std::span<const Complex> pts);

}  // namespace merodiff

#endif
