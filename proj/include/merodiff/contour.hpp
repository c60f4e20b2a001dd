#ifndef MERODIFF_CONTOUR_HPP
#define MERODIFF_CONTOUR_HPP

#include <optional>
#include <vector>

#include "merodiff/expr.hpp"

namespace merodiff {

struct Contour {
  enum class Shape { Circle, Rectangle };
  Shape shape = Shape::Circle;
  Complex center{};
  double radius = 1.0;
  Complex lo{}, hi{};     // rectangle corners
  int orientation = 1;    // +1 counterclockwise

  static Contour circle(Complex center, double radius, int orientation = 1);
  static Contour rectangle(Complex lo, Complex hi, int orientation = 1);

  Complex at(double t) const;  // t in [0,1), counterclockwise
  double scale() const;
  double distance_to(Complex p) const;
};

struct CountResult {
  long net;               // zeros - poles inside
  std::size_t phase_steps;
  bool refined;
  double residual_turns;
};

// Net winding of f along the contour: principal-value phase increments of
// adaptively refined samples, every increment < pi/2 before accepting.
CountResult winding_count(const ExprPtr& f, const Contour& c);

// net + (poles inside, with multiplicity). Pole count comes from the
// override when given, else from a pole-complete registry.
long count_zeros_in_disk(const ExprPtr& f, double r, std::optional<long> poles_inside = {});

struct ZeroBox {
  Complex center;
  double half_re, half_im;
  long count;
  bool resolved;  // false when the depth cap was hit before the tolerance
};

// Quadtree subdivision: leaves are boxes with count >= 1 and diameter below
// tol (or depth-capped). Subdivision lines hitting a zero/pole are jittered
// by a deterministic golden-ratio sequence.
std::vector<ZeroBox> locate_zeros(const ExprPtr& f, Complex lo, Complex hi, int max_depth,
                                  double tol, const std::vector<RegEntry>* pole_list = nullptr);

}  // namespace merodiff

#endif
