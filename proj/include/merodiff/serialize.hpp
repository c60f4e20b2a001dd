#ifndef MERODIFF_SERIALIZE_HPP
#define MERODIFF_SERIALIZE_HPP

#include <string>

#include "merodiff/expr.hpp"

namespace merodiff {

// Prefix text form of an expression tree, e.g.
//   (quot (var) (facprod 4 64))
//   (pfrac (0.5i -2+2i) (-0.5i 2+2i))
// Node tags: const var mono sum prod quot shift facprod pfrac.
// Complex literals are decimal: `1.5`, `-2e3`, `1.5+2.25i`, `2i`. Printing
// uses enough digits to reparse bit-identically at the stored precision.
std::string expr_to_text(const ExprPtr& e);
ExprPtr expr_from_text(const std::string& text);

std::string complex_to_text(const BigComplex& z);
BigComplex complex_from_text(const std::string& text);

}  // namespace merodiff

#endif
