#ifndef MERODIFF_REGISTRY_HPP
#define MERODIFF_REGISTRY_HPP

#include <vector>

#include "merodiff/scalar.hpp"

namespace merodiff {

enum class PointKind { Zero, Pole };

struct RegEntry {
  Complex loc;
  long mult = 1;
  PointKind kind = PointKind::Zero;
};

// Finite list of known zeros/poles with multiplicities. Entries are kept
// sorted by modulus; entries within 1e-12*(1+|p|) of each other are merged
// (multiplicities add, opposite kinds cancel). The two completeness flags
// track whether the zero / pole side is exhaustive; `complete()` means both.
class Registry {
 public:
  Registry() = default;
  Registry(std::vector<RegEntry> entries, bool zeros_complete, bool poles_complete);

  static Registry empty_complete() { return Registry({}, true, true); }

  const std::vector<RegEntry>& entries() const { return entries_; }
  bool zeros_complete() const { return zeros_complete_; }
  bool poles_complete() const { return poles_complete_; }
  bool complete() const { return zeros_complete_ && poles_complete_; }

  Registry translated(Complex delta) const;
  Registry inverted() const;

  // Union with cancellation of opposite kinds at merged locations.
  static Registry merged(const Registry& a, const Registry& b);

  long count_inside(double r, PointKind kind) const;            // |loc| <= r, with multiplicity
  long count_in_box(Complex lo, Complex hi, PointKind kind) const;
  long mult_at_origin(PointKind kind) const;
  double min_distance_to(Complex z) const;                      // +inf when empty
  double min_modulus_gap(double r) const;                       // min | |loc| - r |
  std::vector<RegEntry> of_kind(PointKind kind) const;

  static bool same_location(Complex a, Complex b);

 private:
  void normalize();
  std::vector<RegEntry> entries_;
  bool zeros_complete_ = true;
  bool poles_complete_ = true;
};

}  // namespace merodiff

#endif
