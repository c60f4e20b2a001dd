#include "merodiff/registry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace merodiff {

bool Registry::same_location(Complex a, Complex b) {
  double tol = 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
  return std::abs(a - b) <= tol;
}

Registry::Registry(std::vector<RegEntry> entries, bool zeros_complete, bool poles_complete)
    : entries_(std::move(entries)),
      zeros_complete_(zeros_complete),
      poles_complete_(poles_complete) {
  normalize();
}

void Registry::normalize() {
  std::sort(entries_.begin(), entries_.end(), [](const RegEntry& a, const RegEntry& b) {
    double ma = std::abs(a.loc), mb = std::abs(b.loc);
    if (ma != mb) return ma < mb;
    if (a.loc.real() != b.loc.real()) return a.loc.real() < b.loc.real();
    if (a.loc.imag() != b.loc.imag()) return a.loc.imag() < b.loc.imag();
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  std::vector<RegEntry> out;
  for (const auto& e : entries_) {
    if (e.mult == 0) continue;
    if (!out.empty() && same_location(out.back().loc, e.loc)) {
      long net = (out.back().kind == PointKind::Zero ? out.back().mult : -out.back().mult) +
                 (e.kind == PointKind::Zero ? e.mult : -e.mult);
      if (net == 0) {
        out.pop_back();
      } else {
        out.back().kind = net > 0 ? PointKind::Zero : PointKind::Pole;
        out.back().mult = std::labs(net);
      }
      continue;
    }
    out.push_back(e);
  }
  entries_ = std::move(out);
}

Registry Registry::translated(Complex delta) const {
  std::vector<RegEntry> e = entries_;
  for (auto& x : e) x.loc += delta;
  return Registry(std::move(e), zeros_complete_, poles_complete_);
}

Registry Registry::inverted() const {
  std::vector<RegEntry> e = entries_;
  for (auto& x : e) x.kind = x.kind == PointKind::Zero ? PointKind::Pole : PointKind::Zero;
  return Registry(std::move(e), poles_complete_, zeros_complete_);
}

Registry Registry::merged(const Registry& a, const Registry& b) {
  std::vector<RegEntry> e = a.entries_;
  e.insert(e.end(), b.entries_.begin(), b.entries_.end());
  auto has = [](const Registry& r, PointKind k) {
    for (const auto& x : r.entries_)
      if (x.kind == k) return true;
    return false;
  };
  bool a_z = has(a, PointKind::Zero), a_p = has(a, PointKind::Pole);
  bool b_z = has(b, PointKind::Zero), b_p = has(b, PointKind::Pole);
  // A side of the merge is exhaustive when both inputs list that side fully
  // and no unlisted entry of the opposite kind could cancel it.
  bool zc = a.zeros_complete_ && b.zeros_complete_ && (a.poles_complete_ || !b_z) &&
            (b.poles_complete_ || !a_z);
  bool pc = a.poles_complete_ && b.poles_complete_ && (a.zeros_complete_ || !b_p) &&
            (b.zeros_complete_ || !a_p);
  return Registry(std::move(e), zc, pc);
}

long Registry::count_inside(double r, PointKind kind) const {
  long n = 0;
  for (const auto& e : entries_) {
    if (e.kind == kind && std::abs(e.loc) <= r) n += e.mult;
  }
  return n;
}

long Registry::count_in_box(Complex lo, Complex hi, PointKind kind) const {
  long n = 0;
  for (const auto& e : entries_) {
    if (e.kind != kind) continue;
    if (e.loc.real() >= lo.real() && e.loc.real() <= hi.real() && e.loc.imag() >= lo.imag() &&
        e.loc.imag() <= hi.imag())
      n += e.mult;
  }
  return n;
}

long Registry::mult_at_origin(PointKind kind) const {
  for (const auto& e : entries_) {
    if (e.kind == kind && same_location(e.loc, 0.0)) return e.mult;
  }
  return 0;
}

double Registry::min_distance_to(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) d = std::min(d, std::abs(z - e.loc));
  return d;
}

double Registry::min_modulus_gap(double r) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) d = std::min(d, std::fabs(std::abs(e.loc) - r));
  return d;
}

std::vector<RegEntry> Registry::of_kind(PointKind kind) const {
  std::vector<RegEntry> out;
  for (const auto& e : entries_)
    if (e.kind == kind) out.push_back(e);
  return out;
}

}  // namespace merodiff
