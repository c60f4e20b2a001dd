#ifndef MERODIFF_STATS_HPP
#define MERODIFF_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "merodiff/scalar.hpp"

namespace merodiff {

inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median over the bottom/top `frac` fraction of the rows (by index; callers
// keep rows sorted by radius). At least one row is always taken.
inline double bottom_decile_median(std::span<const double> v, double frac = 0.1) {
  size_t n = std::max<size_t>(1, static_cast<size_t>(std::ceil(v.size() * frac)));
  return median(std::vector<double>(v.begin(), v.begin() + std::min(n, v.size())));
}

inline double top_decile_median(std::span<const double> v, double frac = 0.1) {
  size_t n = std::max<size_t>(1, static_cast<size_t>(std::ceil(v.size() * frac)));
  n = std::min(n, v.size());
  return median(std::vector<double>(v.end() - n, v.end()));
}

// splitmix64: tiny, portable, deterministic across platforms and runs.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  // Uniform over the disk |z| <= r.
  Complex in_disk(double r) {
    double m = r * std::sqrt(unit());
    double t = 2.0 * 3.141592653589793 * unit();
    return {m * std::cos(t), m * std::sin(t)};
  }
};

}  // namespace merodiff

#endif
