#pragma once

#include <cmath>
#include <limits>

#include "hestonld/errors.hpp"

namespace hestonld {

// A real interval with endpoint openness. Endpoints may be -inf / +inf, in
// which case the endpoint is forced open. The empty interval is representable
// and reported by empty().
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;

  static Interval make(double lo, double hi, bool lo_open, bool hi_open) {
    if (std::isnan(lo) || std::isnan(hi))
      throw Error("Interval: NaN endpoint");
    Interval r{lo, hi, lo_open, hi_open};
    if (std::isinf(lo)) r.lo_open = true;
    if (std::isinf(hi)) r.hi_open = true;
    return r;
  }

  static Interval closed(double lo, double hi) { return make(lo, hi, false, false); }
  static Interval open(double lo, double hi) { return make(lo, hi, true, true); }
  static Interval all() {
    const double inf = std::numeric_limits<double>::infinity();
    return make(-inf, inf, true, true);
  }

  [[nodiscard]] bool empty() const {
    if (lo > hi) return true;
    if (lo == hi && (lo_open || hi_open)) return true;
    return false;
  }

  [[nodiscard]] bool contains(double u) const {
    if (empty()) return false;
    if (u < lo || (u == lo && lo_open)) return false;
    if (u > hi || (u == hi && hi_open)) return false;
    return true;
  }

  // Interior endpoints drop openness entirely.
  [[nodiscard]] bool contains_in_interior(double u) const {
    return !empty() && u > lo && u < hi;
  }

  [[nodiscard]] Interval intersect(const Interval& other) const {
    Interval r{};
    if (lo > other.lo) {
      r.lo = lo;
      r.lo_open = lo_open;
    } else if (lo < other.lo) {
      r.lo = other.lo;
      r.lo_open = other.lo_open;
    } else {
      r.lo = lo;
      r.lo_open = lo_open || other.lo_open;
    }
    if (hi < other.hi) {
      r.hi = hi;
      r.hi_open = hi_open;
    } else if (hi > other.hi) {
      r.hi = other.hi;
      r.hi_open = other.hi_open;
    } else {
      r.hi = hi;
      r.hi_open = hi_open || other.hi_open;
    }
    return r;
  }
};

}  // namespace hestonld
