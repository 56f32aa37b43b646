#pragma once

#include <cmath>
#include <limits>

#include "hestonld/errors.hpp"

namespace hestonld {

// A value in (-inf, +inf]: either a finite real or positive infinity.
// NaN and -inf are rejected at construction, so comparisons and sums never
// have to worry about them. Addition follows the convex-analysis convention
// finite + inf = inf.
class ExtendedReal {
 public:
  ExtendedReal() = default;

  ExtendedReal(double v) : v_(v) {  // NOLINT: implicit on purpose
    if (std::isnan(v)) throw Error("ExtendedReal: NaN is not representable");
    if (v == -std::numeric_limits<double>::infinity())
      throw Error("ExtendedReal: -inf is not representable");
  }

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] bool is_finite() const { return std::isfinite(v_); }
  [[nodiscard]] bool is_infinite() const { return !std::isfinite(v_); }

  // Raw value; +inf when infinite.
  [[nodiscard]] double value() const { return v_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.v_ + b.v_);
  }

  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

}  // namespace hestonld
