#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hestonld/cgf.hpp"
#include "hestonld/errors.hpp"
#include "hestonld/interval.hpp"

namespace hestonld {

// One point of the rate function: value = cgf*(x), the maximizer of
// u*x - cgf(u), and whether the supremum is attained (false when it is only
// approached at an open truncation endpoint).
struct RatePoint {
  double x = 0.0;
  double value = 0.0;
  double maximizer = 0.0;
  bool attained = true;
};

namespace detail {

// One-sided limits of the derivative at the domain edges. Analytic
// endpoints are steep (+-inf); a biting truncation cut keeps the finite
// analytic derivative unless the cut sits exactly on an analytic endpoint.
inline double derivative_limit_lo(const CgfSpec& spec) {
  const double lo = spec.effective_domain().lo;
  const bool cut = spec.truncation_bites() && spec.truncation() &&
                   spec.truncation()->side == TruncationSide::Lower;
  if (!cut) return -std::numeric_limits<double>::infinity();
  const double v = lo + spec.tilt_shift();
  if (v <= spec.base_lower()) return -std::numeric_limits<double>::infinity();
  return base_cgf_derivative(spec.params(), v);
}

inline double derivative_limit_hi(const CgfSpec& spec) {
  const double hi = spec.effective_domain().hi;
  const bool cut = spec.truncation_bites() && spec.truncation() &&
                   spec.truncation()->side == TruncationSide::Upper;
  if (!cut) return std::numeric_limits<double>::infinity();
  const double v = hi + spec.tilt_shift();
  if (v >= spec.base_upper()) return std::numeric_limits<double>::infinity();
  return base_cgf_derivative(spec.params(), v);
}

}  // namespace detail

// Fenchel-Legendre transform of the spec at x. On the steep part the
// stationarity equation cgf'(u) = x is solved by bracketed Newton with
// bisection fallback; the bracket is grown geometrically from u = 0 toward
// the relevant endpoint (cgf' is strictly increasing, so one always
// exists). Beyond the derivative limit at an open truncation cut the
// supremum is only approached at the cut and attained is false.
inline RatePoint conjugate(const CgfSpec& spec, double x) {
  if (spec.effective_domain().empty()) throw EmptyDomain("conjugate of an empty-domain spec");
  const HestonParams& p = spec.params();
  const double shift = spec.tilt_shift();
  const Interval dom = spec.effective_domain();

  auto lam = [&](double u) { return detail::base_cgf_value(p, u + shift); };
  auto dlam = [&](double u) { return detail::base_cgf_derivative(p, u + shift); };
  auto d2lam = [&](double u) { return detail::base_cgf_second_derivative(p, u + shift); };

  auto boundary_point = [&](double b) {
    RatePoint r;
    r.x = x;
    r.maximizer = b;
    r.value = b * x - lam(b);
    r.attained = false;
    return r;
  };

  const double dlo = detail::derivative_limit_lo(spec);
  const double dhi = detail::derivative_limit_hi(spec);
  if (x >= dhi) return boundary_point(dom.hi);
  if (x <= dlo) return boundary_point(dom.lo);

  // Bracket [a,b] with dlam(a) <= x <= dlam(b).
  const double f0 = dlam(0.0);
  double a = 0.0, b = 0.0;
  if (x == f0) {
    a = b = 0.0;
  } else if (x > f0) {
    const double edge = dom.hi;
    a = 0.0;
    for (int k = 1; k <= 200; ++k) {
      b = edge - (edge - 0.0) * std::pow(0.5, k);
      if (b <= a) b = 0.5 * (a + edge);
      if (dlam(b) >= x) break;
      a = b;
      if (k == 200) throw Error("conjugate: bracketing failed toward the upper endpoint");
    }
  } else {
    const double edge = dom.lo;
    b = 0.0;
    for (int k = 1; k <= 200; ++k) {
      a = edge - (edge - 0.0) * std::pow(0.5, k);
      if (a >= b) a = 0.5 * (edge + b);
      if (dlam(a) <= x) break;
      b = a;
      if (k == 200) throw Error("conjugate: bracketing failed toward the lower endpoint");
    }
  }

  // Safeguarded Newton on cgf'(u) = x.
  double u = 0.5 * (a + b);
  if (a == b) u = a;
  const double ftol = 1e-12 * std::max(1.0, std::fabs(x));
  for (int iter = 0; iter < 200 && a != b; ++iter) {
    const double f = dlam(u) - x;
    if (std::fabs(f) <= ftol) break;
    if (f < 0.0) a = u; else b = u;
    const double curv = d2lam(u);
    double next = curv > 0.0 ? u - f / curv : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double move = std::fabs(next - u);
    u = next;
    if (move <= 1e-12 * std::max(1.0, std::fabs(u)) && std::fabs(dlam(u) - x) <= 1e3 * ftol)
      break;
    if (b - a <= 1e-15 * std::max(1.0, std::fabs(u))) break;
  }

  RatePoint r;
  r.x = x;
  r.maximizer = u;
  r.value = u * x - lam(u);
  if (r.value < 0.0 && r.value > -1e-12 * std::max(1.0, std::fabs(x))) r.value = 0.0;
  r.attained = true;
  return r;
}

// Rate function under the share measure; equals conjugate(base, x) - x.
inline double tilted_rate(const HestonParams& p, double x) {
  return conjugate(tilt(CgfSpec::base(p), 1.0), x).value;
}

// inf over B of the rate function, using convexity: zero if B contains the
// minimizer, otherwise the value at the endpoint of B nearest to it (open
// endpoints give the same infimum by continuity of the conjugate, which is
// finite everywhere for these specs).
inline double rate_infimum(const CgfSpec& spec, const Interval& B) {
  if (B.empty()) throw EmptyInterval("rate infimum over an empty interval");
  const double x_min = cgf_derivative(spec, 0.0);
  if (B.contains(x_min)) return 0.0;
  const double edge = x_min < B.lo ? B.lo : B.hi;
  return conjugate(spec, edge).value;
}

}  // namespace hestonld
