#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hestonld/errors.hpp"
#include "hestonld/extended_real.hpp"
#include "hestonld/interval.hpp"
#include "hestonld/params.hpp"

namespace hestonld {

// Quadratic under the square root of the limiting cgf. Its zeros are the
// endpoints of the effective domain.
inline double delta(const HestonParams& p, double u) {
  const double a = u * p.rho * p.sigma - p.kappa;
  return a * a - p.sigma * p.sigma * (u * u - u);
}

inline double delta_derivative(const HestonParams& p, double u) {
  return 2.0 * p.rho * p.sigma * (u * p.rho * p.sigma - p.kappa) -
         p.sigma * p.sigma * (2.0 * u - 1.0);
}

inline double delta_second_derivative(const HestonParams& p) {
  return -2.0 * p.sigma * p.sigma * (1.0 - p.rho * p.rho);
}

// Zeros of delta, u_minus < 0 < 1 < u_plus. The discriminant
// (kappa/sigma - rho)*kappa/sigma + 1/4 is positive for every valid
// parameter set, so the roots are always real.
inline std::pair<double, double> domain_endpoints(const HestonParams& p) {
  const double ks = p.kappa / p.sigma;
  const double disc = (ks - p.rho) * ks + 0.25;
  const double root = std::sqrt(disc);
  const double mid = 0.5 - p.rho * ks;
  const double denom = 1.0 - p.rho * p.rho;
  return {(mid - root) / denom, (mid + root) / denom};
}

enum class TruncationSide { Upper, Lower };

struct Truncation {
  double lambda = 0.0;
  TruncationSide side = TruncationSide::Upper;
};

namespace detail {

// Roundoff floor for clamping delta near its zeros; scaled to the magnitude
// of the terms that cancel there.
inline double delta_clamp_scale(const HestonParams& p, double u) {
  return p.kappa * p.kappa + p.sigma * p.sigma * (u * u + std::fabs(u)) + 1.0;
}

inline double clamped_delta(const HestonParams& p, double u) {
  double d = delta(p, u);
  if (d < 0.0 && d >= -1e-14 * delta_clamp_scale(p, u)) d = 0.0;
  return d;
}

// Closed-form value on the analytic domain [u_minus, u_plus]; caller must
// have checked membership.
inline double base_cgf_value(const HestonParams& p, double u) {
  const double d = clamped_delta(p, u);
  const double s2 = p.sigma * p.sigma;
  return -(p.theta * p.kappa / s2) * (u * p.rho * p.sigma - p.kappa + std::sqrt(d));
}

inline double base_cgf_derivative(const HestonParams& p, double u) {
  double d = clamped_delta(p, u);
  if (d <= 0.0) d = std::numeric_limits<double>::min();  // divergent endpoint
  const double s2 = p.sigma * p.sigma;
  return -(p.theta * p.kappa / s2) *
         (p.rho * p.sigma + delta_derivative(p, u) / (2.0 * std::sqrt(d)));
}

inline double base_cgf_second_derivative(const HestonParams& p, double u) {
  double d = clamped_delta(p, u);
  if (d <= 0.0) d = std::numeric_limits<double>::min();
  const double s2 = p.sigma * p.sigma;
  const double dd = delta_derivative(p, u);
  const double num = dd * dd - 2.0 * d * delta_second_derivative(p);
  return (p.theta * p.kappa / s2) * num / (4.0 * d * std::sqrt(d));
}

}  // namespace detail

// A limiting cgf: the base Heston function shifted by a measure tilt and
// optionally cut by a one-sided truncation with an open endpoint. The
// canonical composition order is tilt first, truncation second; tilting a
// truncated spec is rejected.
class CgfSpec {
 public:
  static CgfSpec base(const HestonParams& p) { return CgfSpec(validate(p), 0.0, std::nullopt); }

  [[nodiscard]] const HestonParams& params() const { return params_; }
  [[nodiscard]] double tilt_shift() const { return shift_; }
  [[nodiscard]] const std::optional<Truncation>& truncation() const { return trunc_; }

  [[nodiscard]] const Interval& effective_domain() const { return domain_; }

  // Endpoints of the untruncated (analytic) domain in this spec's
  // coordinates, where the derivative diverges.
  [[nodiscard]] double analytic_lower() const { return u_minus_ - shift_; }
  [[nodiscard]] double analytic_upper() const { return u_plus_ - shift_; }

  // Base-coordinate zeros of delta.
  [[nodiscard]] double base_lower() const { return u_minus_; }
  [[nodiscard]] double base_upper() const { return u_plus_; }

  // True when the truncation actually removes part of the analytic domain
  // (including a cut placed exactly on an analytic endpoint, which flips
  // that endpoint open).
  [[nodiscard]] bool truncation_bites() const { return bites_; }

  friend CgfSpec tilt(const CgfSpec& spec, double s) {
    if (spec.trunc_)
      throw InvalidComposition("tilt after truncation is not a valid composition");
    return CgfSpec(spec.params_, spec.shift_ + s, std::nullopt);
  }

  friend CgfSpec perturb(const CgfSpec& spec, double lambda, TruncationSide side) {
    if (!(lambda > 0.0))
      throw NonPositiveParameter("perturbation rate lambda must be strictly positive");
    if (spec.trunc_)
      throw InvalidComposition("spec already carries a truncation");
    return CgfSpec(spec.params_, spec.shift_, Truncation{lambda, side});
  }

 private:
  CgfSpec(HestonParams p, double shift, std::optional<Truncation> trunc)
      : params_(p), shift_(shift), trunc_(trunc) {
    auto [um, up] = domain_endpoints(params_);
    u_minus_ = um;
    u_plus_ = up;
    domain_ = Interval::closed(analytic_lower(), analytic_upper());
    if (trunc_) {
      const double inf = std::numeric_limits<double>::infinity();
      const Interval window = trunc_->side == TruncationSide::Upper
                                  ? Interval::make(-inf, trunc_->lambda, true, true)
                                  : Interval::make(-trunc_->lambda, inf, true, true);
      domain_ = domain_.intersect(window);
      bites_ = trunc_->side == TruncationSide::Upper
                   ? trunc_->lambda <= analytic_upper()
                   : -trunc_->lambda >= analytic_lower();
    }
    if (domain_.empty()) throw EmptyDomain("effective domain is empty");
    // The limiting-cgf assumption requires 0 in the interior of the domain.
    if (!(domain_.lo < 0.0 && 0.0 < domain_.hi))
      throw DomainExcludesZero("0 must lie in the interior of the effective domain");
  }

  HestonParams params_;
  double shift_ = 0.0;
  std::optional<Truncation> trunc_;
  double u_minus_ = 0.0;
  double u_plus_ = 0.0;
  Interval domain_{};
  bool bites_ = false;
};

// Value of the limiting cgf; +inf outside the effective domain (truncation
// endpoints are open, analytic endpoints closed).
inline ExtendedReal cgf_eval(const CgfSpec& spec, double u) {
  if (!spec.effective_domain().contains(u)) return ExtendedReal::infinity();
  const double v = u + spec.tilt_shift();
  if (detail::clamped_delta(spec.params(), v) < 0.0) return ExtendedReal::infinity();
  return detail::base_cgf_value(spec.params(), v);
}

// First derivative; defined only strictly inside the domain interior.
inline double cgf_derivative(const CgfSpec& spec, double u) {
  if (!spec.effective_domain().contains_in_interior(u))
    throw OutsideDomainInterior("derivative requested at or beyond a domain endpoint");
  return detail::base_cgf_derivative(spec.params(), u + spec.tilt_shift());
}

inline double cgf_second_derivative(const CgfSpec& spec, double u) {
  if (!spec.effective_domain().contains_in_interior(u))
    throw OutsideDomainInterior("second derivative requested at or beyond a domain endpoint");
  return detail::base_cgf_second_derivative(spec.params(), u + spec.tilt_shift());
}

struct SmoothnessEndpoint {
  double location = 0.0;
  bool is_steep = false;
  ExtendedReal derivative_limit;     // one-sided limit of |cgf'| at the endpoint
  bool lower_semicontinuous = true;
  bool truncation_cut = false;       // open truncation endpoint vs analytic zero of delta
  double numeric_max_abs_derivative = 0.0;
  bool numeric_diverged = false;     // sequence crossed the threshold and kept rising
};

struct SmoothnessReport {
  std::vector<SmoothnessEndpoint> endpoints;
  bool differentiable_interior = true;  // analytic for this family
  bool essentially_smooth = false;
  double divergence_threshold = 1e6;
};

// Classifies steepness and lower semicontinuity at both finite boundary
// points of the domain interior. Analytic endpoints are steep (delta has a
// simple zero there, so the derivative diverges); an open truncation cut
// keeps a finite derivative limit and kills lower semicontinuity whenever
// the cut lands inside the closed analytic domain. The numeric |cgf'|
// sequence along b -/+ 10^-k, k = 2..12, is recorded as confirmation.
inline SmoothnessReport smoothness_report(const CgfSpec& spec) {
  SmoothnessReport report;
  const Interval dom = spec.effective_domain();
  const HestonParams& p = spec.params();
  const double shift = spec.tilt_shift();

  auto probe = [&](double b, bool from_left) {
    SmoothnessEndpoint e;
    e.location = b;
    double prev = 0.0;
    int rising = 0;
    for (int k = 2; k <= 12; ++k) {
      const double step = std::pow(10.0, -k);
      const double u = from_left ? b - step : b + step;
      if (!(u > dom.lo && u < dom.hi)) continue;  // clip to the interior
      const double a = std::fabs(detail::base_cgf_derivative(p, u + shift));
      rising = a > prev ? rising + 1 : 0;
      prev = a;
      e.numeric_max_abs_derivative = std::max(e.numeric_max_abs_derivative, a);
    }
    e.numeric_diverged =
        e.numeric_max_abs_derivative > report.divergence_threshold && rising >= 4;
    return e;
  };

  auto classify = [&](double b, bool from_left, bool open_cut) {
    SmoothnessEndpoint e = probe(b, from_left);
    e.truncation_cut = open_cut;
    if (!open_cut) {
      // Analytic endpoint: |cgf'| ~ c / sqrt(b - u) diverges.
      e.is_steep = true;
      e.derivative_limit = ExtendedReal::infinity();
      e.lower_semicontinuous = true;
      return e;
    }
    const double v = b + shift;
    const bool on_analytic_edge = v <= spec.base_lower() || v >= spec.base_upper();
    if (on_analytic_edge) {
      e.is_steep = true;
      e.derivative_limit = ExtendedReal::infinity();
    } else {
      e.is_steep = false;
      e.derivative_limit = std::fabs(detail::base_cgf_derivative(p, v));
    }
    // The one-sided limit of the cgf at the cut is the finite analytic value
    // while the truncated cgf is +inf there.
    e.lower_semicontinuous = false;
    return e;
  };

  const bool lower_is_cut = spec.truncation_bites() && spec.truncation() &&
                            spec.truncation()->side == TruncationSide::Lower;
  const bool upper_is_cut = spec.truncation_bites() && spec.truncation() &&
                            spec.truncation()->side == TruncationSide::Upper;

  report.endpoints.push_back(classify(dom.lo, /*from_left=*/false, lower_is_cut));
  report.endpoints.push_back(classify(dom.hi, /*from_left=*/true, upper_is_cut));

  report.essentially_smooth = true;
  for (const auto& e : report.endpoints)
    report.essentially_smooth = report.essentially_smooth && e.is_steep;
  return report;
}

}  // namespace hestonld
