#pragma once

#include <cmath>
#include <string>

#include "hestonld/cgf.hpp"
#include "hestonld/errors.hpp"
#include "hestonld/legendre.hpp"

namespace hestonld {

enum class LimitKind { PutTail, CallTail, MidTail };

// Almost-sure growth rate of the log-spot under the pricing measure; also
// the location of the rate function's minimum (cgf'(0) = -theta/2).
inline double pricing_growth_rate(const HestonParams& p) { return -0.5 * p.theta; }

// Growth rate under the share measure: cgf'(1), equal to half the long-run
// variance level theta*kappa/(kappa - rho*sigma) of the tilted dynamics.
inline double share_growth_rate(const HestonParams& p) {
  return 0.5 * p.theta * p.kappa / (p.kappa - p.rho * p.sigma);
}

struct LimitQuery {
  LimitKind kind = LimitKind::PutTail;
  double x = 0.0;
};

// Formula value without the range check; used by the CLI --force path.
inline double limit_formula(LimitKind kind, const HestonParams& p, double x) {
  const double rate = conjugate(CgfSpec::base(p), x).value;
  return kind == LimitKind::PutTail ? -rate : x - rate;
}

// Scaled log-probability limit of the left tail under the pricing measure
// with an added unit-mean exponential; valid for x <= pricing growth rate.
inline double limit_put_tail(const HestonParams& p, double x) {
  const double bound = pricing_growth_rate(validate(p));
  if (!(x <= bound))
    throw OutOfTheoremRange("put tail limit requires x <= " + std::to_string(bound));
  return limit_formula(LimitKind::PutTail, p, x);
}

// Right tail under the share measure with a subtracted exponential; valid
// for x >= share growth rate.
inline double limit_call_tail(const HestonParams& p, double x) {
  const double bound = share_growth_rate(validate(p));
  if (!(x >= bound))
    throw OutOfTheoremRange("call tail limit requires x >= " + std::to_string(bound));
  return limit_formula(LimitKind::CallTail, p, x);
}

// Left event under the share measure with a subtracted exponential; valid
// between the two growth rates.
inline double limit_mid_tail(const HestonParams& p, double x) {
  const double lo = pricing_growth_rate(validate(p));
  const double hi = share_growth_rate(p);
  if (!(x >= lo && x <= hi))
    throw OutOfTheoremRange("mid tail limit requires x in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  return limit_formula(LimitKind::MidTail, p, x);
}

struct LdpGateResult {
  bool admissible = false;
  std::string reason;
  double failing_endpoint = std::numeric_limits<double>::quiet_NaN();
};

// Gate for "verify via the exponential-decay principle": the limiting cgf
// must be essentially smooth and lower semicontinuous. A biting truncation
// fails steepness (or semicontinuity when the cut sits exactly on an
// analytic endpoint); a truncation outside the closed analytic domain
// leaves both intact.
inline LdpGateResult ldp_gate(const CgfSpec& spec) {
  const SmoothnessReport report = smoothness_report(spec);
  for (const auto& e : report.endpoints) {
    if (!e.is_steep) {
      return {false, "not steep at endpoint " + std::to_string(e.location), e.location};
    }
    if (!e.lower_semicontinuous) {
      return {false, "not lower semicontinuous at endpoint " + std::to_string(e.location),
              e.location};
    }
  }
  return {true, "essentially smooth and lower semicontinuous",
          std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace hestonld
