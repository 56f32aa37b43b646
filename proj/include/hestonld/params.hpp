#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "hestonld/errors.hpp"

namespace hestonld {

// Model constants. kappa: mean-reversion rate of the variance; theta:
// long-run variance level; sigma: vol-of-vol; rho: Brownian correlation;
// y0: initial variance; x0: initial log-spot.
struct HestonParams {
  double kappa = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double y0 = 0.0;
  double x0 = 0.0;

  friend bool operator==(const HestonParams&, const HestonParams&) = default;
};

// Checks positivity, rho in (-1,1) and the standing assumption
// rho*sigma - kappa < 0; returns the value unchanged when it passes.
inline HestonParams validate(const HestonParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw NonPositiveParameter(std::string(name) + " must be strictly positive");
  };
  positive(p.kappa, "kappa");
  positive(p.theta, "theta");
  positive(p.sigma, "sigma");
  positive(p.y0, "y0");
  if (!std::isfinite(p.x0)) throw NonPositiveParameter("x0 must be finite");
  if (!(p.rho > -1.0 && p.rho < 1.0) || !std::isfinite(p.rho))
    throw CorrelationOutOfRange("rho must lie strictly inside (-1,1)");
  if (!(p.rho * p.sigma - p.kappa < 0.0))
    throw StandingAssumptionViolated("rho*sigma - kappa must be negative");
  return p;
}

// Reads {kappa, theta, sigma, rho, y0, x0}; all six keys required, all
// numbers, unknown keys rejected. The result is validated.
inline HestonParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("params: expected a JSON object");
  static const char* keys[] = {"kappa", "theta", "sigma", "rho", "y0", "x0"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || (item.key() == k);
    if (!known) throw ConfigError("params: unknown key '" + item.key() + "'");
  }
  HestonParams p;
  auto get = [&](const char* k) {
    if (!j.contains(k)) throw ConfigError(std::string("params: missing key '") + k + "'");
    if (!j.at(k).is_number()) throw ConfigError(std::string("params: key '") + k + "' must be a number");
    return j.at(k).get<double>();
  };
  p.kappa = get("kappa");
  p.theta = get("theta");
  p.sigma = get("sigma");
  p.rho = get("rho");
  p.y0 = get("y0");
  p.x0 = get("x0");
  return validate(p);
}

}  // namespace hestonld
