#pragma once

// Test-side oracles, written independently of the library so they can catch
// sign and algebra errors in the implementation: the closed form is spelled
// out again from scratch and the conjugate is a brute-force grid supremum.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "hestonld/params.hpp"

namespace oracle {

inline double quadratic(const hestonld::HestonParams& p, double u) {
  const double lin = u * p.rho * p.sigma - p.kappa;
  return lin * lin - p.sigma * p.sigma * (u * u - u);
}

inline std::pair<double, double> endpoints(const hestonld::HestonParams& p) {
  const double ks = p.kappa / p.sigma;
  const double root = std::sqrt((ks - p.rho) * ks + 0.25);
  const double mid = 0.5 - p.rho * ks;
  const double denom = 1.0 - p.rho * p.rho;
  return {(mid - root) / denom, (mid + root) / denom};
}

inline double limiting_cgf(const hestonld::HestonParams& p, double u) {
  const double q = std::max(quadratic(p, u), 0.0);
  return -(p.theta * p.kappa / (p.sigma * p.sigma)) *
         (u * p.rho * p.sigma - p.kappa + std::sqrt(q));
}

// sup over a dense u grid of u*x - cgf(u). n = 1e6 keeps the grid error
// around 1e-10 for the reference parameters, far below the 1e-6 oracle
// tolerance used in the tests.
inline double grid_conjugate(const hestonld::HestonParams& p, double x, int n = 1000000) {
  const auto [um, up] = endpoints(p);
  double best = -1e300;
  for (int k = 0; k <= n; ++k) {
    const double u = um + (up - um) * static_cast<double>(k) / n;
    best = std::max(best, u * x - limiting_cgf(p, u));
  }
  return best;
}

inline double central_difference(double (*f)(const hestonld::HestonParams&, double),
                                 const hestonld::HestonParams& p, double u, double h) {
  return (f(p, u + h) - f(p, u - h)) / (2.0 * h);
}

// Valid parameter sets spanning moderate desk ranges; rejection keeps the
// standing assumption with a margin.
inline hestonld::HestonParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    hestonld::HestonParams p;
    p.kappa = 0.3 + 4.7 * u01(gen);
    p.theta = 0.01 + 0.49 * u01(gen);
    p.sigma = 0.1 + 1.9 * u01(gen);
    p.rho = -0.9 + 1.8 * u01(gen);
    p.y0 = 0.01 + 0.49 * u01(gen);
    p.x0 = -1.0 + 2.0 * u01(gen);
    if (p.rho * p.sigma - p.kappa < -1e-3) return p;
  }
}

}  // namespace oracle
