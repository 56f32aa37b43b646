#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "hestonld/asymptotics.hpp"
#include "hestonld/cgf.hpp"
#include "hestonld/errors.hpp"
#include "hestonld/params.hpp"
#include "hestonld/rng.hpp"

namespace hestonld {

enum class Measure { Pricing, Share };
enum class Scheme { FullTruncationEuler, ExactVarianceEulerLog };
enum class Direction { Below, Above };

enum class PerturbationKind { None, PlusExp, MinusExp };

struct Perturbation {
  PerturbationKind kind = PerturbationKind::None;
  double lambda = 1.0;

  static Perturbation none() { return {PerturbationKind::None, 1.0}; }
  static Perturbation plus_exp(double lambda) { return {PerturbationKind::PlusExp, lambda}; }
  static Perturbation minus_exp(double lambda) { return {PerturbationKind::MinusExp, lambda}; }
};

struct McConfig {
  double horizon = 1.0;           // t
  std::size_t n_paths = 100000;   // >= 1000
  std::size_t n_steps = 20;       // >= 1, dt = horizon/n_steps <= 0.1
  Scheme scheme = Scheme::FullTruncationEuler;
  std::uint64_t seed = 0;
  Measure measure = Measure::Pricing;
  std::uint64_t max_path_steps = 1'000'000'000;  // n_paths * n_steps budget
  unsigned threads = 0;                          // 0 = hardware; never affects results
};

inline void validate_config(const McConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw Error("mc config: horizon must be positive");
  if (cfg.n_paths < 1000) throw Error("mc config: n_paths must be at least 1000");
  if (cfg.n_steps < 1) throw Error("mc config: n_steps must be at least 1");
  if (cfg.horizon / static_cast<double>(cfg.n_steps) > 0.1 + 1e-12)
    throw Error("mc config: dt = horizon/n_steps must be <= 0.1");
  const auto total = static_cast<unsigned long long>(cfg.n_paths) * cfg.n_steps;
  if (total > cfg.max_path_steps)
    throw BudgetExceeded("mc config: n_paths*n_steps = " + std::to_string(total) +
                         " exceeds budget " + std::to_string(cfg.max_path_steps));
}

struct TerminalSample {
  std::vector<double> log_spot;  // X_t, includes x0
  std::vector<double> variance;  // Y_t
  double horizon = 0.0;
};

namespace detail {

// Exact CIR transition via the noncentral chi-squared decomposition
// Y' = c * chi2'(d, nc). Draw counts vary per step, which is safe because
// every path owns its stream.
inline double gamma_variate(RandomStream& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_open_unit();
    return gamma_variate(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    const double z = rng.next_normal();
    const double w = 1.0 + c * z;
    if (w <= 0.0) continue;
    const double v = w * w * w;
    const double u = rng.next_open_unit();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline std::uint64_t poisson_variate(RandomStream& rng, double mean) {
  std::uint64_t n = 0;
  // Split large means so the Knuth product never underflows.
  while (mean > 30.0) {
    const double chunk = 30.0;
    const double limit = std::exp(-chunk);
    std::uint64_t k = 0;
    double prod = rng.next_open_unit();
    while (prod > limit) {
      ++k;
      prod *= rng.next_open_unit();
    }
    n += k;
    mean -= chunk;
  }
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = rng.next_open_unit();
  while (prod > limit) {
    ++k;
    prod *= rng.next_open_unit();
  }
  return n + k;
}

inline double noncentral_chisq_variate(RandomStream& rng, double dof, double noncentrality) {
  const auto extra = poisson_variate(rng, 0.5 * noncentrality);
  const double shape = 0.5 * dof + static_cast<double>(extra);
  if (shape == 0.0) return 0.0;
  return 2.0 * gamma_variate(rng, shape);
}

struct EffectiveDynamics {
  double kappa_eff;   // variance mean-reversion rate under the measure
  double drift_sign;  // -1/2 or +1/2 times Y in the log-spot drift
};

inline EffectiveDynamics effective_dynamics(const HestonParams& p, Measure m) {
  if (m == Measure::Pricing) return {p.kappa, -0.5};
  // Share measure: dY = (kappa*theta - (kappa - rho*sigma) Y) dt + ...,
  // dX = +Y/2 dt + ...
  return {p.kappa - p.rho * p.sigma, +0.5};
}

inline void simulate_block(const HestonParams& p, const McConfig& cfg, std::size_t begin,
                           std::size_t end, std::vector<double>& xs, std::vector<double>& ys) {
  const double dt = cfg.horizon / static_cast<double>(cfg.n_steps);
  const double sqrt_dt = std::sqrt(dt);
  const auto dyn = effective_dynamics(p, cfg.measure);
  const double mean_flow = p.kappa * p.theta;  // kappa*theta under both measures
  const double rho = p.rho;
  const double rho_comp = std::sqrt(1.0 - rho * rho);

  if (cfg.scheme == Scheme::FullTruncationEuler) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng(cfg.seed, StreamPurpose::PathNoise, i);
      double x = p.x0;
      double y = p.y0;
      for (std::size_t k = 0; k < cfg.n_steps; ++k) {
        const double yp = y > 0.0 ? y : 0.0;
        auto [z_var, z_perp] = rng.next_normal_pair();
        const double z_spot = rho * z_var + rho_comp * z_perp;
        const double vol = std::sqrt(yp * dt);
        x += dyn.drift_sign * yp * dt + vol * z_spot;
        y += (mean_flow - dyn.kappa_eff * yp) * dt + p.sigma * std::sqrt(yp) * sqrt_dt * z_var;
      }
      xs[i] = x;
      ys[i] = y > 0.0 ? y : 0.0;
    }
    return;
  }

  // ExactVarianceEulerLog: exact CIR variance transitions plus a log-spot
  // Euler step that recovers the variance Brownian increment from the
  // sampled transition and uses trapezoidal integrated variance.
  const double ex = std::exp(-dyn.kappa_eff * dt);
  const double c = p.sigma * p.sigma * (1.0 - ex) / (4.0 * dyn.kappa_eff);
  const double dof = 4.0 * mean_flow / (p.sigma * p.sigma);
  for (std::size_t i = begin; i < end; ++i) {
    RandomStream rng(cfg.seed, StreamPurpose::PathNoise, i);
    double x = p.x0;
    double y = p.y0;
    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
      const double nc = y * ex / c;
      const double y_next = c * noncentral_chisq_variate(rng, dof, nc);
      const double int_var = 0.5 * (y + y_next) * dt;
      const double w_var = (y_next - y - mean_flow * dt + dyn.kappa_eff * int_var) / p.sigma;
      const double z = rng.next_normal();
      x += dyn.drift_sign * int_var + rho * w_var + std::sqrt((1.0 - rho * rho) * int_var) * z;
      y = y_next;
    }
    xs[i] = x;
    ys[i] = y;
  }
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end) over [0, n) split across threads. Work is assigned by
// index only, so the result is identical for any thread count.
template <typename Fn>
inline void parallel_for_paths(std::size_t n, unsigned threads, Fn&& fn) {
  const unsigned t = std::min<std::size_t>(resolve_threads(threads), n == 0 ? 1 : n);
  if (t <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (unsigned i = 0; i < t; ++i) {
    const std::size_t begin = std::min(n, static_cast<std::size_t>(i) * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Terminal (X_t, Y_t) sample under the configured measure. Deterministic
// given (seed, n_paths, n_steps, scheme, measure): every path derives its
// own counter-based stream from (seed, path index).
inline TerminalSample simulate_terminal(const HestonParams& params, const McConfig& cfg) {
  const HestonParams p = validate(params);
  validate_config(cfg);
  TerminalSample out;
  out.horizon = cfg.horizon;
  out.log_spot.resize(cfg.n_paths);
  out.variance.resize(cfg.n_paths);
  detail::parallel_for_paths(cfg.n_paths, cfg.threads, [&](std::size_t b, std::size_t e) {
    detail::simulate_block(p, cfg, b, e, out.log_spot, out.variance);
  });
  return out;
}

// One standard-exponential draw per path, from a stream independent of the
// path noise so that perturbed and unperturbed estimates share X-paths.
inline std::vector<double> std_exponential_draws(std::uint64_t seed, std::size_t n_paths,
                                                 unsigned threads = 0) {
  std::vector<double> e(n_paths);
  detail::parallel_for_paths(n_paths, threads, [&](std::size_t b, std::size_t end) {
    for (std::size_t i = b; i < end; ++i) {
      RandomStream rng(seed, StreamPurpose::Exponential, i);
      e[i] = rng.next_std_exponential();
    }
  });
  return e;
}

struct TailEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  double scaled_log = 0.0;          // log(p_hat)/t; -inf sentinel when no hits
  double ci_lo = 0.0;               // delta-method CI on scaled_log
  double ci_hi = 0.0;
  std::size_t n_hits = 0;
  bool no_hits = false;
};

namespace detail {

inline TailEstimate tail_from_hits(std::size_t hits, std::size_t n, double t) {
  TailEstimate est;
  est.n_hits = hits;
  const double nn = static_cast<double>(n);
  est.p_hat = static_cast<double>(hits) / nn;
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / nn);
  if (hits == 0) {
    est.no_hits = true;
    est.scaled_log = -std::numeric_limits<double>::infinity();
    est.ci_lo = est.ci_hi = est.scaled_log;
    return est;
  }
  est.scaled_log = std::log(est.p_hat) / t;
  const double log_sd = est.std_err / est.p_hat;  // delta method on log p
  est.ci_lo = est.scaled_log - 1.96 * log_sd / t;
  est.ci_hi = est.scaled_log + 1.96 * log_sd / t;
  return est;
}

inline bool tail_event(double growth, double e_scaled, double x, double t, Direction dir) {
  const double v = growth + e_scaled;
  return dir == Direction::Below ? v < x * t : v > x * t;
}

}  // namespace detail

// P[X_t - x0 +- E < x t] (or >) with one independent Exp(lambda) variate per
// path. p_hat = 0 is reported through the no_hits flag, not an exception.
inline TailEstimate estimate_tail(const HestonParams& params, const McConfig& cfg, double x,
                                  const Perturbation& pert, Direction dir) {
  if (pert.kind != PerturbationKind::None && !(pert.lambda > 0.0))
    throw NonPositiveParameter("perturbation rate lambda must be strictly positive");
  const TerminalSample sample = simulate_terminal(params, cfg);
  std::vector<double> e;
  double sign = 0.0;
  if (pert.kind != PerturbationKind::None) {
    e = std_exponential_draws(cfg.seed, cfg.n_paths, cfg.threads);
    sign = pert.kind == PerturbationKind::PlusExp ? 1.0 : -1.0;
  }
  std::size_t hits = 0;
  const double x0 = params.x0;
  for (std::size_t i = 0; i < cfg.n_paths; ++i) {
    const double shift = sign == 0.0 ? 0.0 : sign * e[i] / pert.lambda;
    if (detail::tail_event(sample.log_spot[i] - x0, shift, x, cfg.horizon, dir)) ++hits;
  }
  return detail::tail_from_hits(hits, cfg.n_paths, cfg.horizon);
}

// (1/t) log mean exp(u (X_t - x0)), guarded by a max-shift. u must stay
// away from the domain endpoints by a tenth of the domain width; closer in,
// finite-horizon moment explosion makes the estimator useless.
inline double estimate_scaled_cgf(const HestonParams& params, const McConfig& cfg, double u) {
  const auto [um, up] = domain_endpoints(validate(params));
  const double margin = 0.1 * (up - um);
  if (!(u > um + margin && u < up - margin))
    throw OutsideDomainInterior("estimate_scaled_cgf: u must stay 0.1*(u_plus-u_minus) away "
                                "from the domain endpoints");
  const TerminalSample sample = simulate_terminal(params, cfg);
  double max_a = -std::numeric_limits<double>::infinity();
  for (double xv : sample.log_spot) max_a = std::max(max_a, u * (xv - params.x0));
  double acc = 0.0;
  for (double xv : sample.log_spot) acc += std::exp(u * (xv - params.x0) - max_a);
  const double log_mean = max_a + std::log(acc / static_cast<double>(cfg.n_paths));
  return log_mean / cfg.horizon;
}

struct OrderingGap {
  double diff = 0.0;  // probability difference
  double std_err = 0.0;
};

struct OrderingReport {
  double lambda_small = 0.0;  // lambda1 < lambda2
  double lambda_large = 0.0;
  double p_small_rate = 0.0;  // P[... + E_{lambda1} < xt]; biggest exponential
  double p_large_rate = 0.0;  // P[... + E_{lambda2} < xt]
  double p_unperturbed = 0.0;
  bool coupled = true;
  OrderingGap gap_large_minus_small;   // p_large_rate - p_small_rate
  OrderingGap gap_none_minus_large;    // p_unperturbed - p_large_rate
  bool ordering_holds = false;         // within 1.96 se (exactly, when coupled)
};

// Checks p(E_{l1}) <= p(E_{l2}) <= p(none) on common X-paths for the Below
// event: a larger rate gives a stochastically smaller exponential, and
// adding any positive variable shrinks the event. With coupling the
// exponentials are E_{l2} = (l1/l2) E_{l1}, making the ordering path-wise.
inline OrderingReport ordering_check(const HestonParams& params, const McConfig& cfg, double x,
                                     double lambda1, double lambda2, bool coupled = true) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw NonPositiveParameter("ordering_check: lambdas must be strictly positive");
  if (!(lambda1 <= lambda2)) throw Error("ordering_check: requires lambda1 <= lambda2");
  const TerminalSample sample = simulate_terminal(params, cfg);
  const std::size_t n = cfg.n_paths;
  const double t = cfg.horizon;

  std::size_t hits1 = 0, hits2 = 0, hits0 = 0;
  std::size_t joint12 = 0, joint20 = 0;
  RandomStream extra(cfg.seed, StreamPurpose::Auxiliary, 0);  // shared is fine: sequential
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream exp_rng(cfg.seed, StreamPurpose::Exponential, i);
    const double e_std = exp_rng.next_std_exponential();
    const double e1 = e_std / lambda1;
    const double e2 = coupled ? e_std / lambda2 : exp_rng.next_std_exponential() / lambda2;
    const double g = sample.log_spot[i] - params.x0;
    const bool a1 = g + e1 < x * t;
    const bool a2 = g + e2 < x * t;
    const bool a0 = g < x * t;
    hits1 += a1;
    hits2 += a2;
    hits0 += a0;
    joint12 += (a2 && !a1);
    joint20 += (a0 && !a2);
  }
  (void)extra;

  auto diff_gap = [&](std::size_t plus, std::size_t minus, std::size_t joint_plus_only) {
    // Var of a difference of indicators on the same paths; with coupling the
    // difference is itself an indicator.
    OrderingGap gap;
    const double nn = static_cast<double>(n);
    gap.diff = (static_cast<double>(plus) - static_cast<double>(minus)) / nn;
    if (coupled) {
      const double q = static_cast<double>(joint_plus_only) / nn;
      gap.std_err = std::sqrt(q * (1.0 - q) / nn);
    } else {
      const double pp = static_cast<double>(plus) / nn;
      const double pm = static_cast<double>(minus) / nn;
      gap.std_err = std::sqrt((pp * (1.0 - pp) + pm * (1.0 - pm)) / nn);
    }
    return gap;
  };

  OrderingReport report;
  report.lambda_small = lambda1;
  report.lambda_large = lambda2;
  report.coupled = coupled;
  const double nn = static_cast<double>(n);
  report.p_small_rate = static_cast<double>(hits1) / nn;
  report.p_large_rate = static_cast<double>(hits2) / nn;
  report.p_unperturbed = static_cast<double>(hits0) / nn;
  report.gap_large_minus_small = diff_gap(hits2, hits1, joint12);
  report.gap_none_minus_large = diff_gap(hits0, hits2, joint20);
  report.ordering_holds =
      report.gap_large_minus_small.diff >= -1.96 * report.gap_large_minus_small.std_err &&
      report.gap_none_minus_large.diff >= -1.96 * report.gap_none_minus_large.std_err;
  return report;
}

// Exponential CDF P[E_lambda < alpha]; the analytic side of the ordering.
inline double exponential_cdf(double lambda, double alpha) {
  return alpha > 0.0 ? 1.0 - std::exp(-lambda * alpha) : 0.0;
}

struct PutRepresentationReport {
  double strike = 0.0;
  double direct_estimate = 0.0;      // mean (K - S_t)^+
  double direct_std_err = 0.0;
  double probability_estimate = 0.0; // K * P[log K > X_t + E_1]
  double probability_std_err = 0.0;
  double diff = 0.0;                 // direct - probability
  double diff_std_err = 0.0;         // from the path-wise differences
  bool agrees = false;               // |diff| <= 3 diff_std_err
};

// Compares the direct put payoff estimate with the single-probability
// representation K * P[log K > X_t + E_1] on the same X-paths with
// independent unit-mean exponentials. The two estimators share conditional
// means path by path, so the difference is pure exponential noise.
inline PutRepresentationReport put_representation_check(const HestonParams& params,
                                                        const McConfig& cfg, double strike) {
  if (!(strike > 0.0)) throw NonPositiveParameter("strike must be strictly positive");
  const TerminalSample sample = simulate_terminal(params, cfg);
  const std::vector<double> e = std_exponential_draws(cfg.seed, cfg.n_paths, cfg.threads);
  const double log_k = std::log(strike);
  const std::size_t n = cfg.n_paths;

  double sum_a = 0.0, sum_a2 = 0.0, sum_b = 0.0, sum_b2 = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double payoff = std::max(strike - std::exp(sample.log_spot[i]), 0.0);
    const double indicator = (sample.log_spot[i] + e[i] < log_k) ? strike : 0.0;
    const double d = payoff - indicator;
    sum_a += payoff;
    sum_a2 += payoff * payoff;
    sum_b += indicator;
    sum_b2 += indicator * indicator;
    sum_d += d;
    sum_d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  auto se = [nn](double s, double s2) {
    const double mean = s / nn;
    const double var = std::max(s2 / nn - mean * mean, 0.0);
    return std::sqrt(var / nn);
  };
  PutRepresentationReport report;
  report.strike = strike;
  report.direct_estimate = sum_a / nn;
  report.direct_std_err = se(sum_a, sum_a2);
  report.probability_estimate = sum_b / nn;
  report.probability_std_err = se(sum_b, sum_b2);
  report.diff = sum_d / nn;
  report.diff_std_err = se(sum_d, sum_d2);
  report.agrees = std::fabs(report.diff) <= 3.0 * std::max(report.diff_std_err, 1e-300);
  return report;
}

struct ConvergenceRow {
  double t = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;
  double scaled_log = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double theoretical_limit = 0.0;
  double gap = 0.0;    // |scaled_log - theoretical_limit|; NaN for no-hit rows
  bool no_hits = false;
};

// Maps (measure, perturbation, direction) onto the matching limit
// statement; combinations outside the three statements have no limit.
inline std::optional<LimitKind> matching_limit_kind(Measure m, const Perturbation& pert,
                                                    Direction dir) {
  if (m == Measure::Pricing && pert.kind == PerturbationKind::PlusExp && dir == Direction::Below)
    return LimitKind::PutTail;
  if (m == Measure::Share && pert.kind == PerturbationKind::MinusExp && dir == Direction::Above)
    return LimitKind::CallTail;
  if (m == Measure::Share && pert.kind == PerturbationKind::MinusExp && dir == Direction::Below)
    return LimitKind::MidTail;
  return std::nullopt;
}

inline bool limit_in_range(LimitKind kind, const HestonParams& p, double x) {
  switch (kind) {
    case LimitKind::PutTail: return x <= pricing_growth_rate(p);
    case LimitKind::CallTail: return x >= share_growth_rate(p);
    case LimitKind::MidTail:
      return x >= pricing_growth_rate(p) && x <= share_growth_rate(p);
  }
  return false;
}

// Tail estimates over a horizon grid with n_paths held fixed;
// steps_per_unit_time sets n_steps per row. The theoretical limit column
// comes from the limit statement matching the configuration; out-of-range x
// requires force.
inline std::vector<ConvergenceRow> convergence_study(const HestonParams& params, McConfig cfg,
                                                     double x, const Perturbation& pert,
                                                     Direction dir,
                                                     const std::vector<double>& t_grid,
                                                     double steps_per_unit_time,
                                                     bool force = false) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error("convergence_study: t grid must increase");
  const auto kind = matching_limit_kind(cfg.measure, pert, dir);
  if (!kind) throw ConfigError("configuration matches none of the limit statements");
  if (!limit_in_range(*kind, params, x) && !force)
    throw OutOfTheoremRange("x outside the proven range for this limit (use force to compute)");
  const double limit = limit_formula(*kind, params, x);

  std::vector<ConvergenceRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    cfg.horizon = t;
    cfg.n_steps = static_cast<std::size_t>(std::llround(t * steps_per_unit_time));
    const TailEstimate est = estimate_tail(params, cfg, x, pert, dir);
    ConvergenceRow row;
    row.t = t;
    row.p_hat = est.p_hat;
    row.std_err = est.std_err;
    row.scaled_log = est.scaled_log;
    row.ci_lo = est.ci_lo;
    row.ci_hi = est.ci_hi;
    row.theoretical_limit = limit;
    row.no_hits = est.no_hits;
    row.gap = est.no_hits ? std::numeric_limits<double>::quiet_NaN()
                          : std::fabs(est.scaled_log - limit);
    rows.push_back(row);
  }
  return rows;
}

struct ShareConsistencyReport {
  double p_direct = 0.0;    // share-measure simulation of the event
  double direct_std_err = 0.0;
  double p_weighted = 0.0;  // pricing-measure estimate weighted by exp(X_t - x0)
  double weighted_std_err = 0.0;
  double diff = 0.0;
  double joint_std_err = 0.0;
  bool agrees = false;      // |diff| <= 3 joint se
};

// Cross-checks the tilted simulator against the density weighting it was
// derived from, on the event {X_t - x0 < x t}. The two runs use different
// seeds so the estimates are independent.
inline ShareConsistencyReport share_consistency_check(const HestonParams& params, McConfig cfg,
                                                      double x) {
  const double t = cfg.horizon;
  cfg.measure = Measure::Share;
  const TerminalSample share = simulate_terminal(params, cfg);
  McConfig pricing_cfg = cfg;
  pricing_cfg.measure = Measure::Pricing;
  pricing_cfg.seed = cfg.seed + 1;
  const TerminalSample pricing = simulate_terminal(params, pricing_cfg);

  const double nn = static_cast<double>(cfg.n_paths);
  std::size_t hits = 0;
  for (double xv : share.log_spot) hits += (xv - params.x0 < x * t);
  double sum_w = 0.0, sum_w2 = 0.0;
  for (double xv : pricing.log_spot) {
    const double w = (xv - params.x0 < x * t) ? std::exp(xv - params.x0) : 0.0;
    sum_w += w;
    sum_w2 += w * w;
  }
  ShareConsistencyReport report;
  report.p_direct = static_cast<double>(hits) / nn;
  report.direct_std_err = std::sqrt(report.p_direct * (1.0 - report.p_direct) / nn);
  report.p_weighted = sum_w / nn;
  const double wvar = std::max(sum_w2 / nn - report.p_weighted * report.p_weighted, 0.0);
  report.weighted_std_err = std::sqrt(wvar / nn);
  report.diff = report.p_direct - report.p_weighted;
  report.joint_std_err = std::sqrt(report.direct_std_err * report.direct_std_err +
                                   report.weighted_std_err * report.weighted_std_err);
  report.agrees = std::fabs(report.diff) <= 3.0 * report.joint_std_err;
  return report;
}

}  // namespace hestonld
