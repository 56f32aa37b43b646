#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hestonld/asymptotics.hpp"
#include "hestonld/cgf.hpp"
#include "hestonld/errors.hpp"
#include "hestonld/format.hpp"
#include "hestonld/legendre.hpp"
#include "hestonld/montecarlo.hpp"
#include "hestonld/params.hpp"

namespace hestonld {

enum class OutputFormat { Csv, Json };

// Exit codes shared by every subcommand: 0 success, 1 verification failure,
// 2 usage/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
  HestonParams params{2.0, 0.1, 1.0, 0.0, 0.1, 0.0};  // reference parameters
  std::uint64_t seed = 12345;
  bool force = false;
  OutputFormat format = OutputFormat::Json;
  unsigned threads = 0;  // execution detail; never echoed into outputs
};

struct CmdResult {
  int exit_code = kExitOk;
  std::string human;    // stdout summary
  std::string payload;  // machine output (written to --out when given)
};

namespace detail {

inline void echo_params(JsonWriter& w, const HestonParams& p) {
  w.key("params").begin_object();
  w.key("kappa").value(p.kappa);
  w.key("theta").value(p.theta);
  w.key("sigma").value(p.sigma);
  w.key("rho").value(p.rho);
  w.key("y0").value(p.y0);
  w.key("x0").value(p.x0);
  w.end_object();
}

inline std::string config_echo(const RunConfig& cfg, const std::string& command,
                               const std::vector<std::pair<std::string, std::string>>& extras) {
  JsonWriter w;
  w.begin_object();
  w.key("command").value(command);
  echo_params(w, cfg.params);
  w.key("seed").value(cfg.seed);
  w.key("force").value(cfg.force);
  for (const auto& [k, v] : extras) w.key(k).raw(v);
  w.end_object();
  return w.str();
}

inline std::string fmt7(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7f", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// domain

struct DomainFamilyReport {
  std::string name;
  SmoothnessReport smoothness;
  LdpGateResult gate;
};

inline std::vector<DomainFamilyReport> domain_family_reports(const HestonParams& p) {
  const CgfSpec base_spec = CgfSpec::base(p);
  const CgfSpec share_spec = tilt(base_spec, 1.0);
  std::vector<DomainFamilyReport> out;
  auto add = [&](const std::string& name, const CgfSpec& s) {
    out.push_back({name, smoothness_report(s), ldp_gate(s)});
  };
  add("base", base_spec);
  add("tilt_1", share_spec);
  add("perturb_upper_1", perturb(base_spec, 1.0, TruncationSide::Upper));
  add("tilt_1_perturb_lower_1", perturb(share_spec, 1.0, TruncationSide::Lower));
  return out;
}

inline CmdResult cmd_domain(const RunConfig& cfg) {
  CmdResult result;
  const HestonParams p = validate(cfg.params);
  const auto [um, up] = domain_endpoints(p);
  const double d0 = pricing_growth_rate(p);
  const double d1 = share_growth_rate(p);
  const auto families = domain_family_reports(p);

  std::string human;
  human += "u_minus           = " + detail::fmt7(um) + "\n";
  human += "u_plus            = " + detail::fmt7(up) + "\n";
  human += "derivative_at_0   = " + detail::fmt7(d0) + "\n";
  human += "derivative_at_1   = " + detail::fmt7(d1) + "\n";
  for (const auto& fam : families) {
    human += fam.name + ": essentially_smooth=" +
             (fam.smoothness.essentially_smooth ? "true" : "false") +
             " ldp_admissible=" + (fam.gate.admissible ? "true" : "false") + "\n";
    for (const auto& e : fam.smoothness.endpoints) {
      human += "  endpoint " + csv_number(e.location) +
               ": steep=" + (e.is_steep ? "true" : "false") + " derivative_limit=" +
               (e.derivative_limit.is_finite() ? csv_number(e.derivative_limit.value()) : "inf") +
               " lower_semicontinuous=" + (e.lower_semicontinuous ? "true" : "false") + "\n";
    }
  }
  result.human = human;

  const std::string config = detail::config_echo(cfg, "domain", {});
  if (cfg.format == OutputFormat::Json) {
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(config);
    w.key("u_minus").value(um);
    w.key("u_plus").value(up);
    w.key("derivative_at_zero").value(d0);
    w.key("derivative_at_one").value(d1);
    w.key("families").begin_array();
    for (const auto& fam : families) {
      w.begin_object();
      w.key("name").value(fam.name);
      w.key("essentially_smooth").value(fam.smoothness.essentially_smooth);
      w.key("ldp_admissible").value(fam.gate.admissible);
      w.key("ldp_reason").value(fam.gate.reason);
      w.key("divergence_threshold").value(fam.smoothness.divergence_threshold);
      w.key("endpoints").begin_array();
      for (const auto& e : fam.smoothness.endpoints) {
        w.begin_object();
        w.key("endpoint").value(e.location);
        w.key("is_steep").value(e.is_steep);
        w.key("derivative_limit").value(e.derivative_limit.value());
        w.key("lower_semicontinuous").value(e.lower_semicontinuous);
        w.end_object();
      }
      w.end_array();
      w.end_object();
    }
    w.end_array();
    w.end_object();
    result.payload = w.str() + "\n";
  } else {
    std::string csv = "# config " + config + "\n";
    csv += "family,endpoint,is_steep,derivative_limit,lower_semicontinuous,"
           "essentially_smooth,ldp_admissible\n";
    for (const auto& fam : families) {
      for (const auto& e : fam.smoothness.endpoints) {
        csv += csv_row({fam.name, csv_number(e.location), e.is_steep ? "true" : "false",
                        e.derivative_limit.is_finite() ? csv_number(e.derivative_limit.value())
                                                       : "inf",
                        e.lower_semicontinuous ? "true" : "false",
                        fam.smoothness.essentially_smooth ? "true" : "false",
                        fam.gate.admissible ? "true" : "false"});
      }
    }
    result.payload = csv;
  }
  return result;
}

// ---------------------------------------------------------------------------
// rate

struct RateRow {
  double x = 0.0;
  double rate = 0.0;
  double maximizer = 0.0;
  double tilted = 0.0;
  std::optional<double> put_tail;
  std::optional<double> mid_tail;
  std::optional<double> call_tail;
  std::string forced;  // semicolon-joined names of limits computed out of range
};

inline std::vector<RateRow> rate_rows(const HestonParams& p, const std::vector<double>& grid,
                                      bool force) {
  const CgfSpec base_spec = CgfSpec::base(p);
  const double lo = pricing_growth_rate(p);
  const double hi = share_growth_rate(p);
  std::vector<RateRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    RateRow row;
    row.x = x;
    const RatePoint rp = conjugate(base_spec, x);
    row.rate = rp.value;
    row.maximizer = rp.maximizer;
    row.tilted = tilted_rate(p, x);
    auto fill = [&](std::optional<double>& slot, LimitKind kind, bool in_range,
                    const char* name) {
      if (in_range) {
        slot = limit_formula(kind, p, x);
      } else if (force) {
        slot = limit_formula(kind, p, x);
        if (!row.forced.empty()) row.forced += ';';
        row.forced += name;
      }
    };
    fill(row.put_tail, LimitKind::PutTail, x <= lo, "put");
    fill(row.mid_tail, LimitKind::MidTail, x >= lo && x <= hi, "mid");
    fill(row.call_tail, LimitKind::CallTail, x >= hi, "call");
    rows.push_back(row);
  }
  return rows;
}

inline CmdResult cmd_rate(const RunConfig& cfg, const std::vector<double>& grid) {
  CmdResult result;
  if (grid.empty()) {
    result.exit_code = kExitConfig;
    result.human = "rate: empty x grid\n";
    return result;
  }
  for (double x : grid)
    if (!std::isfinite(x)) {
      result.exit_code = kExitConfig;
      result.human = "rate: grid values must be finite\n";
      return result;
    }
  const HestonParams p = validate(cfg.params);
  const auto rows = rate_rows(p, grid, cfg.force);

  JsonWriter extras;  // grid echo
  extras.begin_array();
  for (double x : grid) extras.value(x);
  extras.end_array();
  const std::string config =
      detail::config_echo(cfg, "rate", {{"x_grid", extras.str()}});

  auto opt_cell = [](const std::optional<double>& v) {
    return v ? csv_number(*v) : std::string();
  };
  std::string csv = "# config " + config + "\n";
  csv += "x,rate,maximizer,tilted_rate,limit_put_tail,limit_mid_tail,limit_call_tail,"
         "out_of_range\n";
  for (const auto& r : rows) {
    csv += csv_row({csv_number(r.x), csv_number(r.rate), csv_number(r.maximizer),
                    csv_number(r.tilted), opt_cell(r.put_tail), opt_cell(r.mid_tail),
                    opt_cell(r.call_tail), r.forced});
  }

  if (cfg.format == OutputFormat::Csv) {
    result.payload = csv;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(config);
    w.key("rows").begin_array();
    for (const auto& r : rows) {
      w.begin_object();
      w.key("x").value(r.x);
      w.key("rate").value(r.rate);
      w.key("maximizer").value(r.maximizer);
      w.key("tilted_rate").value(r.tilted);
      auto put = [&](const char* k, const std::optional<double>& v) {
        w.key(k);
        if (v) {
          w.value(*v);
        } else {
          w.raw("null");
        }
      };
      put("limit_put_tail", r.put_tail);
      put("limit_mid_tail", r.mid_tail);
      put("limit_call_tail", r.call_tail);
      w.key("out_of_range").value(r.forced);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    result.payload = w.str() + "\n";
  }
  result.human = "rate: " + std::to_string(rows.size()) + " rows\n";
  return result;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  double x = 0.0;
  Measure measure = Measure::Pricing;
  Perturbation perturbation = Perturbation::plus_exp(1.0);
  Direction direction = Direction::Below;
  std::vector<double> t_grid{25.0, 50.0, 100.0};
  std::size_t n_paths = 100000;
  double steps_per_unit_time = 20.0;
  double tolerance = 0.05;
};

inline CmdResult cmd_verify(const RunConfig& cfg, const VerifyOptions& opt) {
  CmdResult result;
  const HestonParams p = validate(cfg.params);

  const auto kind = matching_limit_kind(opt.measure, opt.perturbation, opt.direction);
  if (!kind) {
    result.exit_code = kExitConfig;
    result.human = "verify: configuration matches none of the limit statements "
                   "(measure/perturbation/direction)\n";
    return result;
  }
  if (!limit_in_range(*kind, p, opt.x) && !cfg.force) {
    result.exit_code = kExitConfig;
    result.human = "verify: x outside the proven range for this limit; pass --force to "
                   "compute anyway\n";
    return result;
  }

  McConfig mc;
  mc.n_paths = opt.n_paths;
  mc.seed = cfg.seed;
  mc.measure = opt.measure;
  mc.threads = cfg.threads;
  const auto rows = convergence_study(p, mc, opt.x, opt.perturbation, opt.direction, opt.t_grid,
                                      opt.steps_per_unit_time, cfg.force);

  const bool out_of_range = !limit_in_range(*kind, p, opt.x);
  const auto& final_row = rows.back();
  const bool pass = !final_row.no_hits && final_row.gap <= opt.tolerance && !out_of_range;

  JsonWriter grid_json;
  grid_json.begin_array();
  for (double t : opt.t_grid) grid_json.value(t);
  grid_json.end_array();
  auto q = [](const std::string& s) { return "\"" + s + "\""; };
  const std::string pert_str =
      opt.perturbation.kind == PerturbationKind::None
          ? "none"
          : (opt.perturbation.kind == PerturbationKind::PlusExp ? "+exp:" : "-exp:") +
                json_number(opt.perturbation.lambda);
  const std::string config = detail::config_echo(
      cfg, "verify",
      {{"x", json_number(opt.x)},
       {"measure", q(opt.measure == Measure::Pricing ? "pricing" : "share")},
       {"perturb", q(pert_str)},
       {"direction", q(opt.direction == Direction::Below ? "below" : "above")},
       {"t_grid", grid_json.str()},
       {"paths", std::to_string(opt.n_paths)},
       {"steps_per_unit_time", json_number(opt.steps_per_unit_time)},
       {"tol", json_number(opt.tolerance)}});

  std::string csv = "# config " + config + "\n";
  csv += "t,p_hat,std_err,scaled_log,ci_lo,ci_hi,theoretical_limit,gap\n";
  std::string human;
  for (const auto& r : rows) {
    csv += csv_row({csv_number(r.t), csv_number(r.p_hat), csv_number(r.std_err),
                    csv_number(r.scaled_log), csv_number(r.ci_lo), csv_number(r.ci_hi),
                    csv_number(r.theoretical_limit),
                    r.no_hits ? std::string() : csv_number(r.gap)});
    human += "t=" + csv_number(r.t) + " p_hat=" + csv_number(r.p_hat) +
             " scaled_log=" + csv_number(r.scaled_log) +
             " limit=" + csv_number(r.theoretical_limit) +
             " gap=" + (r.no_hits ? "n/a (no hits)" : csv_number(r.gap)) + "\n";
  }
  if (out_of_range) human += "note: x outside the proven range; limit computed by formula\n";
  if (final_row.no_hits) {
    human += "verdict: FAIL (no hits at final horizon; scaled log undefined)\n";
  } else {
    human += "verdict: " + std::string(pass ? "PASS" : "FAIL") + " (final gap " +
             csv_number(final_row.gap) + ", tol " + csv_number(opt.tolerance) + ")\n";
  }

  if (cfg.format == OutputFormat::Csv) {
    result.payload = csv;
  } else {
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(config);
    w.key("estimates").begin_array();
    for (const auto& r : rows) {
      w.begin_object();
      w.key("t").value(r.t);
      w.key("p_hat").value(r.p_hat);
      w.key("std_err").value(r.std_err);
      w.key("scaled_log").value(r.scaled_log);
      w.key("ci_lo").value(r.ci_lo);
      w.key("ci_hi").value(r.ci_hi);
      w.key("theoretical_limit").value(r.theoretical_limit);
      w.key("gap").value(r.no_hits ? std::numeric_limits<double>::quiet_NaN() : r.gap);
      w.key("no_hits").value(r.no_hits);
      w.end_object();
    }
    w.end_array();
    w.key("invariant_checks").begin_array();
    w.end_array();
    w.key("final_gap").value(final_row.no_hits ? std::numeric_limits<double>::quiet_NaN()
                                               : final_row.gap);
    w.key("pass").value(pass);
    w.end_object();
    result.payload = w.str() + "\n";
  }
  result.human = human;
  result.exit_code = pass ? kExitOk : kExitVerifyFailed;
  return result;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<SelftestItem> run_selftest(const HestonParams& params, std::uint64_t seed,
                                              unsigned threads = 0) {
  const HestonParams p = validate(params);
  std::vector<SelftestItem> items;
  auto push = [&](const std::string& name, bool pass, const std::string& detail) {
    items.push_back({name, pass, detail});
  };

  const CgfSpec base_spec = CgfSpec::base(p);
  const CgfSpec share_spec = tilt(base_spec, 1.0);
  const auto [um, up] = domain_endpoints(p);

  {
    const double l0 = cgf_eval(base_spec, 0.0).value();
    const double l1 = cgf_eval(base_spec, 1.0).value();
    push("cgf_zero_at_0_and_1", std::fabs(l0) <= 1e-12 && std::fabs(l1) <= 1e-12,
         "cgf(0)=" + format_double(l0, 3) + " cgf(1)=" + format_double(l1, 3));
  }
  {
    const double scale = p.kappa * p.kappa + p.sigma * p.sigma * (up * up + std::fabs(up)) + 1.0;
    const bool ok = std::fabs(delta(p, um)) <= 1e-9 * scale && std::fabs(delta(p, up)) <= 1e-9 * scale;
    push("delta_vanishes_at_endpoints", ok,
         "delta(u-)=" + format_double(delta(p, um), 3) + " delta(u+)=" +
             format_double(delta(p, up), 3));
  }
  {
    const double d0 = cgf_derivative(base_spec, 0.0);
    const double d1 = cgf_derivative(base_spec, 1.0);
    const double want0 = pricing_growth_rate(p);
    const double want1 = share_growth_rate(p);
    const bool ok = std::fabs(d0 - want0) <= 1e-10 * std::max(1.0, std::fabs(want0)) &&
                    std::fabs(d1 - want1) <= 1e-10 * std::max(1.0, std::fabs(want1));
    push("derivative_values_at_0_and_1", ok,
         "cgf'(0)=" + format_double(d0, 9) + " cgf'(1)=" + format_double(d1, 9));
  }
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double u = um + (up - um) * (0.05 + 0.9 * i / 21.0);
      const double h = 1e-6 * std::max(1.0, std::fabs(u));
      if (u - h <= um || u + h >= up) continue;
      const double fd = (cgf_eval(base_spec, u + h).value() - cgf_eval(base_spec, u - h).value()) /
                        (2.0 * h);
      const double an = cgf_derivative(base_spec, u);
      const double rel = std::fabs(fd - an) / std::max(1.0, std::fabs(an));
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-6;
    }
    push("derivative_matches_finite_difference", ok, "worst rel err " + format_double(worst, 3));
  }
  {
    // Convexity on a deterministic triple grid.
    bool ok = true;
    for (int i = 1; i <= 15 && ok; ++i) {
      for (int j = i + 1; j <= 16 && ok; ++j) {
        const double u = um + (up - um) * i / 17.0;
        const double v = um + (up - um) * j / 17.0;
        const double mid = 0.5 * (u + v);
        ok = cgf_eval(base_spec, mid).value() <=
             0.5 * cgf_eval(base_spec, u).value() + 0.5 * cgf_eval(base_spec, v).value() + 1e-10;
      }
    }
    push("cgf_convexity", ok, "midpoint inequality on interior grid");
  }
  {
    // Conjugate vs grid supremum.
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double x = -1.0 + 0.25 * i;
      const RatePoint rp = conjugate(base_spec, x);
      double best = -std::numeric_limits<double>::infinity();
      const int n = 1000000;
      for (int k = 0; k <= n; ++k) {
        const double u = um + (up - um) * k / n;
        best = std::max(best, u * x - cgf_eval(base_spec, u).value());
      }
      worst = std::max(worst, std::fabs(best - rp.value));
      ok = ok && std::fabs(best - rp.value) <= 1e-6;
    }
    push("conjugate_matches_grid_oracle", ok, "worst abs err " + format_double(worst, 3));
  }
  {
    bool ok = true;
    RandomStream rng(seed, StreamPurpose::Auxiliary, 1);
    for (int i = 0; i < 1000; ++i) {
      const double u = um + (up - um) * rng.next_open_unit();
      const double x = -1.0 + 2.0 * rng.next_open_unit();
      const double lhs = u * x;
      const double rhs = cgf_eval(base_spec, u).value() + conjugate(base_spec, x).value;
      ok = ok && lhs <= rhs + 1e-9;
    }
    push("fenchel_young", ok, "1000 random (u,x) pairs");
  }
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i <= 99; ++i) {
      const double x = -1.0 + 2.0 * i / 99.0;
      const double lhs = tilted_rate(p, x);
      const double rhs = conjugate(base_spec, x).value - x;
      worst = std::max(worst, std::fabs(lhs - rhs));
      ok = ok && std::fabs(lhs - rhs) <= 1e-9;
    }
    push("tilt_identity", ok, "worst abs err " + format_double(worst, 3));
  }
  {
    bool ok = true;
    for (int i = 0; i <= 40; ++i) {
      const double u = um - 0.5 + (up - um + 1.0) * i / 40.0;
      const ExtendedReal a = cgf_eval(share_spec, u);
      const ExtendedReal b = cgf_eval(base_spec, u + 1.0);
      if (a.is_finite() != b.is_finite()) { ok = false; break; }
      if (a.is_finite() && std::fabs(a.value() - b.value()) > 1e-12) { ok = false; break; }
    }
    push("tilt_value_consistency", ok, "cgf(tilt,u) = cgf(base,u+1) on a grid");
  }
  {
    const CgfSpec cut = perturb(base_spec, 1.0, TruncationSide::Upper);
    bool ok = true;
    for (int i = 0; i <= 40; ++i) {
      const double u = um - 0.5 + (up - um + 1.0) * i / 40.0;
      const ExtendedReal a = cgf_eval(cut, u);
      const ExtendedReal want =
          u < 1.0 ? cgf_eval(base_spec, u) : ExtendedReal::infinity();
      if (a.is_finite() != want.is_finite()) { ok = false; break; }
      if (a.is_finite() && std::fabs(a.value() - want.value()) > 1e-12) { ok = false; break; }
    }
    push("perturbation_consistency", ok, "upper cut at 1 matches piecewise form");
  }
  {
    const auto rep_base = smoothness_report(base_spec);
    const auto rep_cut = smoothness_report(perturb(base_spec, 1.0, TruncationSide::Upper));
    const auto rep_far = smoothness_report(perturb(base_spec, up + 1.0, TruncationSide::Upper));
    const bool ok = rep_base.essentially_smooth && !rep_cut.essentially_smooth &&
                    !rep_cut.endpoints[1].is_steep && !rep_cut.endpoints[1].lower_semicontinuous &&
                    rep_far.essentially_smooth;
    push("smoothness_classification", ok, "base smooth, cut at 1 not steep/lsc, far cut smooth");
  }
  {
    const double x_min = cgf_derivative(base_spec, 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    const double a = rate_infimum(base_spec, Interval::make(-inf, x_min, true, false));
    const double b = rate_infimum(base_spec, Interval::make(-inf, x_min - 0.2, true, false));
    const double want_b = conjugate(base_spec, x_min - 0.2).value;
    const double c = rate_infimum(base_spec, Interval::closed(x_min + 0.1, x_min + 0.5));
    const double want_c = conjugate(base_spec, x_min + 0.1).value;
    const bool ok = a == 0.0 && std::fabs(b - want_b) <= 1e-12 && std::fabs(c - want_c) <= 1e-12;
    push("rate_infimum_convexity", ok, "minimizer inside, left tail, right interval");
  }
  {
    McConfig mc;
    mc.horizon = 10.0;
    mc.n_paths = 20000;
    mc.n_steps = 200;
    mc.seed = seed;
    mc.threads = threads;
    const auto report = ordering_check(p, mc, pricing_growth_rate(p) + 0.01, 1.0, 3.0);
    bool cdf_ok = true;
    for (int i = 1; i <= 20; ++i) {
      const double alpha = 0.1 * i;
      cdf_ok = cdf_ok && exponential_cdf(1.0, alpha) <= exponential_cdf(3.0, alpha);
    }
    push("ordering_check", report.ordering_holds && cdf_ok,
         "p(E1)=" + format_double(report.p_small_rate, 6) +
             " p(E3)=" + format_double(report.p_large_rate, 6) +
             " p(none)=" + format_double(report.p_unperturbed, 6));
  }
  {
    McConfig mc;
    mc.horizon = 1.0;
    mc.n_paths = 100000;
    mc.n_steps = 20;
    mc.seed = seed;
    mc.threads = threads;
    const auto report = put_representation_check(p, mc, std::exp(p.x0));
    push("put_representation", report.agrees,
         "direct=" + format_double(report.direct_estimate, 6) +
             " probability=" + format_double(report.probability_estimate, 6));
  }
  {
    McConfig mc;
    mc.horizon = 10.0;
    mc.n_paths = 50000;
    mc.n_steps = 100;
    mc.seed = seed;
    mc.threads = threads;
    const TerminalSample s = simulate_terminal(p, mc);
    double sum = 0.0, sum2 = 0.0;
    for (double xv : s.log_spot) {
      const double w = std::exp(xv - p.x0);
      sum += w;
      sum2 += w * w;
    }
    const double n = static_cast<double>(mc.n_paths);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / n);
    push("martingale_mean", std::fabs(mean - 1.0) <= 3.0 * se,
         "mean exp(X-x0) = " + format_double(mean, 6) + " se " + format_double(se, 3));
  }
  {
    McConfig mc;
    mc.horizon = 2.0;
    mc.n_paths = 2000;
    mc.n_steps = 20;
    mc.seed = seed;
    mc.threads = 1;
    const TerminalSample a = simulate_terminal(p, mc);
    mc.threads = 5;
    const TerminalSample b = simulate_terminal(p, mc);
    push("determinism_across_threads", a.log_spot == b.log_spot && a.variance == b.variance,
         "bitwise identical samples for 1 and 5 threads");
  }
  return items;
}

inline CmdResult cmd_selftest(const RunConfig& cfg) {
  CmdResult result;
  std::vector<SelftestItem> items;
  items = run_selftest(cfg.params, cfg.seed, cfg.threads);

  bool all = true;
  std::string human;
  for (const auto& item : items) {
    all = all && item.pass;
    human += std::string(item.pass ? "[PASS] " : "[FAIL] ") + item.name + " — " + item.detail +
             "\n";
  }
  human += all ? "selftest: all checks passed\n" : "selftest: FAILURES present\n";
  result.human = human;

  const std::string config = detail::config_echo(cfg, "selftest", {});
  if (cfg.format == OutputFormat::Json) {
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(config);
    w.key("items").begin_array();
    for (const auto& item : items) {
      w.begin_object();
      w.key("name").value(item.name);
      w.key("pass").value(item.pass);
      w.key("detail").value(item.detail);
      w.end_object();
    }
    w.end_array();
    w.key("pass").value(all);
    w.end_object();
    result.payload = w.str() + "\n";
  } else {
    std::string csv = "# config " + config + "\n";
    csv += "name,pass,detail\n";
    for (const auto& item : items)
      csv += csv_row({item.name, item.pass ? "true" : "false", "\"" + item.detail + "\""});
    result.payload = csv;
  }
  result.exit_code = all ? kExitOk : kExitVerifyFailed;
  return result;
}

}  // namespace hestonld
