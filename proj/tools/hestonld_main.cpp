// Command-line surface: rate tables, domain/smoothness reports, limit
// verification runs and the analytic self test, with CSV/JSON outputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hestonld/hestonld.hpp"

namespace {

using namespace hestonld;

std::vector<double> parse_comma_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

// lo:hi:n inclusive grid.
std::vector<double> parse_grid(const std::string& s) {
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
    throw ConfigError("grid must be lo:hi:n");
  const double lo = std::stod(a);
  const double hi = std::stod(b);
  const long n = std::stol(c);
  if (n < 1 || hi < lo) throw ConfigError("grid must be lo:hi:n with n >= 1 and hi >= lo");
  std::vector<double> out;
  out.reserve(n);
  for (long i = 0; i < n; ++i)
    out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return out;
}

Perturbation parse_perturb(const std::string& s) {
  if (s == "none") return Perturbation::none();
  const bool plus = s.rfind("+exp:", 0) == 0;
  const bool minus = s.rfind("-exp:", 0) == 0;
  if (!plus && !minus) throw ConfigError("perturb must be none, +exp:LAMBDA or -exp:LAMBDA");
  const double lambda = std::stod(s.substr(5));
  return plus ? Perturbation::plus_exp(lambda) : Perturbation::minus_exp(lambda);
}

int emit(const CmdResult& result, const std::string& out_path) {
  std::fputs(result.human.c_str(), stdout);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "cannot open output file: %s\n", out_path.c_str());
      return kExitConfig;
    }
    f << result.payload;
  } else if (!result.payload.empty()) {
    std::fputs(result.payload.c_str(), stdout);
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-deviation toolkit for the Heston model"};
  app.require_subcommand(1);

  std::string params_file;
  std::string out_path;
  std::string format_str = "json";
  RunConfig cfg;
  double kappa = cfg.params.kappa, theta = cfg.params.theta, sigma = cfg.params.sigma,
         rho = cfg.params.rho, y0 = cfg.params.y0, x0 = cfg.params.x0;

  app.add_option("--params", params_file, "JSON file with kappa,theta,sigma,rho,y0,x0");
  app.add_option("--out", out_path, "output file path");
  app.add_option("--format", format_str, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_flag("--force", cfg.force, "compute outside the proven ranges, labelled");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware); never changes results");
  auto* okappa = app.add_option("--kappa", kappa, "mean-reversion rate");
  auto* otheta = app.add_option("--theta", theta, "long-run variance");
  auto* osigma = app.add_option("--sigma", sigma, "vol of vol");
  auto* orho = app.add_option("--rho", rho, "correlation in (-1,1)");
  auto* oy0 = app.add_option("--y0", y0, "initial variance");
  auto* ox0 = app.add_option("--x0", x0, "initial log-spot");

  auto* cmd_domain_app = app.add_subcommand("domain", "effective domain and smoothness report");

  auto* cmd_rate_app = app.add_subcommand("rate", "rate-function table over an x grid");
  std::string grid_str = "-1:1:41";
  cmd_rate_app->add_option("--grid", grid_str, "x grid as lo:hi:n");

  auto* cmd_verify_app = app.add_subcommand("verify", "Monte Carlo check of one limit");
  VerifyOptions vopt;
  std::string measure_str = "pricing";
  std::string perturb_str = "+exp:1";
  std::string direction_str = "below";
  std::string t_grid_str = "25,50,100";
  cmd_verify_app->add_option("--x", vopt.x, "threshold growth rate")->required();
  cmd_verify_app->add_option("--measure", measure_str, "pricing|share")
      ->check(CLI::IsMember({"pricing", "share"}));
  cmd_verify_app->add_option("--perturb", perturb_str, "none|+exp:LAMBDA|-exp:LAMBDA");
  cmd_verify_app->add_option("--direction", direction_str, "below|above")
      ->check(CLI::IsMember({"below", "above"}));
  cmd_verify_app->add_option("--t", t_grid_str, "increasing comma list of horizons");
  cmd_verify_app->add_option("--paths", vopt.n_paths, "paths per horizon");
  cmd_verify_app->add_option("--steps-per-unit-time", vopt.steps_per_unit_time,
                             "Euler steps per unit time");
  cmd_verify_app->add_option("--tol", vopt.tolerance, "final-gap tolerance");

  auto* cmd_selftest_app = app.add_subcommand("selftest", "analytic and Monte Carlo invariants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (!params_file.empty()) {
      std::ifstream f(params_file);
      if (!f) throw ConfigError("cannot read params file: " + params_file);
      nlohmann::json j;
      f >> j;
      cfg.params = params_from_json(j);
    }
    // Explicit flags override file values.
    if (okappa->count()) cfg.params.kappa = kappa;
    if (otheta->count()) cfg.params.theta = theta;
    if (osigma->count()) cfg.params.sigma = sigma;
    if (orho->count()) cfg.params.rho = rho;
    if (oy0->count()) cfg.params.y0 = y0;
    if (ox0->count()) cfg.params.x0 = x0;
    cfg.params = validate(cfg.params);
    cfg.format = format_str == "csv" ? OutputFormat::Csv : OutputFormat::Json;

    if (cmd_domain_app->parsed()) return emit(cmd_domain(cfg), out_path);
    if (cmd_rate_app->parsed()) return emit(cmd_rate(cfg, parse_grid(grid_str)), out_path);
    if (cmd_verify_app->parsed()) {
      vopt.measure = measure_str == "share" ? Measure::Share : Measure::Pricing;
      vopt.perturbation = parse_perturb(perturb_str);
      vopt.direction = direction_str == "above" ? Direction::Above : Direction::Below;
      vopt.t_grid = parse_comma_list(t_grid_str);
      if (vopt.t_grid.empty()) throw ConfigError("empty t grid");
      return emit(cmd_verify(cfg, vopt), out_path);
    }
    if (cmd_selftest_app->parsed()) return emit(cmd_selftest(cfg), out_path);
  } catch (const OutOfTheoremRange& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
