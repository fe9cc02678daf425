// Command-line front end for the correlation-hierarchy experiments.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gfdyn/config.hpp"
#include "gfdyn/csv.hpp"
#include "gfdyn/error.hpp"
#include "gfdyn/harness.hpp"

namespace {

struct GlobalFlags {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

gfdyn::ExperimentConfig load(const GlobalFlags& flags) {
  gfdyn::ExperimentConfig cfg =
      flags.config.empty() ? gfdyn::ExperimentConfig{} : gfdyn::parse_config(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gfdyn: truncated correlation-hierarchy dynamics"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "Experiment config file (key = value)");
  app.add_option("--out", flags.out, "Output directory")->capture_default_str();
  app.add_option("--seed", flags.seed, "Override rng.seed");

  std::string mode = "auto";
  auto* evolve = app.add_subcommand("evolve", "Evolve the correlation hierarchy");
  evolve->add_option("--mode", mode, "auto, local or global")
      ->check(CLI::IsMember({"auto", "local", "global"}))
      ->capture_default_str();

  auto* vlasov = app.add_subcommand("vlasov", "Integrate the kinetic equation");

  std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
  auto* scaling = app.add_subcommand("scaling-study", "Gap between rescaled and limit dynamics");
  scaling->add_option("--epsilons", epsilons, "Comma-separated epsilon values")
      ->delimiter(',')
      ->capture_default_str();

  auto* chaos = app.add_subcommand("chaos-check", "Compare hierarchy orders 1 and 2 with the kinetic solution");

  std::size_t cases = 100;
  auto* bounds = app.add_subcommand("verify-bounds", "Sampled inequality suites");
  bounds->add_option("--cases", cases, "Number of random cases")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gfdyn::exit_status(gfdyn::ErrorKind::parse_error);
  }

  try {
    const gfdyn::ExperimentConfig cfg = load(flags);
    const std::filesystem::path out = flags.out;
    if (evolve->parsed()) {
      const auto m = mode == "local"    ? gfdyn::EvolveMode::local
                     : mode == "global" ? gfdyn::EvolveMode::global
                                        : gfdyn::EvolveMode::automatic;
      const auto r = gfdyn::cmd_evolve(cfg, m, out);
      std::cout << "evolve: t_final=" << gfdyn::format_double(cfg.t_final)
                << " steps=" << r.report.steps.size() << " restarts=" << r.report.restarts
                << (r.used_global ? " (global)" : " (local)") << '\n';
    } else if (vlasov->parsed()) {
      const auto r = gfdyn::cmd_vlasov(cfg, out);
      std::cout << "vlasov: stationary_residual=" << gfdyn::format_double(r.residual)
                << " linf_bound=" << (r.bound_ok ? "pass" : "fail") << '\n';
    } else if (scaling->parsed()) {
      const auto r = gfdyn::cmd_scaling_study(cfg, epsilons, out);
      std::cout << "scaling-study: fitted_order=" << gfdyn::format_double(r.fitted_order) << '\n';
    } else if (chaos->parsed()) {
      const auto r = gfdyn::cmd_chaos_check(cfg, out);
      std::cout << "chaos-check: dev1=" << gfdyn::format_double(r.dev1)
                << " dev2=" << gfdyn::format_double(r.dev2) << ' ' << (r.pass ? "pass" : "fail")
                << '\n';
      if (!r.pass) return 1;
    } else if (bounds->parsed()) {
      const auto r = gfdyn::cmd_verify_bounds(cfg, cases, out);
      std::cout << r.table.str();
      if (r.total_violations() > 0) return 1;
    }
  } catch (const gfdyn::Error& e) {
    std::cerr << "error: " << gfdyn::error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return gfdyn::exit_status(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: other: " << e.what() << '\n';
    return 9;
  }
  return 0;
}
