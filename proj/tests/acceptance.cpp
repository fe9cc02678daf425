// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gfdyn/config.hpp"
#include "gfdyn/error.hpp"
#include "gfdyn/glauber.hpp"
#include "gfdyn/harness.hpp"
#include "gfdyn/hierarchy.hpp"
#include "gfdyn/ovsjannikov.hpp"
#include "gfdyn/random.hpp"
#include "gfdyn/vlasov.hpp"

using namespace gfdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

ExperimentConfig shipped(const std::string& name) {
  return parse_config(fs::path(GFDYN_CONFIG_DIR) / (name + ".conf"));
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double slope(const std::vector<double>& x, const std::vector<double>& y) { return fit_log_log_slope(x, y); }

Outcome duality() {
  const Grid g = make_grid(8, 8.0);
  const auto pot = gaussian_potential(g, 0.5, 1.0);
  const ScaleParams params;
  Rng rng(1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto k = random_hierarchy(g, 3, rng, params.z);
    const GridField theta = random_field(g, rng, -1.0, 1.0);
    const double lhs = evaluate_gf(apply_generator(k, params, pot, GeneratorKind::glauber()), theta);
    const double rhs = evaluate_generator_gf(k, theta, params, pot, GeneratorKind::glauber());
    worst = std::max(worst, rel_diff(lhs, rhs));
  }
  return {worst <= 1e-9, "max rel err " + num(worst)};
}

Outcome coincidence() {
  const Grid g = make_grid(8, 8.0);
  const auto pot = gaussian_potential(g, 0.5, 1.0);
  const ScaleParams params;
  Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto k = random_hierarchy(g, 3, rng, params.z);
    worst = std::max(worst, max_abs_difference(apply_generator(k, params, pot, GeneratorKind::rescaled(1.0)),
                                               apply_generator(k, params, pot, GeneratorKind::glauber())));
  }
  return {worst <= 1e-12, "max abs diff " + num(worst)};
}

Outcome oracle() {
  const Grid g = make_grid(6, 6.0);
  const auto pot = gaussian_potential(g, 0.5, 1.0);
  const ScaleParams params;
  const double t = 0.5 * step_radius(norm_bound_M(params, pot), params.alpha, params.alpha0);
  Rng rng(3);
  const auto u0 = random_hierarchy(g, 2, rng, params.z);
  const auto m = assemble_matrix(g, 2, params, pot, GeneratorKind::glauber());
  const auto flat = flatten(u0);
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  const Eigen::VectorXd ref = matrix_exp_oracle(m, v, t);
  const auto sol = flatten(taylor_evolve(
      [&](const CorrelationHierarchy& k) { return apply_generator(k, params, pot, GeneratorKind::glauber()); }, u0, t,
      TaylorOptions{200, 1e-14, params.alpha}).solution);
  const Eigen::VectorXd got = Eigen::Map<const Eigen::VectorXd>(sol.data(), static_cast<Eigen::Index>(sol.size()));
  const double err = (got - ref).lpNorm<Eigen::Infinity>() / ref.lpNorm<Eigen::Infinity>();
  return {m.rows() == 43 && err <= 1e-8, "D=" + std::to_string(m.rows()) + " rel err " + num(err)};
}

Outcome radius() {
  const double r = step_radius(1.0 + std::exp(1.0), 0.5, 1.0);
  const double formula = 0.5 / (std::exp(1.0) * (1.0 + std::exp(1.0)));
  const Grid g = make_grid(6, 6.0);
  const auto pot = gaussian_potential(g, 0.5, 1.0);
  const ScaleParams params;
  const double local = step_radius(norm_bound_M(params, pot), params.alpha, params.alpha0);
  bool rejected = false;
  try {
    solve_local(params, pot, GeneratorKind::glauber(), exponential_hierarchy(GridField(g, 0.5), 2), 1.01 * local, 200,
                1e-14);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::radius_exceeded;
  }
  return {std::abs(r - formula) <= 1e-6 && std::abs(r - 0.0494690) <= 1e-6 && rejected,
          "radius " + num(r) + (rejected ? ", 1.01x rejected" : ", 1.01x NOT rejected")};
}

Outcome equilibrium() {
  const Grid g = make_grid(8, 8.0);
  const auto zero = zero_potential(g);
  const ScaleParams params;
  const auto u0 = exponential_hierarchy(GridField(g, params.z), 3);
  const auto gen = apply_generator(u0, params, zero, GeneratorKind::glauber());
  double gen_max = 0.0;
  for (std::size_t n = 0; n <= 3; ++n) gen_max = std::max(gen_max, tensor_max_abs(gen, n));
  const auto r = evolve_global(params, zero, u0, 5.0);
  const double drift = max_abs_difference(r.solution, u0);
  double margin_dev = 0.0;
  for (const auto& s : r.steps) margin_dev = std::max(margin_dev, std::abs(s.ruelle_margin - 1.0));
  return {gen_max <= 1e-12 && drift <= 1e-9 && margin_dev <= 1e-9,
          "|Lu0| " + num(gen_max) + ", drift " + num(drift) + ", margin dev " + num(margin_dev)};
}

Outcome closed_form() {
  const Grid g = make_grid(8, 8.0);
  VlasovConfig cfg;
  cfg.z = 1.0;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  const auto r = integrate(GridField(g), cfg, zero_potential(g));
  double err = 0.0;
  for (std::size_t x = 0; x < 8; ++x) err = std::max(err, std::abs(r.final_state[x] - (1.0 - std::exp(-1.0))));
  return {err <= 1e-8 && std::abs((1.0 - std::exp(-1.0)) - 0.6321205588) < 1e-10, "max err " + num(err)};
}

Outcome linf_bound() {
  std::size_t runs = 0, fails = 0;
  for (const fs::directory_entry& e : fs::directory_iterator(GFDYN_CONFIG_DIR)) {
    if (e.path().extension() != ".conf") continue;
    const auto cfg = parse_config(e.path());
    const auto r = integrate(config_initial_density(cfg), config_vlasov(cfg), config_potential(cfg));
    ++runs;
    if (!linf_bound_check(r.trajectory, config_initial_density(cfg), cfg.z)) ++fails;
  }
  return {runs > 0 && fails == 0, std::to_string(runs) + " shipped trajectories, " + std::to_string(fails) + " failing"};
}

Outcome operator_convergence() {
  const Grid g = make_grid(8, 8.0);
  const auto pot = gaussian_potential(g, 0.5, 1.0);
  const ScaleParams params;
  Rng rng(8);
  const auto k = random_hierarchy(g, 3, rng, params.z);
  const auto lim = apply_generator(k, params, pot, GeneratorKind::vlasov_limit());
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> diffs;
  for (double e : eps) diffs.push_back(max_abs_difference(apply_generator(k, params, pot, GeneratorKind::rescaled(e)), lim));
  bool decreasing = true;
  for (std::size_t i = 1; i < diffs.size(); ++i) decreasing = decreasing && diffs[i] < diffs[i - 1];
  const double s = slope(eps, diffs);

  const double a1 = params.alpha, a2 = params.alpha0;
  std::size_t violations = 0;
  for (double e : eps)
    for (int i = 0; i < 20; ++i) {
      const GridField theta = random_field(g, rng, -1.0, 1.0);
      const double gap = std::abs(evaluate_generator_gf_full(k, theta, params, pot, GeneratorKind::rescaled(e)) -
                                  evaluate_generator_gf_full(k, theta, params, pot, GeneratorKind::vlasov_limit()));
      const double bound = vlasov_gap_bound(e, params, pot, a1, a2) * scale_norm(k, a2) *
                           std::exp(field_l1_norm(theta) / a1);
      if (!(gap <= bound)) ++violations;
    }
  return {decreasing && s >= 0.8 && s <= 1.2 && violations == 0,
          std::string(decreasing ? "decreasing" : "NOT decreasing") + ", slope " + num(s) + ", bound violations " +
              std::to_string(violations)};
}

Outcome scaling_study() {
  const auto r = cmd_scaling_study(shipped("default"), {0.4, 0.2, 0.1, 0.05}, std::nullopt);
  bool nonincreasing = true;
  for (std::size_t i = 1; i < r.gaps.size(); ++i) nonincreasing = nonincreasing && r.gaps[i] <= r.gaps[i - 1];
  return {nonincreasing && r.fitted_order >= 0.8 && r.fitted_order <= 1.2,
          std::string(nonincreasing ? "nonincreasing" : "NOT nonincreasing") + ", fitted order " + num(r.fitted_order)};
}

Outcome chaos() {
  const auto g = cmd_chaos_check(shipped("chaos_gaussian"), std::nullopt);
  const auto f = cmd_chaos_check(shipped("chaos_free"), std::nullopt);
  const bool ok = g.dev1 <= 1e-3 && g.dev2 <= 1e-3 && f.dev1 <= 1e-9 && f.dev2 <= 1e-9;
  return {ok, "gaussian dev1 " + num(g.dev1) + " dev2 " + num(g.dev2) + "; free dev1 " + num(f.dev1) + " dev2 " +
                  num(f.dev2)};
}

Outcome bounds() {
  const auto r = cmd_verify_bounds(shipped("default"), 100, std::nullopt);
  std::string detail;
  for (const auto& s : r.suites) detail += s.name + "=" + std::to_string(s.violations) + " ";
  return {r.total_violations() == 0, detail + "violations"};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream is(e.path(), std::ios::binary);
    files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(is), {});
  }
  return files;
}

void run_all_commands(const fs::path& dir) {
  cmd_evolve(shipped("evolve_gaussian_global"), EvolveMode::automatic, dir);
  cmd_vlasov(shipped("vlasov_gaussian"), dir);
  cmd_scaling_study(shipped("default"), {0.4, 0.2, 0.1, 0.05}, dir);
  cmd_chaos_check(shipped("chaos_gaussian"), dir);
  cmd_verify_bounds(shipped("default"), 100, dir);
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "gfdyn_acceptance_determinism";
  fs::remove_all(base);
  run_all_commands(base / "a");
  run_all_commands(base / "b");
  const auto a = read_dir(base / "a");
  const auto b = read_dir(base / "b");
  fs::remove_all(base);
  return {a.size() == 9 && a == b, std::to_string(a.size()) + " files compared byte-for-byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"duality identity", duality},
      {"epsilon = 1 coincidence", coincidence},
      {"solver vs exponentiation oracle", oracle},
      {"radius bookkeeping", radius},
      {"equilibrium stationarity", equilibrium},
      {"kinetic closed form", closed_form},
      {"a-priori sup bound on shipped trajectories", linf_bound},
      {"operator-level limit convergence", operator_convergence},
      {"generating-functional scaling study", scaling_study},
      {"chaos preservation", chaos},
      {"inequality suites", bounds},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
