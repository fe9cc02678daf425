#include "gfdyn/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "gfdyn/csv.hpp"
#include "gfdyn/error.hpp"

namespace gfdyn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct ParseFailure {
  std::string what;
};

double to_real(std::string_view v) {
  double out = 0.0;
  if (!parse_double(v, out) || !std::isfinite(out))
    throw ParseFailure{"expected a real number, got '" + std::string(v) + "'"};
  return out;
}

std::uint64_t to_unsigned(std::string_view v) {
  std::uint64_t out = 0;
  if (v.empty()) throw ParseFailure{"expected a non-negative integer"};
  for (char c : v) {
    if (c < '0' || c > '9')
      throw ParseFailure{"expected a non-negative integer, got '" + std::string(v) + "'"};
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"grid.n_sites", [](auto& c, auto v) { c.n_sites = to_unsigned(v); }},
      {"grid.length", [](auto& c, auto v) { c.length = to_real(v); }},
      {"potential.kind",
       [](auto& c, auto v) {
         if (v == "zero") c.potential_kind = PotentialKind::zero;
         else if (v == "gaussian") c.potential_kind = PotentialKind::gaussian;
         else if (v == "tophat") c.potential_kind = PotentialKind::tophat;
         else if (v == "file") c.potential_kind = PotentialKind::file;
         else throw ParseFailure{"unknown potential kind '" + std::string(v) + "'"};
       }},
      {"potential.amplitude", [](auto& c, auto v) { c.amplitude = to_real(v); }},
      {"potential.width", [](auto& c, auto v) { c.width = to_real(v); }},
      {"potential.path", [](auto& c, auto v) { c.potential_path = std::string(v); }},
      {"model.z", [](auto& c, auto v) { c.z = to_real(v); }},
      {"model.epsilon", [](auto& c, auto v) { c.epsilon = to_real(v); }},
      {"truncation.n_max", [](auto& c, auto v) { c.n_max = to_unsigned(v); }},
      {"solver.alpha", [](auto& c, auto v) { c.alpha = to_real(v); }},
      {"solver.alpha0", [](auto& c, auto v) { c.alpha0 = to_real(v); }},
      {"solver.m_max", [](auto& c, auto v) { c.m_max = to_unsigned(v); }},
      {"solver.tol", [](auto& c, auto v) { c.tol = to_real(v); }},
      {"time.t_final", [](auto& c, auto v) { c.t_final = to_real(v); }},
      {"time.substep_fraction", [](auto& c, auto v) { c.substep_fraction = to_real(v); }},
      {"vlasov.dt", [](auto& c, auto v) { c.vlasov_dt = to_real(v); }},
      {"vlasov.scheme",
       [](auto& c, auto v) {
         if (v == "rk4") c.scheme = TimeScheme::rk4;
         else if (v == "euler") c.scheme = TimeScheme::euler;
         else throw ParseFailure{"unknown scheme '" + std::string(v) + "'"};
       }},
      {"vlasov.sample_interval", [](auto& c, auto v) { c.sample_interval = to_real(v); }},
      {"initial.density", [](auto& c, auto v) { c.initial_density = to_real(v); }},
      {"initial.modulation", [](auto& c, auto v) { c.initial_modulation = to_real(v); }},
      {"rng.seed", [](auto& c, auto v) { c.seed = to_unsigned(v); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { raise(ErrorKind::parse_error, what); };
  if (n_sites < 2) fail("grid.n_sites must be >= 2");
  if (!(length > 0.0)) fail("grid.length must be positive");
  if (amplitude < 0.0) fail("potential.amplitude must be >= 0");
  if (potential_kind == PotentialKind::gaussian && !(width > 0.0))
    fail("potential.width must be positive for a gaussian potential");
  if (width < 0.0) fail("potential.width must be >= 0");
  if (potential_kind == PotentialKind::file && potential_path.empty())
    fail("potential.path is required for potential.kind = file");
  if (!(z > 0.0)) fail("model.z must be positive");
  if (!(epsilon >= 0.0)) fail("model.epsilon must be >= 0");
  if (!(alpha > 0.0 && alpha < alpha0)) fail("solver.alpha and solver.alpha0 need 0 < alpha < alpha0");
  if (m_max < 1) fail("solver.m_max must be >= 1");
  if (!(tol > 0.0)) fail("solver.tol must be positive");
  if (!(t_final >= 0.0)) fail("time.t_final must be >= 0");
  if (!(substep_fraction > 0.0 && substep_fraction < 1.0))
    fail("time.substep_fraction must lie in (0, 1)");
  if (!(vlasov_dt > 0.0)) fail("vlasov.dt must be positive");
  if (!(sample_interval >= 0.0)) fail("vlasov.sample_interval must be >= 0");
  if (initial_density && !(*initial_density >= 0.0)) fail("initial.density must be >= 0");
  if (!(initial_modulation >= 0.0 && initial_modulation <= 1.0))
    fail("initial.modulation must lie in [0, 1]");
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line_no << ": " << what;
    raise(ErrorKind::parse_error, msg.str());
  };

  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail("missing key");
    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const ParseFailure& e) {
      fail(std::string(key) + ": " + e.what);
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    raise(ErrorKind::parse_error, std::string(source) + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(ErrorKind::io_error, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

Grid config_grid(const ExperimentConfig& cfg) { return make_grid(cfg.n_sites, cfg.length); }

PairPotential config_potential(const ExperimentConfig& cfg) {
  const Grid grid = config_grid(cfg);
  switch (cfg.potential_kind) {
    case PotentialKind::zero: return zero_potential(grid);
    case PotentialKind::gaussian: return gaussian_potential(grid, cfg.amplitude, cfg.width);
    case PotentialKind::tophat: return tophat_potential(grid, cfg.amplitude, cfg.width);
    case PotentialKind::file: {
      std::ifstream is(cfg.potential_path);
      if (!is) raise(ErrorKind::io_error, "cannot open potential file " + cfg.potential_path);
      std::vector<double> values;
      std::string token;
      while (is >> token) {
        std::istringstream cells(token);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
          if (cell.empty()) continue;
          double v = 0.0;
          if (!parse_double(cell, v))
            raise(ErrorKind::parse_error, "bad value '" + cell + "' in " + cfg.potential_path);
          values.push_back(v);
        }
      }
      if (values.size() != grid.n_sites()) {
        std::ostringstream msg;
        msg << cfg.potential_path << " holds " << values.size() << " values, grid.n_sites is "
            << grid.n_sites();
        raise(ErrorKind::parse_error, msg.str());
      }
      return potential_from_samples(grid, std::move(values));
    }
  }
  return zero_potential(grid);
}

ScaleParams config_scale(const ExperimentConfig& cfg) {
  return ScaleParams{cfg.alpha, cfg.alpha0, cfg.z, cfg.epsilon};
}

GridField config_initial_density(const ExperimentConfig& cfg) {
  const Grid grid = config_grid(cfg);
  const double level = cfg.initial_density.value_or(cfg.z);
  GridField rho(grid);
  for (std::size_t x = 0; x < rho.size(); ++x) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(x) /
                         static_cast<double>(grid.n_sites());
    rho[x] = cfg.initial_modulation == 0.0 ? level
                                           : level * (1.0 + cfg.initial_modulation * std::cos(phase));
  }
  return rho;
}

VlasovConfig config_vlasov(const ExperimentConfig& cfg) {
  VlasovConfig v;
  v.z = cfg.z;
  v.dt = cfg.t_final > 0.0 ? std::min(cfg.vlasov_dt, cfg.t_final) : cfg.vlasov_dt;
  v.scheme = cfg.scheme;
  v.t_final = cfg.t_final;
  v.sample_interval = cfg.sample_interval;
  return v;
}

}  // namespace gfdyn
