#include "thermoflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace thermoflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// "neumann:<q>" or "dirichlet:<T>"
EdgeCondition to_edge(const std::string& key, const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos) {
    throw ConfigError(key + ": expected neumann:<W/m^2> or dirichlet:<K>, got '" + v + "'");
  }
  const std::string kind = trim(v.substr(0, colon));
  const double value = to_double(key, trim(v.substr(colon + 1)));
  if (kind == "neumann") return EdgeCondition::neumann(value);
  if (kind == "dirichlet") {
    if (!(value > 0.0)) throw ConfigError(key + ": wall temperature must be positive");
    return EdgeCondition::dirichlet(value);
  }
  throw ConfigError(key + ": unknown boundary kind '" + kind + "'");
}

std::string edge_string(const EdgeCondition& e) {
  return (e.kind == EdgeCondition::Kind::neumann ? "neumann:" : "dirichlet:") + fmt(e.value);
}

const char* kEdgeKeys[] = {"scenario.bc_left", "scenario.bc_right", "scenario.bc_bottom",
                           "scenario.bc_top"};

struct Binding {
  std::function<void(const std::string& key, const std::string& value)> set;
  bool required;
};

std::map<std::string, Binding> bindings(ScenarioConfig& c) {
  std::map<std::string, Binding> b;
  auto num = [&b](const std::string& key, double& field, bool required) {
    b[key] = {[&field](const std::string& k, const std::string& v) { field = to_double(k, v); },
              required};
  };
  auto integer = [&b](const std::string& key, auto& field, bool required) {
    b[key] = {[&field](const std::string& k, const std::string& v) {
                field = static_cast<std::remove_reference_t<decltype(field)>>(to_long(k, v));
              },
              required};
  };
  b["substance.name"] = {[&c](const std::string&, const std::string& v) { c.substance.name = v; },
                         false};
  num("substance.molar_weight", c.substance.molar_weight, true);
  num("substance.T_crit", c.substance.T_crit, true);
  num("substance.P_crit", c.substance.P_crit, true);
  num("substance.acentric", c.substance.acentric, true);
  num("substance.cp_a0", c.substance.cp_coeffs[0], true);
  num("substance.cp_a1", c.substance.cp_coeffs[1], true);
  num("substance.cp_a2", c.substance.cp_coeffs[2], true);
  num("substance.cp_a3", c.substance.cp_coeffs[3], true);
  num("substance.theta0", c.substance.theta0, true);
  num("substance.T0", c.substance.T0, false);
  num("substance.P0", c.substance.P0, false);

  integer("grid.nx", c.grid.nx, true);
  integer("grid.ny", c.grid.ny, true);
  num("grid.Lx", c.grid.lx, true);
  num("grid.Ly", c.grid.ly, true);
  b["grid.x0"] = {[&c](const std::string& k, const std::string& v) {
                    c.grid.x0 = to_double(k, v);
                    c.grid.has_origin = true;
                  },
                  false};
  b["grid.y0"] = {[&c](const std::string& k, const std::string& v) {
                    c.grid.y0 = to_double(k, v);
                    c.grid.has_origin = true;
                  },
                  false};

  num("scheme.dt", c.scheme.dt, true);
  num("scheme.outer_tol", c.scheme.outer_tol, false);
  integer("scheme.max_outer_iters", c.scheme.max_outer_iters, false);
  num("scheme.linear_tol", c.scheme.linear_tol, false);
  b["scheme.linear_solver"] = {[&c](const std::string& k, const std::string& v) {
                                 if (v == "direct") {
                                   c.scheme.linear_method = LinearMethod::direct;
                                 } else if (v == "bicgstab") {
                                   c.scheme.linear_method = LinearMethod::bicgstab;
                                 } else {
                                   throw ConfigError(k + ": expected direct or bicgstab");
                                 }
                               },
                               false};
  b["scheme.convection"] = {[&c](const std::string& k, const std::string& v) {
                              try {
                                c.scheme.convection = parse_convection(v);
                              } catch (const ConfigError& e) {
                                throw ConfigError(k + ": " + e.what());
                              }
                            },
                            false};
  num("scheme.eta", c.scheme.eta, false);
  num("scheme.xi", c.scheme.xi, false);
  num("scheme.heat_coeff", c.scheme.heat_coeff, false);
  b["scheme.lagged_momentum_temperature"] = {
      [&c](const std::string& k, const std::string& v) {
        c.scheme.lagged_momentum_temperature = to_bool(k, v);
      },
      false};
  num("scheme.velocity_floor", c.scheme.velocity_floor, false);
  integer("scheme.max_rejections", c.scheme.max_rejections, false);

  b["scenario.kind"] = {[&c](const std::string& k, const std::string& v) {
                          if (v == "isolated_square") {
                            c.scenario.kind = ScenarioKind::isolated_square;
                          } else if (v == "bubble_tanh") {
                            c.scenario.kind = ScenarioKind::bubble_tanh;
                          } else if (v == "custom") {
                            c.scenario.kind = ScenarioKind::custom;
                          } else {
                            throw ConfigError(k + ": unknown scenario kind '" + v + "'");
                          }
                        },
                        true};
  num("scenario.r_frac", c.scenario.r_frac, false);
  num("scenario.n_gas", c.scenario.n_gas, false);
  num("scenario.n_liquid", c.scenario.n_liquid, false);
  num("scenario.T_init", c.scenario.T_init, false);
  num("scenario.w", c.scenario.w, false);
  num("scenario.T_top", c.scenario.T_top, false);
  num("scenario.T_bottom", c.scenario.T_bottom, false);
  num("scenario.n_init", c.scenario.n_init, false);
  for (int e = 0; e < 4; ++e) {
    b[kEdgeKeys[e]] = {[&c, e](const std::string& k, const std::string& v) {
                         c.scenario.bc.temperature[e] = to_edge(k, v);
                       },
                       false};
  }

  integer("run.n_steps", c.run.n_steps, true);
  integer("run.snapshot_every", c.run.snapshot_every, false);
  b["run.output_dir"] = {[&c](const std::string&, const std::string& v) { c.run.output_dir = v; },
                         false};
  return b;
}

void validate_config(const ScenarioConfig& c) {
  try {
    validate(c.substance);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (c.grid.nx < 3) throw ConfigError("grid.nx must be >= 3");
  if (c.grid.ny < 3) throw ConfigError("grid.ny must be >= 3");
  if (!(c.grid.lx > 0.0)) throw ConfigError("grid.Lx must be positive");
  if (!(c.grid.ly > 0.0)) throw ConfigError("grid.Ly must be positive");
  try {
    validate(c.scheme);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& s = c.scenario;
  if (!(s.n_gas > 0.0)) throw ConfigError("scenario.n_gas must be positive");
  if (!(s.n_liquid > s.n_gas)) throw ConfigError("scenario.n_liquid must exceed scenario.n_gas");
  if (!(s.T_init > 0.0)) throw ConfigError("scenario.T_init must be positive");
  if (s.kind != ScenarioKind::custom && !(s.r_frac > 0.0 && s.r_frac < 1.0)) {
    throw ConfigError("scenario.r_frac must lie in (0, 1) so that r < L");
  }
  if (s.kind == ScenarioKind::bubble_tanh) {
    if (!(s.w > 0.0)) throw ConfigError("scenario.w must be positive");
    if (!(s.T_top > 0.0)) throw ConfigError("scenario.T_top must be positive");
    if (!(s.T_bottom > 0.0)) throw ConfigError("scenario.T_bottom must be positive");
  }
  if (s.kind == ScenarioKind::custom && !(s.n_init > 0.0)) {
    throw ConfigError("scenario.n_init must be positive for the custom scenario");
  }
  if (c.run.n_steps < 0) throw ConfigError("run.n_steps must be >= 0");
  if (c.run.snapshot_every < 0) throw ConfigError("run.snapshot_every must be >= 0");
}

}  // namespace

Grid GridParams::make() const {
  return has_origin ? Grid::make(nx, ny, lx, ly, x0, y0) : Grid::centered(nx, ny, lx, ly);
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::isolated_square: return "isolated_square";
    case ScenarioKind::bubble_tanh: return "bubble_tanh";
    case ScenarioKind::custom: return "custom";
  }
  return "";
}

std::string to_string(ConvectionMode mode) {
  return mode == ConvectionMode::skew ? "skew" : "upwind";
}

std::string to_string(LinearMethod method) {
  return method == LinearMethod::direct ? "direct" : "bicgstab";
}

ConvectionMode parse_convection(const std::string& text) {
  if (text == "skew") return ConvectionMode::skew;
  if (text == "upwind") return ConvectionMode::upwind;
  throw ConfigError("expected upwind or skew, got '" + text + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  cfg.substance = Substance{};
  auto b = bindings(cfg);
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    const auto it = b.find(key);
    if (it == b.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    try {
      it->second.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [key, binding] : b) {
    if (binding.required && seen.count(key) == 0) {
      throw ConfigError("missing required key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  const auto& s = c.substance;
  os << "substance.name = " << s.name << "\n"
     << "substance.molar_weight = " << fmt(s.molar_weight) << "\n"
     << "substance.T_crit = " << fmt(s.T_crit) << "\n"
     << "substance.P_crit = " << fmt(s.P_crit) << "\n"
     << "substance.acentric = " << fmt(s.acentric) << "\n";
  for (int i = 0; i < 4; ++i) os << "substance.cp_a" << i << " = " << fmt(s.cp_coeffs[i]) << "\n";
  os << "substance.theta0 = " << fmt(s.theta0) << "\n"
     << "substance.T0 = " << fmt(s.T0) << "\n"
     << "substance.P0 = " << fmt(s.P0) << "\n\n";

  os << "grid.nx = " << c.grid.nx << "\n"
     << "grid.ny = " << c.grid.ny << "\n"
     << "grid.Lx = " << fmt(c.grid.lx) << "\n"
     << "grid.Ly = " << fmt(c.grid.ly) << "\n";
  if (c.grid.has_origin) {
    os << "grid.x0 = " << fmt(c.grid.x0) << "\n"
       << "grid.y0 = " << fmt(c.grid.y0) << "\n";
  }
  os << "\n";

  const auto& k = c.scheme;
  os << "scheme.dt = " << fmt(k.dt) << "\n"
     << "scheme.outer_tol = " << fmt(k.outer_tol) << "\n"
     << "scheme.max_outer_iters = " << k.max_outer_iters << "\n"
     << "scheme.linear_tol = " << fmt(k.linear_tol) << "\n"
     << "scheme.linear_solver = " << to_string(k.linear_method) << "\n"
     << "scheme.convection = " << to_string(k.convection) << "\n"
     << "scheme.eta = " << fmt(k.eta) << "\n"
     << "scheme.xi = " << fmt(k.xi) << "\n"
     << "scheme.heat_coeff = " << fmt(k.heat_coeff) << "\n"
     << "scheme.lagged_momentum_temperature = "
     << (k.lagged_momentum_temperature ? "true" : "false") << "\n"
     << "scheme.velocity_floor = " << fmt(k.velocity_floor) << "\n"
     << "scheme.max_rejections = " << k.max_rejections << "\n\n";

  const auto& sc = c.scenario;
  os << "scenario.kind = " << to_string(sc.kind) << "\n"
     << "scenario.r_frac = " << fmt(sc.r_frac) << "\n"
     << "scenario.n_gas = " << fmt(sc.n_gas) << "\n"
     << "scenario.n_liquid = " << fmt(sc.n_liquid) << "\n"
     << "scenario.T_init = " << fmt(sc.T_init) << "\n"
     << "scenario.w = " << fmt(sc.w) << "\n"
     << "scenario.T_top = " << fmt(sc.T_top) << "\n"
     << "scenario.T_bottom = " << fmt(sc.T_bottom) << "\n"
     << "scenario.n_init = " << fmt(sc.n_init) << "\n";
  for (int e = 0; e < 4; ++e) os << kEdgeKeys[e] << " = " << edge_string(sc.bc.temperature[e]) << "\n";
  os << "\n";

  os << "run.n_steps = " << c.run.n_steps << "\n"
     << "run.snapshot_every = " << c.run.snapshot_every << "\n"
     << "run.output_dir = " << c.run.output_dir << "\n";
  return os.str();
}

}  // namespace thermoflow
