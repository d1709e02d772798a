#ifndef THERMOFLOW_CONFIG_HPP_
#define THERMOFLOW_CONFIG_HPP_

// Line-oriented run configuration: `section.key = value`, `#` comments.
// Sections: substance, grid, scheme, scenario, run. Values are SI.

#include <stdexcept>
#include <string>

#include "thermoflow/eos.hpp"
#include "thermoflow/grid.hpp"
#include "thermoflow/integrator.hpp"

namespace thermoflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { isolated_square, bubble_tanh, custom };

struct GridParams {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;  // full extents, m
  double ly = 0.0;
  bool has_origin = false;  // false: domain centred on the origin
  double x0 = 0.0;
  double y0 = 0.0;

  Grid make() const;
};

struct ScenarioParams {
  ScenarioKind kind = ScenarioKind::isolated_square;
  double r_frac = 0.35;
  double n_gas = 358.2996;     // mol/m^3
  double n_liquid = 9058.3724;
  double T_init = 345.0;       // K
  double w = 1.0e5;
  double T_top = 345.0;
  double T_bottom = 348.0;
  double n_init = 0.0;         // custom: uniform density
  BoundarySpec bc;             // custom: per-edge temperature conditions
};

struct RunParams {
  long n_steps = 0;
  long snapshot_every = 0;  // 0: initial and final snapshots only
  std::string output_dir = "out";
};

struct ScenarioConfig {
  Substance substance;
  GridParams grid;
  SchemeConfig scheme;
  ScenarioParams scenario;
  RunParams run;
};

// Throws ConfigError with the line number on syntax errors and the key name
// on validation errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

std::string to_string(ScenarioKind kind);
std::string to_string(ConvectionMode mode);
std::string to_string(LinearMethod method);
ConvectionMode parse_convection(const std::string& text);

}  // namespace thermoflow

#endif  // THERMOFLOW_CONFIG_HPP_
