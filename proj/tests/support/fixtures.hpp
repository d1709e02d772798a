#ifndef THERMOFLOW_TESTS_FIXTURES_HPP_
#define THERMOFLOW_TESTS_FIXTURES_HPP_

#include <string>

#include "thermoflow/config.hpp"

namespace thermoflow::fixtures {

// Small isolated droplet at the production cell size (dx = 0.5 nm).
inline ScenarioConfig small_droplet(int cells = 12, long steps = 3) {
  ScenarioConfig cfg;
  cfg.substance = Substance::n_butane();
  cfg.grid.nx = cells;
  cfg.grid.ny = cells;
  cfg.grid.lx = cells * 5e-10;
  cfg.grid.ly = cells * 5e-10;
  cfg.scheme.dt = 3e-13;
  cfg.scenario.kind = ScenarioKind::isolated_square;
  cfg.run.n_steps = steps;
  return cfg;
}

// Small bubble between a hot bottom and a cold top.
inline ScenarioConfig small_bubble(int cells = 12, long steps = 3) {
  ScenarioConfig cfg = small_droplet(cells, steps);
  cfg.scheme.dt = 5e-13;
  cfg.scenario.kind = ScenarioKind::bubble_tanh;
  cfg.scenario.r_frac = 0.45;
  return cfg;
}

}  // namespace thermoflow::fixtures

#endif  // THERMOFLOW_TESTS_FIXTURES_HPP_
