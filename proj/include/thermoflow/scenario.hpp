#ifndef THERMOFLOW_SCENARIO_HPP_
#define THERMOFLOW_SCENARIO_HPP_

#include "thermoflow/config.hpp"
#include "thermoflow/eos.hpp"
#include "thermoflow/grid.hpp"
#include "thermoflow/integrator.hpp"

namespace thermoflow {

struct Scenario {
  Grid grid;
  BoundarySpec bc;
  SimState state;
};

// Liquid square |x - xm| <= r, |y - ym| <= r (cell-centre test) in gas, with
// r = r_frac * L and L the half-width of the shorter side; adiabatic walls.
Scenario init_isolated_square(const PengRobinson& eos, const Grid& grid, const ScenarioParams& p);

// n = (n_L + n_G)/2 + (n_L - n_G)/2 tanh(w (d - r)/L), d the distance to the
// domain centre. Dirichlet T_top / T_bottom, adiabatic left and right walls.
Scenario init_bubble_tanh(const PengRobinson& eos, const Grid& grid, const ScenarioParams& p);

// Uniform n_init and T_init with the configured wall conditions.
Scenario init_custom(const PengRobinson& eos, const Grid& grid, const ScenarioParams& p);

Scenario build_scenario(const PengRobinson& eos, const ScenarioConfig& cfg);

}  // namespace thermoflow

#endif  // THERMOFLOW_SCENARIO_HPP_
