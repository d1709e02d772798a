#include "thermoflow/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace thermoflow {

namespace {

double half_width(const Grid& g) { return 0.5 * std::min(g.lx, g.ly); }
double mid_x(const Grid& g) { return g.x0 + 0.5 * g.lx; }
double mid_y(const Grid& g) { return g.y0 + 0.5 * g.ly; }

void check_radius(const ScenarioParams& p) {
  if (!(p.r_frac > 0.0 && p.r_frac < 1.0)) {
    throw ConfigError("scenario.r_frac must lie in (0, 1) so that r < L");
  }
}

}  // namespace

Scenario init_isolated_square(const PengRobinson& eos, const Grid& g, const ScenarioParams& p) {
  check_radius(p);
  const double r = p.r_frac * half_width(g);
  CellField n(g, p.n_gas);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (std::abs(g.xc(i) - mid_x(g)) <= r && std::abs(g.yc(j) - mid_y(g)) <= r) {
        n(i, j) = p.n_liquid;
      }
    }
  }
  return {g, BoundarySpec::adiabatic(), make_state(eos, g, std::move(n), CellField(g, p.T_init))};
}

Scenario init_bubble_tanh(const PengRobinson& eos, const Grid& g, const ScenarioParams& p) {
  check_radius(p);
  const double L = half_width(g);
  const double r = p.r_frac * L;
  CellField n(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double d = std::hypot(g.xc(i) - mid_x(g), g.yc(j) - mid_y(g));
      n(i, j) = 0.5 * (p.n_liquid + p.n_gas) +
                0.5 * (p.n_liquid - p.n_gas) * std::tanh(p.w * (d - r) / L);
    }
  }
  BoundarySpec bc = BoundarySpec::adiabatic();
  bc.at(Edge::top) = EdgeCondition::dirichlet(p.T_top);
  bc.at(Edge::bottom) = EdgeCondition::dirichlet(p.T_bottom);
  return {g, bc, make_state(eos, g, std::move(n), CellField(g, p.T_init))};
}

Scenario init_custom(const PengRobinson& eos, const Grid& g, const ScenarioParams& p) {
  return {g, p.bc, make_state(eos, g, CellField(g, p.n_init), CellField(g, p.T_init))};
}

Scenario build_scenario(const PengRobinson& eos, const ScenarioConfig& cfg) {
  const Grid g = cfg.grid.make();
  switch (cfg.scenario.kind) {
    case ScenarioKind::isolated_square: return init_isolated_square(eos, g, cfg.scenario);
    case ScenarioKind::bubble_tanh: return init_bubble_tanh(eos, g, cfg.scenario);
    case ScenarioKind::custom: return init_custom(eos, g, cfg.scenario);
  }
  throw ConfigError("unknown scenario kind");
}

}  // namespace thermoflow
