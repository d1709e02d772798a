#ifndef THERMOFLOW_DIAGNOSTICS_HPP_
#define THERMOFLOW_DIAGNOSTICS_HPP_

#include <stdexcept>
#include <string>

#include "thermoflow/eos.hpp"
#include "thermoflow/grid.hpp"
#include "thermoflow/integrator.hpp"

namespace thermoflow {

struct DiagnosticsRecord {
  long step = 0;
  double time = 0.0;
  double mass = 0.0;  // mol per unit depth
  double H = 0.0;
  double U_scheme = 0.0;
  double U_physical = 0.0;
  double E = 0.0;  // H + U_scheme
  double S = 0.0;
  double first_law_residual = 0.0;
  double entropy_increment = 0.0;
  double boundary_heat = 0.0;  // outward heat over the step, J per unit depth
  int outer_iters = 0;
};

struct Energies {
  double H;
  double U_scheme;
  double U_physical;
  double E;
};

// H = 1/2 sum_f rho_f u_f^2 |V_f| with rho_f the mean of the adjacent cells,
// i.e. squared face velocities split onto cell centres.
Energies energies(const Grid& g, const SimState& state);
double entropy_total(const Grid& g, const SimState& state);
double first_law_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& cur, double dt,
                          double boundary_heat_rate);

// Record for a state; step-to-step fields (residual, increment, heat) are
// filled from prev when given.
DiagnosticsRecord make_record(const Grid& g, const SimState& state,
                              const DiagnosticsRecord* prev = nullptr, double dt = 0.0,
                              double boundary_heat_rate = 0.0, int outer_iters = 0);

// p = p_b - n div(c grad n) - 1/2 c |grad n|^2
CellField pressure_field(const PengRobinson& eos, const Grid& g, const CellField& n,
                         const CellField& T);

// r = n grad mu - gamma grad T - grad p - div(c grad n (x) grad n) with
// centred cell differences. Cells closer than two layers to a wall are zero.
struct TheoremResidual {
  CellField rx;
  CellField ry;
  double max_abs = 0.0;  // over cells with margin >= 2
};
TheoremResidual theorem_residual(const PengRobinson& eos, const Grid& g, const CellField& n,
                                 const CellField& T);

enum class Phase { droplet, bubble };

struct ShapeMetrics {
  double perimeter = 0.0;  // m
  double area = 0.0;       // m^2
  double circularity = 0.0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};

class EmptyPhaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Length of the iso-line n = threshold, by marching squares over cell centres.
double contour_length(const Grid& g, const CellField& n, double threshold);

// Phase region at threshold (n_gas + n_liquid)/2: area from the cell count,
// perimeter from the iso-line, centroid over the region's cells weighted by the
// clamped phase fraction.
ShapeMetrics shape_metrics(const Grid& g, const CellField& n, double n_gas, double n_liquid,
                           Phase phase);

}  // namespace thermoflow

#endif  // THERMOFLOW_DIAGNOSTICS_HPP_
