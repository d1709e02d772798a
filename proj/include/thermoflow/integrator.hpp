#ifndef THERMOFLOW_INTEGRATOR_HPP_
#define THERMOFLOW_INTEGRATOR_HPP_

// Semi-implicit convex-concave time stepping with an auxiliary velocity,
// solved by the decoupled linearized outer iteration
//   density/chemical potential -> u_star -> momentum -> energy.
//
// Energies are per unit depth (J/m) since the domain is two-dimensional.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoflow/eos.hpp"
#include "thermoflow/grid.hpp"
#include "thermoflow/linear_solve.hpp"

namespace thermoflow {

struct SchemeConfig {
  double dt = 3e-13;  // s
  double outer_tol = 1e-3;
  int max_outer_iters = 10;
  double linear_tol = 1e-10;
  LinearMethod linear_method = LinearMethod::direct;
  ConvectionMode convection = ConvectionMode::skew;
  double eta = 1e-4;         // shear viscosity, Pa s
  double xi = 1e-4;          // volumetric viscosity, Pa s
  double heat_coeff = 0.1;   // Theta, W/m/K
  // false: gamma grad T in the momentum and energy sources uses the previous
  // outer iterate T^{k+1,l}; true: uses T^k.
  bool lagged_momentum_temperature = false;
  // RMS velocity (m/s) below which the velocity change is measured absolutely.
  double velocity_floor = 1e-10;
  int max_rejections = 3;

  double lambda() const { return xi - 2.0 / 3.0 * eta; }
};

/// Throws std::invalid_argument naming the violated invariant.
void validate(const SchemeConfig& cfg);

// Heat conductivity Theta(n, T); constant by default.
using ConductivityFn = std::function<double(double n, double T)>;

struct SimState {
  CellField n;
  CellField T;
  FaceField u;
  double time = 0.0;
  long step_index = 0;

  // Refreshed from (n, T) by refresh_caches.
  CellField rho;
  CellField s;      // total entropy density s_b + s_grad
  CellField gamma;  // -s
  CellField mu;     // mu_b - div(c grad n)
  CellField theta;  // physical internal energy density
  // Linearized internal energy of the accepted iterate; the energy balance of
  // the next step starts from it. Equals theta at t = 0.
  CellField theta_scheme;
};

void refresh_caches(const PengRobinson& eos, const Grid& g, SimState& state);
SimState make_state(const PengRobinson& eos, const Grid& g, CellField n, CellField T);

struct IterationReport {
  int outer_iters = 0;
  bool converged = false;
  std::vector<double> change_n;
  std::vector<double> change_u;
  std::vector<double> change_T;
  std::vector<int> linear_iters;
  bool nonmonotone = false;  // some relative change grew between iterations
  int rejections = 0;
  double dt_used = 0.0;
};

class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-step quantities the diagnostics ledger needs from inside the step.
struct StepLedger {
  double boundary_heat_rate = 0.0;   // outward heat flow at T^{k+1}, W/m
  double boundary_entropy_rate = 0.0;  // same with 1/T weights, W/m/K
  double kinetic_loss = 0.0;   // 1/2 <rho, |u'-u*|^2 + |u*-u^k|^2>, J/m
  double viscous_dissipation = 0.0;  // W/m
};

/// Fields the sub-solves share within one outer iteration.
struct FaceCoefficients {
  FaceField n_face;    // n^k on faces (central, or upwinded in upwind mode)
  FaceField rho_face;  // rho^k on faces (central)
  FaceField s_face;    // s^k on faces (central)
};

class Integrator {
 public:
  Integrator(const PengRobinson& eos, Grid grid, BoundarySpec bc, SchemeConfig cfg,
             ConductivityFn conductivity = {});

  const Grid& grid() const { return grid_; }
  const BoundarySpec& boundary() const { return bc_; }
  const SchemeConfig& config() const { return cfg_; }
  SchemeConfig& mutable_config() { return cfg_; }
  const PengRobinson& eos() const { return eos_; }

  // Step size used by the sub-solves below; outer_iterate sets it per attempt.
  void set_dt(double dt) { dt_ = dt; }
  double dt() const { return dt_; }

  // mu_convex(n^l, T^l) + dmu_convex/dn (n_new - n^l) + mu_concave(n^k, T^l)
  //   - div(c(T^l) grad n_new)
  CellField mu_linearized(const SimState& state_k, const CellField& n_new,
                          const CellField& n_prev, const CellField& T_prev) const;

  FaceCoefficients face_coefficients(const SimState& state_k, const FaceField& u_dir) const;

  // Coupled (n, mu) solve with u_star eliminated. Returns {n, mu}.
  std::pair<CellField, CellField> density_chemical_solve(const SimState& state_k,
                                                         const FaceCoefficients& fc,
                                                         const CellField& n_prev,
                                                         const CellField& T_prev);

  FaceField compute_u_star(const SimState& state_k, const FaceCoefficients& fc,
                           const CellField& mu_new, const CellField& T_used) const;

  FaceField momentum_solve(const SimState& state_k, const FaceCoefficients& fc,
                           const FaceField& u_star, const CellField& mu_new,
                           const CellField& T_used);

  // Returns T^{l+1}; theta_scheme receives the linearized internal energy.
  CellField energy_solve(const SimState& state_k, const FaceCoefficients& fc,
                         const CellField& n_new, const FaceField& u_star, const FaceField& u_new,
                         const CellField& mu_new, const CellField& T_prev,
                         const CellField& T_source, CellField& theta_scheme,
                         StepLedger* ledger = nullptr);

  // One time step with the rejection policy. Throws SolverAbort when dt has
  // been halved max_rejections times without success.
  SimState step(const SimState& state_k, IterationReport& report, StepLedger& ledger);

  // One attempt at the given dt; throws StepRejected on domain violations.
  SimState outer_iterate(const SimState& state_k, double dt, IterationReport& report,
                         StepLedger& ledger);

  CellField conductivity(const SimState& state) const;

 private:
  double dt_ = 0.0;  // dt of the attempt in progress
  const PengRobinson& eos_;
  Grid grid_;
  BoundarySpec bc_;
  SchemeConfig cfg_;
  ConductivityFn conductivity_;
  LinearSolver density_solver_;
  LinearSolver momentum_solver_;
  LinearSolver energy_solver_;
  CellField eta_;
  CellField lambda_;
  SparseMatrix viscous_;
};

}  // namespace thermoflow

#endif  // THERMOFLOW_INTEGRATOR_HPP_
