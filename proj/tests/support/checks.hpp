#ifndef THERMOFLOW_TESTS_CHECKS_HPP_
#define THERMOFLOW_TESTS_CHECKS_HPP_

// Oracle checks shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "thermoflow/eos.hpp"

namespace thermoflow::checks {

// Largest relative deviation of each closed-form derivative from a centred
// finite difference of its parent, over random valid points.
struct DerivativeErrors {
  double mu_b = 0.0;
  double gamma_b = 0.0;
  double da = 0.0;
  double d2a = 0.0;
  double dc = 0.0;
  double d2c = 0.0;
  double heat_capacity = 0.0;
  double theta_identity = 0.0;     // |theta_b - (f_b + T s_b)| / |theta_b|
  double pressure_identity = 0.0;  // |p_bulk - p_direct| / |p|
  double split_f = 0.0;            // |f_ideal + f_rep + f_attr - f_b| / |f_b|
  double split_mu = 0.0;
  int points = 0;
};

// n uniform in [1, 0.95/b], T uniform in [200, 600] K, |grad n|^2 in [0, 1e18].
DerivativeErrors derivative_errors(const PengRobinson& eos, int points, std::uint64_t seed);

struct SweepResult {
  int violations_convex = 0;    // d2(f_ideal + f_rep)/dn2 < 0 or dmu_convex_dn <= 0
  int violations_concave = 0;   // d2 f_attr/dn2 > 0
  int violations_T = 0;         // d2 f_b/dT2 > 0
  int violations_c = 0;         // c'' > 0 where the concavity condition holds
  int violations_cv = 0;        // volumetric heat capacity <= 0
  int points = 0;
};

// 50 x 50 grid over n in (0, 0.95/b), T in [250, 500] K.
SweepResult convexity_sweep(const PengRobinson& eos, int size = 50);

// Number of failures of the concavity condition at `samples` points spread
// over [lo_frac T_c, hi_frac T_c].
int concavity_failures(const PengRobinson& eos, double lo_frac, double hi_frac, int samples);

// Max interior residual of n grad mu - gamma grad T - grad p - div(c grad n (x) grad n)
// on the smooth profiles n = 4700 - 4000 cos(pi x/Lx), T = 345 + 3 cos(pi x/Lx).
double theorem_residual_max(const PengRobinson& eos, int nx);

}  // namespace thermoflow::checks

#endif  // THERMOFLOW_TESTS_CHECKS_HPP_
