#ifndef THERMOFLOW_EOS_HPP_
#define THERMOFLOW_EOS_HPP_

// Peng-Robinson thermodynamics of a pure substance.
//
// Free energy densities are per unit volume (J/m^3), molar density n in
// mol/m^3, temperature in K. The bulk free energy is split into
//   f_b = f_ideal + f_rep + f_attr
// where f_ideal + f_rep is convex in n and f_attr is concave in n.

#include <array>
#include <stdexcept>
#include <string>

namespace thermoflow {

inline constexpr double kGasConstant = 8.314462618;  // J/mol/K

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Substance {
  std::string name = "custom";
  double molar_weight = 0.0;  // kg/mol
  double T_crit = 0.0;        // K
  double P_crit = 0.0;        // Pa
  double acentric = 0.0;
  std::array<double, 4> cp_coeffs{};  // psi_p(T) = sum_i cp_coeffs[i] T^i, J/mol/K
  double theta0 = 0.0;                // J/mol
  double T0 = 298.15;                 // K
  double P0 = 1.0e5;                  // Pa

  // n-butane with its ideal-gas heat capacity correlation.
  static Substance n_butane();
};

/// Throws DomainError naming the first violated invariant.
void validate(const Substance& substance);

struct EosCoeffs {
  double m = 0.0;
  double b = 0.0;  // m^3/mol
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gas_constant = kGasConstant;
};

EosCoeffs derive_coefficients(const Substance& substance);

struct ThermoPoint {
  double n;  // mol/m^3
  double T;  // K
};

struct EnergyParam {
  double a;    // Pa m^6/mol^2
  double da;   // per K
  double d2a;  // per K^2
};

struct HeatCapacity {
  double psi_p;
  double psi_v;
};

struct BulkFreeEnergy {
  double f_ideal;
  double f_rep;
  double f_attr;
  double f_b;
};

struct BulkChemicalPotential {
  double mu_b;
  double mu_convex;
  double mu_concave;
  double dmu_convex_dn;
};

struct BulkEntropy {
  double gamma_b;  // df_b/dT
  double s_b;
};

struct InfluenceParam {
  double c;    // J m^5/mol^2
  double dc;   // per K
  double d2c;  // per K^2
};

struct GradientContributions {
  double f_grad;
  double gamma_grad;
  double theta_grad;
  double dtheta_grad_dT;
};

// Relative margin keeping n strictly inside (0, 1/b).
inline constexpr double kDensityMargin = 1e-12;

/// Pure-substance Peng-Robinson model. Immutable after construction.
class PengRobinson {
 public:
  explicit PengRobinson(Substance substance);

  const Substance& substance() const { return substance_; }
  const EosCoeffs& coeffs() const { return coeffs_; }
  double covolume() const { return coeffs_.b; }

  EnergyParam energy_param(double T) const;
  HeatCapacity ideal_heat_capacity(double T) const;
  // int_{T0}^{T} psi_p(xi)/xi dxi, in closed form.
  double heat_capacity_integral(double T) const;

  BulkFreeEnergy f_bulk(ThermoPoint p) const;
  BulkChemicalPotential mu_bulk(ThermoPoint p) const;
  // d mu_concave / dn; always <= 0.
  double dmu_concave_dn(ThermoPoint p) const;
  BulkEntropy gamma_s_bulk(ThermoPoint p) const;
  double internal_energy_bulk(ThermoPoint p) const;
  // n mu_b - f_b
  double p_bulk(ThermoPoint p) const;
  // nRT/(1-bn) - a n^2/(1+2bn-b^2n^2)
  double p_direct(ThermoPoint p) const;

  InfluenceParam influence_param(double T) const;
  bool concavity_condition(double T) const;
  // Left-hand side of the temperature-concavity condition; c'' has its sign.
  double concavity_bracket(double T) const;

  // d theta_b / dT + d theta_grad / dT
  double volumetric_heat_capacity(ThermoPoint p, double grad_n_sq) const;

  void check_point(ThermoPoint p) const;

 private:
  double log_attraction(double n) const;

  Substance substance_;
  EosCoeffs coeffs_;
  double a_crit_;
  double b_two_thirds_;
};

GradientContributions grad_contributions(const InfluenceParam& c, double grad_n_sq, double T);

}  // namespace thermoflow

#endif  // THERMOFLOW_EOS_HPP_
