#include "thermoflow/eos.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace thermoflow {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

[[noreturn]] void domain_fail(const std::string& what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  throw DomainError(os.str());
}

void check_temperature(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) domain_fail("temperature must be positive", T);
}

}  // namespace

Substance Substance::n_butane() {
  Substance s;
  s.name = "nC4";
  s.molar_weight = 58.12e-3;
  s.T_crit = 425.2;
  s.P_crit = 38.0e5;
  s.acentric = 0.199;
  s.cp_coeffs = {9.487, 3.313e-1, -1.108e-4, -2.822e-9};
  s.theta0 = -2478.95687512;
  s.T0 = 298.15;
  s.P0 = 1.0e5;
  return s;
}

void validate(const Substance& s) {
  if (!(s.T_crit > 0.0)) domain_fail("substance.T_crit must be positive", s.T_crit);
  if (!(s.P_crit > 0.0)) domain_fail("substance.P_crit must be positive", s.P_crit);
  if (!(s.molar_weight > 0.0)) domain_fail("substance.molar_weight must be positive", s.molar_weight);
  if (!(s.T0 > 0.0)) domain_fail("substance.T0 must be positive", s.T0);
  if (!(s.P0 > 0.0)) domain_fail("substance.P0 must be positive", s.P0);
  for (double T = 200.0; T <= 600.0; T += 1.0) {
    double psi_p = 0.0;
    double Tp = 1.0;
    for (double alpha : s.cp_coeffs) {
      psi_p += alpha * Tp;
      Tp *= T;
    }
    if (!(psi_p - kGasConstant > 0.0)) {
      domain_fail("ideal-gas psi_v must be positive on [200 K, 600 K]; fails at T = " +
                      std::to_string(T) + " K",
                  psi_p - kGasConstant);
    }
  }
}

EosCoeffs derive_coefficients(const Substance& s) {
  if (!(s.T_crit > 0.0)) domain_fail("T_crit must be positive", s.T_crit);
  if (!(s.P_crit > 0.0)) domain_fail("P_crit must be positive", s.P_crit);
  const double w = s.acentric;
  EosCoeffs c;
  if (w <= 0.49) {
    c.m = 0.37464 + 1.54226 * w - 0.26992 * w * w;
  } else {
    c.m = 0.379642 + 1.485030 * w - 0.164423 * w * w + 0.016666 * w * w * w;
  }
  c.b = 0.07780 * kGasConstant * s.T_crit / s.P_crit;
  c.beta1 = -1e-16 / (1.2326 + 1.3757 * w);
  c.beta2 = 1e-16 / (0.9051 + 1.5410 * w);
  c.gas_constant = kGasConstant;
  return c;
}

PengRobinson::PengRobinson(Substance substance)
    : substance_(std::move(substance)), coeffs_(derive_coefficients(substance_)) {
  validate(substance_);
  const double R = coeffs_.gas_constant;
  a_crit_ = 0.45724 * R * R * substance_.T_crit * substance_.T_crit / substance_.P_crit;
  b_two_thirds_ = std::cbrt(coeffs_.b * coeffs_.b);
}

void PengRobinson::check_point(ThermoPoint p) const {
  check_temperature(p.T);
  const double bn = coeffs_.b * p.n;
  if (!(bn > kDensityMargin) || !(bn < 1.0 - kDensityMargin) || !std::isfinite(p.n)) {
    domain_fail("molar density outside (0, 1/b)", p.n);
  }
}

EnergyParam PengRobinson::energy_param(double T) const {
  check_temperature(T);
  const double Tc = substance_.T_crit;
  const double m = coeffs_.m;
  const double alpha = 1.0 + m * (1.0 - std::sqrt(T / Tc));
  const double a = a_crit_ * alpha * alpha;
  const double sqrt_TTc = std::sqrt(T * Tc);
  const double da = -a * m / (alpha * sqrt_TTc);
  const double d2a = m * a * (1.0 + m) / (2.0 * T * sqrt_TTc * alpha * alpha);
  return {a, da, d2a};
}

HeatCapacity PengRobinson::ideal_heat_capacity(double T) const {
  check_temperature(T);
  const auto& al = substance_.cp_coeffs;
  const double psi_p = al[0] + T * (al[1] + T * (al[2] + T * al[3]));
  const double psi_v = psi_p - coeffs_.gas_constant;
  if (!(psi_v > 0.0)) domain_fail("ideal-gas psi_v must be positive (substance data error)", psi_v);
  return {psi_p, psi_v};
}

double PengRobinson::heat_capacity_integral(double T) const {
  const auto& al = substance_.cp_coeffs;
  const double T0 = substance_.T0;
  return al[0] * std::log(T / T0) + al[1] * (T - T0) + al[2] / 2.0 * (T * T - T0 * T0) +
         al[3] / 3.0 * (T * T * T - T0 * T0 * T0);
}

double PengRobinson::log_attraction(double n) const {
  const double bn = coeffs_.b * n;
  // log1p keeps the low-density limit accurate
  return std::log1p((1.0 - kSqrt2) * bn) - std::log1p((1.0 + kSqrt2) * bn);
}

BulkFreeEnergy PengRobinson::f_bulk(ThermoPoint p) const {
  check_point(p);
  const double R = coeffs_.gas_constant;
  const double b = coeffs_.b;
  const auto& al = substance_.cp_coeffs;
  const double T = p.T;
  const double T0 = substance_.T0;
  const double n = p.n;

  double poly = 0.0;
  double Tp = T;
  double T0p = T0;
  for (int i = 0; i < 4; ++i) {
    poly += al[i] * (Tp - T0p) / (i + 1);
    Tp *= T;
    T0p *= T0;
  }
  const double f_ideal = n * substance_.theta0 + n * poly - n * R * (T - T0) -
                         n * R * T * std::log(substance_.P0 / (n * R * T)) -
                         n * T * heat_capacity_integral(T);
  const double f_rep = -n * R * T * std::log1p(-b * n);
  const double a = energy_param(T).a;
  const double f_attr = a * n / (2.0 * kSqrt2 * b) * log_attraction(n);
  return {f_ideal, f_rep, f_attr, f_ideal + f_rep + f_attr};
}

BulkChemicalPotential PengRobinson::mu_bulk(ThermoPoint p) const {
  check_point(p);
  const double R = coeffs_.gas_constant;
  const double b = coeffs_.b;
  const auto& al = substance_.cp_coeffs;
  const double T = p.T;
  const double T0 = substance_.T0;
  const double n = p.n;
  const double RT = R * T;

  double poly = 0.0;
  double Tp = T;
  double T0p = T0;
  for (int i = 0; i < 4; ++i) {
    poly += al[i] * (Tp - T0p) / (i + 1);
    Tp *= T;
    T0p *= T0;
  }
  const double one_minus_bn = 1.0 - b * n;
  const double mu_ideal = substance_.theta0 + poly - R * (T - T0) -
                          RT * std::log(substance_.P0 / (n * RT)) + RT -
                          T * heat_capacity_integral(T);
  const double mu_rep = -RT * std::log1p(-b * n) + n * RT * b / one_minus_bn;
  const double a = energy_param(T).a;
  const double q = 1.0 + 2.0 * b * n - b * b * n * n;
  const double mu_attr = a / (2.0 * kSqrt2 * b) * log_attraction(n) - a * n / q;
  const double dmu_convex = RT / n + RT * b * (2.0 - b * n) / (one_minus_bn * one_minus_bn);
  const double mu_convex = mu_ideal + mu_rep;
  return {mu_convex + mu_attr, mu_convex, mu_attr, dmu_convex};
}

double PengRobinson::dmu_concave_dn(ThermoPoint p) const {
  check_point(p);
  const double b = coeffs_.b;
  const double n = p.n;
  const double a = energy_param(p.T).a;
  const double q = 1.0 + 2.0 * b * n - b * b * n * n;
  return -a / q - a * (1.0 + b * b * n * n) / (q * q);
}

BulkEntropy PengRobinson::gamma_s_bulk(ThermoPoint p) const {
  check_point(p);
  const double R = coeffs_.gas_constant;
  const double b = coeffs_.b;
  const double n = p.n;
  const double T = p.T;
  const double da = energy_param(T).da;
  const double s_b = n * R * std::log1p(-b * n) + n * R * std::log(substance_.P0 / (n * R * T)) +
                     n * heat_capacity_integral(T) -
                     n * da / (2.0 * kSqrt2 * b) * log_attraction(n);
  return {-s_b, s_b};
}

double PengRobinson::internal_energy_bulk(ThermoPoint p) const {
  check_point(p);
  const double R = coeffs_.gas_constant;
  const double b = coeffs_.b;
  const auto& al = substance_.cp_coeffs;
  const double T = p.T;
  const double T0 = substance_.T0;
  const double n = p.n;
  double poly = 0.0;
  double Tp = T;
  double T0p = T0;
  for (int i = 0; i < 4; ++i) {
    poly += al[i] * (Tp - T0p) / (i + 1);
    Tp *= T;
    T0p *= T0;
  }
  const auto [a, da, d2a] = energy_param(T);
  return n * substance_.theta0 + n * poly - n * R * (T - T0) +
         n * (a - T * da) / (2.0 * kSqrt2 * b) * log_attraction(n);
}

double PengRobinson::p_bulk(ThermoPoint p) const {
  return p.n * mu_bulk(p).mu_b - f_bulk(p).f_b;
}

double PengRobinson::p_direct(ThermoPoint p) const {
  check_point(p);
  const double b = coeffs_.b;
  const double n = p.n;
  const double a = energy_param(p.T).a;
  return n * coeffs_.gas_constant * p.T / (1.0 - b * n) - a * n * n / (1.0 + 2.0 * b * n - b * b * n * n);
}

InfluenceParam PengRobinson::influence_param(double T) const {
  const auto [a, da, d2a] = energy_param(T);
  const double Tc = substance_.T_crit;
  const double bracket = coeffs_.beta1 * (1.0 - T / Tc) + coeffs_.beta2;
  const double c = a * b_two_thirds_ * bracket;
  if (!(c > 0.0)) domain_fail("influence parameter c(T) must be positive", c);
  const double dc = da * b_two_thirds_ * bracket - a * b_two_thirds_ * coeffs_.beta1 / Tc;
  const double d2c = d2a * b_two_thirds_ * bracket - 2.0 * da * b_two_thirds_ * coeffs_.beta1 / Tc;
  return {c, dc, d2c};
}

double PengRobinson::concavity_bracket(double T) const {
  check_temperature(T);
  const double Tr = T / substance_.T_crit;
  const double m = coeffs_.m;
  const double b1 = coeffs_.beta1;
  return (1.0 + m) * (b1 * (1.0 - Tr) + coeffs_.beta2) +
         4.0 * b1 * Tr * (1.0 + m * (1.0 - std::sqrt(Tr)));
}

bool PengRobinson::concavity_condition(double T) const { return concavity_bracket(T) <= 0.0; }

double PengRobinson::volumetric_heat_capacity(ThermoPoint p, double grad_n_sq) const {
  check_point(p);
  const double n = p.n;
  const double T = p.T;
  const double psi_v = ideal_heat_capacity(T).psi_v;
  const double d2a = energy_param(T).d2a;
  const double bulk = n * psi_v - T * d2a * n / (2.0 * kSqrt2 * coeffs_.b) * log_attraction(n);
  const double grad = -0.5 * T * influence_param(T).d2c * grad_n_sq;
  const double cv = bulk + grad;
  if (!(cv > 0.0)) domain_fail("volumetric heat capacity must be positive", cv);
  return cv;
}

GradientContributions grad_contributions(const InfluenceParam& c, double grad_n_sq, double T) {
  return {0.5 * c.c * grad_n_sq, 0.5 * c.dc * grad_n_sq, 0.5 * (c.c - T * c.dc) * grad_n_sq,
          -0.5 * T * c.d2c * grad_n_sq};
}

}  // namespace thermoflow
