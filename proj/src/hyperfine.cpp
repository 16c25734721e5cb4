#include "perturba/hyperfine.hpp"

#include <string>

namespace perturba::hyperfine {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) throw InvalidInput(std::string(name) + " must be finite and positive");
}

}  // namespace

void PhysicalConstants::validate() const {
  require_positive(mu_e, "mu_e");
  require_positive(delta_nu_h, "delta_nu_h");
  require_positive(planck_h, "planck_h");
  require_positive(elementary_charge, "elementary_charge");
}

void HyperfineConfig::validate() const {
  constants.validate();
  if (!std::isfinite(b_field) || b_field < 0.0) throw InvalidInput("b_field must be finite and non-negative");
}

bool HyperfineConfig::perturbative() const {
  return constants.mu_e_ev_per_tesla() * b_field < 0.1 * constants.w_ev();
}

FieldSweepCoefficients field_sweep_coefficients(const PhysicalConstants& constants, double t) {
  constants.validate();
  const double w = constants.w_ev();
  const double mu = constants.mu_e_ev_per_tesla();
  const double hbar = constants.hbar_evs();
  const double q = 4.0 * w;
  const double s = t / hbar;
  FieldSweepCoefficients c{};
  c.improved_c0 = 2.0 * w * s;
  c.improved_c2 = mu * mu / q * s;
  c.improved_c4 = -(mu * mu * mu * mu) / (q * q * q) * s;
  c.exact_e0 = 4.0 * w * w * s * s;
  c.exact_e2 = mu * mu * s * s;
  c.denominator_n2 = mu * mu / (4.0 * w * w);
  return c;
}

}  // namespace perturba::hyperfine
