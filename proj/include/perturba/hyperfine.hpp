#pragma once

// Hydrogen ground-state hyperfine levels in a constant magnetic field along +z:
//
//   H = W sigma_e . sigma_p + B mu_e sigma_ez     (proton Zeeman term omitted)
//
// in the coupled basis phi1 = aa, phi2 = (ab + ba)/sqrt2, phi3 = bb,
// phi4 = (ab - ba)/sqrt2 (electron spinor first). Levels are indexed 0..3 for
// phi1..phi4. Energies are in eV, times in s, fields in T.
//
// mu_e is the magnitude of the electron moment; the physical moment is
// negative, the formulas here use the positive magnitude throughout.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "perturba/errors.hpp"
#include "perturba/numeric.hpp"
#include "perturba/perturb.hpp"
#include "perturba/specmath.hpp"

namespace perturba::hyperfine {

inline constexpr std::size_t kPhi1 = 0;
inline constexpr std::size_t kPhi2 = 1;
inline constexpr std::size_t kPhi3 = 2;
inline constexpr std::size_t kPhi4 = 3;

/// CODATA 2002 values (SI), overridable from the CLI config file.
struct PhysicalConstants {
  double mu_e = 9.28476412e-24;              // J/T
  double delta_nu_h = 1.4204057517667e9;     // Hz
  double planck_h = 6.6260693e-34;           // J s
  double elementary_charge = 1.60217653e-19; // C

  /// Throws InvalidInput unless every constant is finite and positive.
  void validate() const;

  double hbar_evs() const { return planck_h / (2.0 * std::numbers::pi * elementary_charge); }
  double mu_e_ev_per_tesla() const { return mu_e / elementary_charge; }
  /// W = h dnu / 4, converted to eV.
  double w_ev() const { return planck_h * delta_nu_h / (4.0 * elementary_charge); }
};

struct HyperfineConfig {
  PhysicalConstants constants;
  double b_field = 1e-3;  // T

  void validate() const;
  /// mu_e B < 0.1 W
  bool perturbative() const;
};

/// W, Zeeman energy x = mu_e B and hbar in the working precision.
template <class Real>
struct ModelParameters {
  Real w;
  Real zeeman;
  Real hbar;
};

template <class Real>
ModelParameters<Real> parameters(const HyperfineConfig& cfg) {
  cfg.validate();
  const auto& k = cfg.constants;
  const Real e(k.elementary_charge);
  const Real pi = boost::math::constants::pi<Real>();
  ModelParameters<Real> p;
  p.w = Real(k.planck_h) * Real(k.delta_nu_h) / (Real(4) * e);
  p.zeeman = Real(k.mu_e) / e * Real(cfg.b_field);
  p.hbar = Real(k.planck_h) / (Real(2) * pi * e);
  return p;
}

/// phi1..phi4 in the product basis {aa, ab, ba, bb}.
template <class Real>
std::array<BasicStateVector<Real>, 4> coupled_basis() {
  using C = ComplexT<Real>;
  using std::sqrt;
  const Real h = Real(1) / sqrt(Real(2));
  return {BasicStateVector<Real>({C(1), C(0), C(0), C(0)}), BasicStateVector<Real>({C(0), C(h), C(h), C(0)}),
          BasicStateVector<Real>({C(0), C(0), C(0), C(1)}), BasicStateVector<Real>({C(0), C(h), C(-h), C(0)})};
}

namespace detail {

template <class Real>
std::array<BasicDenseMatrix<Real>, 3> pauli() {
  using C = ComplexT<Real>;
  return {BasicDenseMatrix<Real>(2, {C(0), C(1), C(1), C(0)}),
          BasicDenseMatrix<Real>(2, {C(0), C(Real(0), Real(-1)), C(Real(0), Real(1)), C(0)}),
          BasicDenseMatrix<Real>(2, {C(1), C(0), C(0), C(-1)})};
}

}  // namespace detail

/// sigma_e . sigma_p on the 4-dimensional product space.
template <class Real>
BasicDenseMatrix<Real> spin_coupling_operator() {
  const auto s = detail::pauli<Real>();
  return kron(s[0], s[0]) + kron(s[1], s[1]) + kron(s[2], s[2]);
}

/// sigma_ez (x) 1
template <class Real>
BasicDenseMatrix<Real> electron_sigma_z() {
  return kron(detail::pauli<Real>()[2], BasicDenseMatrix<Real>::identity(2));
}

/// Builds W sigma_e.sigma_p and B mu_e sigma_ez in the product basis and
/// rotates both into the coupled basis. e0 is the diagonal of the rotated H0,
/// which is checked to be diagonal.
template <class Real>
BasicPerturbationProblem<Real> build_problem(const HyperfineConfig& cfg) {
  const auto p = parameters<Real>(cfg);
  using C = ComplexT<Real>;
  const auto basis = coupled_basis<Real>();
  const auto t = BasicDenseMatrix<Real>::from_columns(basis);
  const auto td = t.adjoint();
  const auto h0 = td * (C(p.w) * spin_coupling_operator<Real>()) * t;
  const auto h1 = td * (C(p.zeeman) * electron_sigma_z<Real>()) * t;

  std::vector<Real> e0(4);
  for (std::size_t i = 0; i < 4; ++i) {
    e0[i] = re<Real>(h0(i, i));
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j && magnitude<Real>(h0(i, j)) > Real(1e-12) * p.w)
        throw NumericalInconsistency("coupled basis does not diagonalize sigma_e . sigma_p");
    }
  }
  return BasicPerturbationProblem<Real>(std::move(e0), BasicHermitianMatrix<Real>::from_dense(h1));
}

template <class Real>
struct ExactEigensystem {
  std::array<Real, 4> energies;                   // E^T_1..E^T_4
  std::array<BasicStateVector<Real>, 4> states;   // Psi_1..Psi_4 in the coupled basis
};

/// Closed-form eigenpairs. Psi_2 and Psi_4 mix phi2 and phi4 with coefficients
/// (w42 +/- wT42) and -2 B mu_e, w42 = -4W, wT42 = -2 sqrt(4W^2 + (mu_e B)^2).
template <class Real>
ExactEigensystem<Real> exact_eigensystem_closed_form(const HyperfineConfig& cfg) {
  using std::sqrt;
  using C = ComplexT<Real>;
  const auto p = parameters<Real>(cfg);
  const Real x = p.zeeman;
  const Real root = sqrt(Real(4) * p.w * p.w + x * x);
  const Real w42 = Real(-4) * p.w;
  const Real wt42 = Real(-2) * root;

  ExactEigensystem<Real> out{
      {p.w + x, -p.w + root, p.w - x, -p.w - root},
      {BasicStateVector<Real>::basis(4, kPhi1), BasicStateVector<Real>::basis(4, kPhi2),
       BasicStateVector<Real>::basis(4, kPhi3), BasicStateVector<Real>::basis(4, kPhi4)}};
  if (x == Real(0)) return out;

  // w42 - wT42 = 2 x^2 / (root + 2W), written without cancellation.
  const Real a2 = w42 + wt42;
  const Real a4 = Real(2) * x * x / (root + Real(2) * p.w);
  const Real b = Real(-2) * x;
  const Real n2 = sqrt(a2 * a2 + Real(4) * x * x);
  const Real n4 = sqrt(a4 * a4 + Real(4) * x * x);
  out.states[kPhi2] = BasicStateVector<Real>({C(0), C(a2 / n2), C(0), C(b / n2)});
  out.states[kPhi4] = BasicStateVector<Real>({C(0), C(a4 / n4), C(0), C(b / n4)});
  return out;
}

/// E~_1..E~_4 from the closed expressions.
template <class Real>
std::array<Real, 4> improved_energies_closed_form(const HyperfineConfig& cfg) {
  const auto p = parameters<Real>(cfg);
  const Real x2 = p.zeeman * p.zeeman;
  const Real q = Real(4) * p.w;
  const Real second = x2 / q;
  const Real fourth = x2 * x2 / (q * q * q);
  return {p.w + p.zeeman, p.w + second - fourth, p.w - p.zeeman, Real(-3) * p.w - second + fourth};
}

/// Raw exact probability phi2 -> phi4: (mu_e B)^2 sin^2(wT42 t / 2 hbar) / (wT42 / 2)^2.
template <class Real>
Real exact_transition_closed_form(const HyperfineConfig& cfg, const Real& t) {
  using std::sin;
  using std::sqrt;
  const auto p = parameters<Real>(cfg);
  const Real half = sqrt(Real(4) * p.w * p.w + p.zeeman * p.zeeman);
  const Real s = sin(half * t / p.hbar);
  return p.zeeman * p.zeeman * s * s / (half * half);
}

/// (w42 / 2)^2 / (mu_e B)^2, the factor that maps the raw phi2 -> phi4
/// probabilities onto the dimensionless comparison curves.
template <class Real>
Real normalization_factor(const HyperfineConfig& cfg) {
  const auto p = parameters<Real>(cfg);
  if (p.zeeman == Real(0)) throw InvalidInput("normalization is undefined at zero field");
  const Real half = Real(2) * p.w;
  return half * half / (p.zeeman * p.zeeman);
}

/// Arguments of the three sin^2 curves at time t, and the denominator of the
/// exact curve.
template <class Real>
struct PhaseArguments {
  Real exact;          // sqrt(4W^2 + (mu_e B)^2) t / hbar
  Real improved;       // (2W + (B mu_e)^2/4W - (B mu_e)^4/(4W)^3) t / hbar
  Real traditional;    // 2W t / hbar
  Real exact_denominator;  // 1 + (mu_e B)^2 / 4W^2
};

template <class Real>
PhaseArguments<Real> phase_arguments(const HyperfineConfig& cfg, const Real& t) {
  using std::sqrt;
  const auto p = parameters<Real>(cfg);
  const Real x2 = p.zeeman * p.zeeman;
  const Real q = Real(4) * p.w;
  PhaseArguments<Real> a;
  a.exact = sqrt(Real(4) * p.w * p.w + x2) * t / p.hbar;
  a.improved = (Real(2) * p.w + x2 / q - x2 * x2 / (q * q * q)) * t / p.hbar;
  a.traditional = Real(2) * p.w * t / p.hbar;
  a.exact_denominator = Real(1) + x2 / (Real(4) * p.w * p.w);
  return a;
}

template <class Real>
struct NormalizedProbabilities {
  Real p_exact;
  Real p_improved;
  Real p_traditional;
};

/// The comparison curves pT, pI, p: each raw phi2 -> phi4 probability times
/// normalization_factor().
template <class Real>
NormalizedProbabilities<Real> normalized_probabilities(const HyperfineConfig& cfg, const Real& t) {
  using std::sin;
  if (!is_finite<Real>(t)) throw InvalidInput("time must be finite");
  const auto a = phase_arguments<Real>(cfg, t);
  const Real se = sin(a.exact);
  const Real si = sin(a.improved);
  const Real st = sin(a.traditional);
  return {se * se / a.exact_denominator, si * si, st * st};
}

/// Coefficients of the field-sweep closed forms at fixed t:
///   improved argument = c0 + c2 B^2 + c4 B^4
///   exact argument    = sqrt(e0 + e2 B^2)
///   exact denominator = 1 + n2 B^2
struct FieldSweepCoefficients {
  double improved_c0;
  double improved_c2;
  double improved_c4;
  double exact_e0;
  double exact_e2;
  double denominator_n2;
};

FieldSweepCoefficients field_sweep_coefficients(const PhysicalConstants& constants, double t);

using ExactSolution = ExactEigensystem<double>;

}  // namespace perturba::hyperfine
