#pragma once

// Improved perturbation scheme for a finite-dimensional problem given in the
// eigenbasis of the unperturbed Hamiltonian H0 = diag(e0) with perturbation h1.
//
// The full Hamiltonian is redivided into its diagonal d = e0 + diag(h1) and the
// strictly off-diagonal coupling g1. Energy corrections G(2), G(3), G(4) are
// path sums over g1 with gaps of d in the denominators; the improved energy of
// level b is d_b + G_b(2) + G_b(3) + G_b(4).

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "perturba/errors.hpp"
#include "perturba/numeric.hpp"
#include "perturba/specmath.hpp"

namespace perturba {

template <class Real>
class BasicPerturbationProblem {
 public:
  BasicPerturbationProblem(std::vector<Real> e0, BasicHermitianMatrix<Real> h1)
      : e0_(std::move(e0)), h1_(std::move(h1)) {
    if (e0_.empty()) throw InvalidInput("perturbation problem must have positive dimension");
    if (e0_.size() != h1_.dim()) throw DimensionMismatch(e0_.size(), h1_.dim());
    for (const auto& e : e0_) {
      if (!is_finite<Real>(e)) throw InvalidInput("unperturbed energy is not finite");
    }
  }

  std::size_t dim() const noexcept { return e0_.size(); }
  std::span<const Real> e0() const noexcept { return e0_; }
  const BasicHermitianMatrix<Real>& h1() const noexcept { return h1_; }

  /// diag(e0) + h1
  BasicHermitianMatrix<Real> hamiltonian() const { return BasicHermitianMatrix<Real>::diagonal(e0_) + h1_; }

 private:
  std::vector<Real> e0_;
  BasicHermitianMatrix<Real> h1_;
};

template <class Real>
struct BasicRedividedProblem {
  std::vector<Real> e0;  // unperturbed energies E_b
  std::vector<Real> d;   // (H0')_bb = E_b + h1_bb
  BasicHermitianMatrix<Real> g1;  // zero diagonal

  std::size_t dim() const noexcept { return d.size(); }
};

template <class Real>
struct BasicImprovedSpectrum {
  int order = 4;
  std::vector<std::array<Real, 3>> g_terms;  // (G2, G3, G4) per level; zeros above `order`
  std::vector<Real> energies;

  std::size_t dim() const noexcept { return energies.size(); }
};

template <class Real>
struct BasicTransitionResult {
  std::size_t gamma = 0;
  std::size_t beta = 0;
  Real probability{0};
  /// omega t / (2 hbar) for the closed formulas; unset for the spectral route,
  /// which superposes several frequencies.
  std::optional<Real> angular_argument;
};

inline constexpr double kDegeneracyTolerance = 1e-15;
inline constexpr int kMaxOrder = 4;

namespace detail {

template <class Real>
Real abs_real(const Real& x) {
  return x < Real(0) ? Real(-x) : x;
}

template <class Real>
Real max_abs(std::span<const Real> v) {
  Real m(0);
  for (const auto& x : v) m = std::max<Real>(m, abs_real(x));
  return m;
}

template <class Real>
bool degenerate(std::span<const Real> energies, std::size_t a, std::size_t b) {
  return abs_real<Real>(energies[a] - energies[b]) <= Real(kDegeneracyTolerance) * max_abs(energies);
}

template <class Real>
void check_level(const BasicRedividedProblem<Real>& r, std::size_t level) {
  if (level >= r.dim()) throw InvalidInput("level index out of range");
}

// Gap d_b - d_k, or DegenerateDenominator if it vanishes.
template <class Real>
Real gap(const BasicRedividedProblem<Real>& r, std::size_t b, std::size_t k) {
  if (degenerate<Real>(r.d, b, k)) throw DegenerateDenominator(b, k);
  return r.d[b] - r.d[k];
}

template <class Real>
Real real_part_checked(const ComplexT<Real>& sum, const Real& scale) {
  if (abs_real<Real>(im<Real>(sum)) > NumericTraits<Real>::hermitian_residue() * scale)
    throw NumericalInconsistency("correction sum has a non-negligible imaginary part");
  return re<Real>(sum);
}

template <class Real>
bool is_zero(const ComplexT<Real>& z) {
  return z.real() == Real(0) && z.imag() == Real(0);
}

}  // namespace detail

/// Splits H = diag(e0) + h1 into diag(d) + g1.
template <class Real>
BasicRedividedProblem<Real> redivide(const BasicPerturbationProblem<Real>& p) {
  BasicRedividedProblem<Real> r;
  r.e0.assign(p.e0().begin(), p.e0().end());
  r.d.resize(p.dim());
  for (std::size_t b = 0; b < p.dim(); ++b) r.d[b] = p.e0()[b] + re<Real>(p.h1()(b, b));
  r.g1 = p.h1().without_diagonal();
  return r;
}

/// G_b(2) = sum_{k != b} |g_bk|^2 / (d_b - d_k)
template <class Real>
Real g2(const BasicRedividedProblem<Real>& r, std::size_t beta) {
  detail::check_level(r, beta);
  Real sum(0);
  for (std::size_t k = 0; k < r.dim(); ++k) {
    if (k == beta) continue;
    const Real num = abs2<Real>(r.g1(beta, k));
    if (num == Real(0)) continue;
    sum += num / detail::gap(r, beta, k);
  }
  return sum;
}

/// G_b(3) = sum_{k1,k2} g_{b k1} g_{k1 k2} g_{k2 b} / ((d_b - d_k1)(d_b - d_k2))
template <class Real>
Real g3(const BasicRedividedProblem<Real>& r, std::size_t beta) {
  detail::check_level(r, beta);
  using C = ComplexT<Real>;
  const std::size_t n = r.dim();
  C sum(0);
  Real scale(0);
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    const C a = r.g1(beta, k1);
    if (k1 == beta || detail::is_zero<Real>(a)) continue;
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      if (k2 == beta || k2 == k1) continue;
      const C num = a * r.g1(k1, k2) * r.g1(k2, beta);
      if (detail::is_zero<Real>(num)) continue;
      const C term = num / (detail::gap(r, beta, k1) * detail::gap(r, beta, k2));
      sum += term;
      scale += magnitude<Real>(term);
    }
  }
  return detail::real_part_checked<Real>(sum, scale);
}

/// G_b(4): the four-hop path sum with k2 != b, minus
/// sum_{k1,k2} |g_{b k1}|^2 |g_{b k2}|^2 / ((d_b - d_k1)^2 (d_b - d_k2)).
template <class Real>
Real g4(const BasicRedividedProblem<Real>& r, std::size_t beta) {
  detail::check_level(r, beta);
  using C = ComplexT<Real>;
  const std::size_t n = r.dim();
  C sum(0);
  Real scale(0);
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    const C a = r.g1(beta, k1);
    if (k1 == beta || detail::is_zero<Real>(a)) continue;
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      if (k2 == beta || k2 == k1) continue;
      const C ab = a * r.g1(k1, k2);
      if (detail::is_zero<Real>(ab)) continue;
      for (std::size_t k3 = 0; k3 < n; ++k3) {
        if (k3 == beta || k3 == k2) continue;
        const C num = ab * r.g1(k2, k3) * r.g1(k3, beta);
        if (detail::is_zero<Real>(num)) continue;
        const C term =
            num / (detail::gap(r, beta, k1) * detail::gap(r, beta, k2) * detail::gap(r, beta, k3));
        sum += term;
        scale += magnitude<Real>(term);
      }
    }
  }

  Real renorm(0);
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    const Real w1 = abs2<Real>(r.g1(beta, k1));
    if (k1 == beta || w1 == Real(0)) continue;
    const Real gap1 = detail::gap(r, beta, k1);
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      const Real w2 = abs2<Real>(r.g1(beta, k2));
      if (k2 == beta || w2 == Real(0)) continue;
      const Real term = w1 * w2 / (gap1 * gap1 * detail::gap(r, beta, k2));
      renorm += term;
      scale += detail::abs_real(term);
    }
  }
  return detail::real_part_checked<Real>(sum, scale) - renorm;
}

/// Improved energies d_b + sum_{k=2..order} G_b(k); order 1 returns d.
template <class Real>
BasicImprovedSpectrum<Real> improved_energies(const BasicRedividedProblem<Real>& r, int order = kMaxOrder) {
  if (order < 1 || order > kMaxOrder) throw InvalidInput("truncation order must be in 1..4");
  BasicImprovedSpectrum<Real> s;
  s.order = order;
  s.g_terms.assign(r.dim(), {Real(0), Real(0), Real(0)});
  s.energies = r.d;
  for (std::size_t b = 0; b < r.dim(); ++b) {
    auto& g = s.g_terms[b];
    if (order >= 2) g[0] = g2(r, b);
    if (order >= 3) g[1] = g3(r, b);
    if (order >= 4) g[2] = g4(r, b);
    s.energies[b] = r.d[b] + g[0] + g[1] + g[2];
  }
  return s;
}

namespace detail {

template <class Real>
void check_transition(const BasicRedividedProblem<Real>& r, std::size_t gamma, std::size_t beta) {
  check_level(r, gamma);
  check_level(r, beta);
  if (gamma == beta) throw InvalidInput("transition requires distinct levels");
}

// Unperturbed gap E_gamma - E_beta; degenerate only matters with nonzero coupling.
template <class Real>
Real unperturbed_gap(const BasicRedividedProblem<Real>& r, std::size_t gamma, std::size_t beta) {
  if (!is_zero<Real>(r.g1(gamma, beta)) && degenerate<Real>(r.e0, gamma, beta))
    throw DegenerateDenominator(gamma, beta);
  return r.e0[gamma] - r.e0[beta];
}

template <class Real>
BasicTransitionResult<Real> sine_squared_transition(const BasicRedividedProblem<Real>& r, std::size_t gamma,
                                                    std::size_t beta, const Real& phase_frequency,
                                                    const Real& t, const Real& hbar) {
  using std::sin;
  if (!(hbar > Real(0))) throw InvalidInput("hbar must be positive");
  const Real omega = unperturbed_gap(r, gamma, beta);
  BasicTransitionResult<Real> out;
  out.gamma = gamma;
  out.beta = beta;
  const Real arg = phase_frequency * t / (Real(2) * hbar);
  out.angular_argument = arg;
  const Real coupling = abs2<Real>(r.g1(gamma, beta));
  if (coupling == Real(0)) return out;
  const Real half = omega / Real(2);
  const Real s = sin(arg);
  out.probability = coupling * s * s / (half * half);
  return out;
}

}  // namespace detail

/// c_gamma(t) = g_{gamma beta} / (E_gamma - E_beta) * (1 - exp(i w~ t / hbar)),
/// w~ = E~_gamma - E~_beta. The prefactor uses the unperturbed gap.
template <class Real>
ComplexT<Real> first_order_amplitude(const BasicRedividedProblem<Real>& r, const BasicImprovedSpectrum<Real>& s,
                                     std::size_t gamma, std::size_t beta, const Real& t, const Real& hbar) {
  detail::check_transition(r, gamma, beta);
  if (s.dim() != r.dim()) throw DimensionMismatch(r.dim(), s.dim());
  if (!(hbar > Real(0))) throw InvalidInput("hbar must be positive");
  const ComplexT<Real> g = r.g1(gamma, beta);
  if (detail::is_zero<Real>(g)) return ComplexT<Real>(0);
  const Real omega = detail::unperturbed_gap(r, gamma, beta);
  const Real omega_improved = s.energies[gamma] - s.energies[beta];
  return g / omega * (ComplexT<Real>(1) - unit_phase<Real>(Real(omega_improved * t / hbar)));
}

/// |g|^2 sin^2(w~ t / 2 hbar) / (w / 2)^2 with the improved gap w~ in the phase
/// and the unperturbed gap w in the denominator.
template <class Real>
BasicTransitionResult<Real> transition_probability_improved(const BasicRedividedProblem<Real>& r,
                                                            const BasicImprovedSpectrum<Real>& s,
                                                            std::size_t gamma, std::size_t beta, const Real& t,
                                                            const Real& hbar) {
  detail::check_transition(r, gamma, beta);
  if (s.dim() != r.dim()) throw DimensionMismatch(r.dim(), s.dim());
  return detail::sine_squared_transition<Real>(r, gamma, beta, s.energies[gamma] - s.energies[beta], t, hbar);
}

/// First-order time-dependent result |g|^2 sin^2(w t / 2 hbar) / (w / 2)^2.
template <class Real>
BasicTransitionResult<Real> transition_probability_traditional(const BasicRedividedProblem<Real>& r,
                                                               std::size_t gamma, std::size_t beta, const Real& t,
                                                               const Real& hbar) {
  detail::check_transition(r, gamma, beta);
  return detail::sine_squared_transition<Real>(r, gamma, beta, r.e0[gamma] - r.e0[beta], t, hbar);
}

/// |<phi_gamma| exp(-i H t / hbar) |phi_beta>|^2 from an existing decomposition of H.
template <class Real>
BasicTransitionResult<Real> transition_probability_exact(const BasicSpectralDecomposition<Real>& dec,
                                                         std::size_t gamma, std::size_t beta, const Real& t,
                                                         const Real& hbar) {
  if (gamma >= dec.dim() || beta >= dec.dim()) throw InvalidInput("level index out of range");
  if (gamma == beta) throw InvalidInput("transition requires distinct levels");
  const auto psi = evolve(dec, BasicStateVector<Real>::basis(dec.dim(), beta), t, hbar);
  BasicTransitionResult<Real> out;
  out.gamma = gamma;
  out.beta = beta;
  out.probability = abs2<Real>(psi[gamma]);
  return out;
}

/// Builds H = diag(e0) + h1, decomposes it and evaluates the exact probability.
template <class Real>
BasicTransitionResult<Real> transition_probability_exact(const BasicPerturbationProblem<Real>& p,
                                                         std::size_t gamma, std::size_t beta, const Real& t,
                                                         const Real& hbar) {
  if (gamma >= p.dim() || beta >= p.dim()) throw InvalidInput("level index out of range");
  if (gamma == beta) throw InvalidInput("transition requires distinct levels");
  return transition_probability_exact(eigendecompose(p.hamiltonian()), gamma, beta, t, hbar);
}

using PerturbationProblem = BasicPerturbationProblem<double>;
using RedividedProblem = BasicRedividedProblem<double>;
using ImprovedSpectrum = BasicImprovedSpectrum<double>;
using TransitionResult = BasicTransitionResult<double>;

}  // namespace perturba
