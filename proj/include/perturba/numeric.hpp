#pragma once

// Scalar plumbing shared by the templated numerics. Everything is written
// against a Real parameter so the same code runs in double and in software
// quad precision; the latter is needed when phases reach ~1e11 rad.

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace perturba {

using QuadReal = boost::multiprecision::cpp_bin_float_quad;

template <class Real>
struct ComplexOf {
  using type = std::complex<Real>;
};

template <>
struct ComplexOf<QuadReal> {
  using type = boost::multiprecision::cpp_complex_quad;
};

template <class Real>
using ComplexT = typename ComplexOf<Real>::type;

using Complex = std::complex<double>;

/// Precision-dependent thresholds of the numerics.
template <class Real>
struct NumericTraits {
  /// Jacobi stops once the off-diagonal Frobenius norm is below this times ||H||_F.
  static Real jacobi_tolerance() { return Real(1e-14); }
  /// Eigenvalues closer than this times ||H||_max count as a tie when ordering.
  static Real tie_tolerance() { return Real(1e-12); }
  /// Allowed imaginary residue of a sum that is real by Hermiticity, relative to sum |terms|.
  static Real hermitian_residue() { return Real(1e-12); }
};

template <>
struct NumericTraits<QuadReal> {
  static QuadReal jacobi_tolerance() { return QuadReal(1e-32); }
  static QuadReal tie_tolerance() { return QuadReal(1e-28); }
  static QuadReal hermitian_residue() { return QuadReal(1e-28); }
};

template <class Real>
Real re(const ComplexT<Real>& z) {
  return z.real();
}

template <class Real>
Real im(const ComplexT<Real>& z) {
  return z.imag();
}

template <class Real>
Real abs2(const ComplexT<Real>& z) {
  const Real a = z.real();
  const Real b = z.imag();
  return a * a + b * b;
}

template <class Real>
Real magnitude(const ComplexT<Real>& z) {
  using std::sqrt;
  return sqrt(abs2<Real>(z));
}

template <class Real>
ComplexT<Real> conjugate(const ComplexT<Real>& z) {
  return ComplexT<Real>(z.real(), -z.imag());
}

/// e^{i angle}
template <class Real>
ComplexT<Real> unit_phase(const Real& angle) {
  using std::cos;
  using std::sin;
  return ComplexT<Real>(cos(angle), sin(angle));
}

template <class Real>
bool is_finite(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return std::isfinite(x);
  } else {
    return static_cast<bool>((boost::multiprecision::isfinite)(x));
  }
}

template <class Real>
bool is_finite(const ComplexT<Real>& z) {
  return is_finite<Real>(z.real()) && is_finite<Real>(z.imag());
}

}  // namespace perturba
