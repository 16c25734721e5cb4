#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "perturba/perturb.hpp"
#include "perturba/specmath.hpp"

namespace testing {

using perturba::Complex;

inline perturba::HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = Complex(scale * u(rng), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z(scale * u(rng), scale * u(rng));
      a[i * n + j] = z;
      a[j * n + i] = std::conj(z);
    }
  }
  return perturba::HermitianMatrix(n, std::move(a));
}

inline perturba::StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(n);
  double norm = 0.0;
  for (auto& z : a) {
    z = Complex(g(rng), g(rng));
    norm += std::norm(z);
  }
  for (auto& z : a) z /= std::sqrt(norm);
  return perturba::StateVector(std::move(a));
}

/// Problem with unperturbed levels spaced at least `min_gap` apart and a
/// perturbation of entries up to `coupling` in magnitude.
inline perturba::PerturbationProblem random_problem(std::mt19937_64& rng, std::size_t n, double coupling,
                                                    double min_gap = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e0(n);
  double level = -0.5 * min_gap * static_cast<double>(n);
  for (auto& e : e0) {
    e = level;
    level += min_gap * (1.0 + u(rng));
  }
  std::shuffle(e0.begin(), e0.end(), rng);
  return perturba::PerturbationProblem(std::move(e0), random_hermitian(rng, n, coupling));
}

/// max |a_ij - b_ij|
inline double max_difference(const perturba::DenseMatrix& a, const perturba::DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
