#pragma once

// Dense complex linear algebra for small Hermitian systems: a cyclic Jacobi
// eigensolver and spectral time evolution. This is the exact-solution route
// that the perturbative formulas are checked against.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perturba/errors.hpp"
#include "perturba/numeric.hpp"

namespace perturba {

template <class Real>
class BasicStateVector {
 public:
  using Scalar = ComplexT<Real>;

  BasicStateVector() = default;

  explicit BasicStateVector(std::vector<Scalar> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw InvalidInput("state vector must have positive dimension");
    for (const auto& a : amplitudes_) {
      if (!is_finite<Real>(a)) throw InvalidInput("state vector has a non-finite amplitude");
    }
  }

  /// Unit vector e_k of dimension dim.
  static BasicStateVector basis(std::size_t dim, std::size_t k) {
    if (k >= dim) throw InvalidInput("basis index out of range");
    std::vector<Scalar> a(dim, Scalar(0));
    a[k] = Scalar(1);
    return BasicStateVector(std::move(a));
  }

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  const Scalar& operator[](std::size_t i) const { return amplitudes_[i]; }
  std::span<const Scalar> amplitudes() const noexcept { return amplitudes_; }

  Real norm() const {
    using std::sqrt;
    Real s(0);
    for (const auto& a : amplitudes_) s += abs2<Real>(a);
    return sqrt(s);
  }

 private:
  std::vector<Scalar> amplitudes_;
};

/// <a|b>
template <class Real>
ComplexT<Real> inner(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  ComplexT<Real> s(0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += conjugate<Real>(a[i]) * b[i];
  return s;
}

/// General square complex matrix, row-major. Used for basis changes and
/// tensor products; Hermitian operators live in BasicHermitianMatrix.
template <class Real>
class BasicDenseMatrix {
 public:
  using Scalar = ComplexT<Real>;

  BasicDenseMatrix() = default;
  explicit BasicDenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Scalar(0)) {}
  BasicDenseMatrix(std::size_t dim, std::vector<Scalar> row_major) : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim_ * dim_) throw DimensionMismatch(dim_ * dim_, data_.size());
  }

  static BasicDenseMatrix identity(std::size_t dim) {
    BasicDenseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = Scalar(1);
    return m;
  }

  /// Matrix whose k-th column is columns[k].
  static BasicDenseMatrix from_columns(std::span<const BasicStateVector<Real>> columns) {
    const std::size_t n = columns.size();
    BasicDenseMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (columns[k].dim() != n) throw DimensionMismatch(n, columns[k].dim());
      for (std::size_t i = 0; i < n; ++i) m(i, k) = columns[k][i];
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const Scalar> entries() const noexcept { return data_; }

  BasicDenseMatrix adjoint() const {
    BasicDenseMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(j, i) = conjugate<Real>((*this)(i, j));
    return out;
  }

  BasicStateVector<Real> column(std::size_t k) const {
    std::vector<Scalar> v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = (*this)(i, k);
    return BasicStateVector<Real>(std::move(v));
  }

  friend BasicDenseMatrix operator*(const BasicDenseMatrix& a, const BasicDenseMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
    BasicDenseMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Scalar aik = a(i, k);
        for (std::size_t j = 0; j < a.dim_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend BasicDenseMatrix operator+(const BasicDenseMatrix& a, const BasicDenseMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
    BasicDenseMatrix out(a);
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend BasicDenseMatrix operator*(const Scalar& s, const BasicDenseMatrix& a) {
    BasicDenseMatrix out(a);
    for (auto& x : out.data_) x *= s;
    return out;
  }

  friend BasicStateVector<Real> operator*(const BasicDenseMatrix& m, const BasicStateVector<Real>& v) {
    if (m.dim_ != v.dim()) throw DimensionMismatch(m.dim_, v.dim());
    std::vector<Scalar> out(m.dim_, Scalar(0));
    for (std::size_t i = 0; i < m.dim_; ++i)
      for (std::size_t j = 0; j < m.dim_; ++j) out[i] += m(i, j) * v[j];
    return BasicStateVector<Real>(std::move(out));
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Scalar> data_;
};

/// Kronecker product a (x) b.
template <class Real>
BasicDenseMatrix<Real> kron(const BasicDenseMatrix<Real>& a, const BasicDenseMatrix<Real>& b) {
  const std::size_t n = a.dim() * b.dim();
  BasicDenseMatrix<Real> out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l) out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return out;
}

/// Dense complex matrix that is Hermitian. Construction checks
/// |m_ij - conj(m_ji)| <= 1e-13 and |Im m_ii| <= 1e-13, then stores the exact
/// Hermitian part, so entries(i, j) == conj(entries(j, i)) holds bitwise.
template <class Real>
class BasicHermitianMatrix {
 public:
  using Scalar = ComplexT<Real>;

  static Real hermiticity_tolerance() { return Real(1e-13); }

  BasicHermitianMatrix() = default;

  BasicHermitianMatrix(std::size_t dim, std::vector<Scalar> row_major) : dim_(dim), data_(std::move(row_major)) {
    if (dim_ == 0) throw InvalidInput("Hermitian matrix must have positive dimension");
    if (data_.size() != dim_ * dim_) throw DimensionMismatch(dim_ * dim_, data_.size());
    const Real tol = hermiticity_tolerance();
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        if (!is_finite<Real>(at(i, j))) throw InvalidInput("matrix has a non-finite entry");
      }
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      if (abs_real(im<Real>(at(i, i))) > tol)
        throw NonHermitianInput("diagonal entry " + std::to_string(i) + " has an imaginary part");
      at(i, i) = Scalar(re<Real>(at(i, i)), Real(0));
      for (std::size_t j = i + 1; j < dim_; ++j) {
        const Scalar diff = at(i, j) - conjugate<Real>(at(j, i));
        if (magnitude<Real>(diff) > tol)
          throw NonHermitianInput("entries (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") and their transpose are not conjugate");
        const Scalar mean = (at(i, j) + conjugate<Real>(at(j, i))) / Real(2);
        at(i, j) = mean;
        at(j, i) = conjugate<Real>(mean);
      }
    }
  }

  static BasicHermitianMatrix zero(std::size_t dim) {
    return BasicHermitianMatrix(dim, std::vector<Scalar>(dim * dim, Scalar(0)));
  }

  static BasicHermitianMatrix identity(std::size_t dim) {
    std::vector<Real> ones(dim, Real(1));
    return diagonal(ones);
  }

  static BasicHermitianMatrix diagonal(std::span<const Real> values) {
    const std::size_t n = values.size();
    std::vector<Scalar> data(n * n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) data[i * n + i] = Scalar(values[i]);
    return BasicHermitianMatrix(n, std::move(data));
  }

  static BasicHermitianMatrix from_dense(const BasicDenseMatrix<Real>& m) {
    return BasicHermitianMatrix(m.dim(), std::vector<Scalar>(m.entries().begin(), m.entries().end()));
  }

  std::size_t dim() const noexcept { return dim_; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const Scalar> entries() const noexcept { return data_; }

  BasicDenseMatrix<Real> to_dense() const { return BasicDenseMatrix<Real>(dim_, data_); }

  /// max_ij |m_ij|
  Real max_abs() const {
    Real best(0);
    for (const auto& x : data_) best = std::max<Real>(best, magnitude<Real>(x));
    return best;
  }

  Real frobenius_norm() const {
    using std::sqrt;
    Real s(0);
    for (const auto& x : data_) s += abs2<Real>(x);
    return sqrt(s);
  }

  Real trace() const {
    Real s(0);
    for (std::size_t i = 0; i < dim_; ++i) s += re<Real>((*this)(i, i));
    return s;
  }

  /// Copy with every diagonal entry set to zero.
  BasicHermitianMatrix without_diagonal() const {
    BasicHermitianMatrix out(*this);
    for (std::size_t i = 0; i < dim_; ++i) out.at(i, i) = Scalar(0);
    return out;
  }

  BasicHermitianMatrix scaled(const Real& s) const {
    BasicHermitianMatrix out(*this);
    for (auto& x : out.data_) x *= s;
    return out;
  }

  friend BasicHermitianMatrix operator+(const BasicHermitianMatrix& a, const BasicHermitianMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
    BasicHermitianMatrix out(a);
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend BasicStateVector<Real> operator*(const BasicHermitianMatrix& m, const BasicStateVector<Real>& v) {
    if (m.dim_ != v.dim()) throw DimensionMismatch(m.dim_, v.dim());
    std::vector<Scalar> out(m.dim_, Scalar(0));
    for (std::size_t i = 0; i < m.dim_; ++i)
      for (std::size_t j = 0; j < m.dim_; ++j) out[i] += m(i, j) * v[j];
    return BasicStateVector<Real>(std::move(out));
  }

 private:
  static Real abs_real(const Real& x) { return x < Real(0) ? Real(-x) : x; }
  Scalar& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

  std::size_t dim_ = 0;
  std::vector<Scalar> data_;
};

/// Real eigenvalues in ascending order and the unitary matrix whose k-th
/// column is the unit eigenvector of eigenvalues[k]. Each column is scaled so
/// its largest-magnitude component is real and positive.
template <class Real>
struct BasicSpectralDecomposition {
  std::vector<Real> eigenvalues;
  BasicDenseMatrix<Real> eigenvectors;
  int sweeps = 0;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  BasicStateVector<Real> eigenvector(std::size_t k) const { return eigenvectors.column(k); }
};

inline constexpr int kMaxJacobiSweeps = 100;

namespace detail {

template <class Real>
Real off_diagonal_norm(const BasicDenseMatrix<Real>& a) {
  using std::sqrt;
  Real s(0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += abs2<Real>(a(i, j));
  return sqrt(s);
}

// Zeroes a(p,q) with the unitary U = diag(1, conj(e)) * R, where e = a(p,q)/|a(p,q)|
// and R is the real Jacobi rotation of the phase-removed 2x2 block.
template <class Real>
void jacobi_rotate(BasicDenseMatrix<Real>& a, BasicDenseMatrix<Real>& v, std::size_t p, std::size_t q) {
  using C = ComplexT<Real>;
  using std::sqrt;
  const C apq = a(p, q);
  const Real b = magnitude<Real>(apq);
  if (b == Real(0)) return;
  const C e = apq / b;
  const Real app = re<Real>(a(p, p));
  const Real aqq = re<Real>(a(q, q));
  const Real theta = (aqq - app) / (Real(2) * b);
  const Real abs_theta = theta < Real(0) ? Real(-theta) : theta;
  Real t;
  if (abs_theta > Real(1e150)) {
    t = Real(1) / (Real(2) * theta);
  } else {
    t = Real(1) / (abs_theta + sqrt(theta * theta + Real(1)));
    if (theta < Real(0)) t = -t;
  }
  const Real c = Real(1) / sqrt(t * t + Real(1));
  const Real s = t * c;

  const C upp(c);
  const C upq(s);
  const C uqp = conjugate<Real>(e) * Real(-s);
  const C uqq = conjugate<Real>(e) * c;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const C akp = a(k, p);
    const C akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const C apk = a(p, k);
    const C aqk = a(q, k);
    a(p, k) = conjugate<Real>(upp) * apk + conjugate<Real>(uqp) * aqk;
    a(q, k) = conjugate<Real>(upq) * apk + conjugate<Real>(uqq) * aqk;
  }
  a(p, q) = C(0);
  a(q, p) = C(0);
  a(p, p) = C(app - t * b);
  a(q, q) = C(aqq + t * b);

  for (std::size_t k = 0; k < n; ++k) {
    const C vkp = v(k, p);
    const C vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
}

template <class Real>
std::size_t dominant_component(const BasicDenseMatrix<Real>& v, std::size_t column) {
  std::size_t best = 0;
  Real best_mag(-1);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const Real m = abs2<Real>(v(i, column));
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition. Converges when the off-diagonal Frobenius
/// norm drops below NumericTraits::jacobi_tolerance() * ||m||_F; throws
/// ConvergenceFailure after kMaxJacobiSweeps sweeps.
template <class Real>
BasicSpectralDecomposition<Real> eigendecompose(const BasicHermitianMatrix<Real>& m) {
  const std::size_t n = m.dim();
  BasicDenseMatrix<Real> a = m.to_dense();
  BasicDenseMatrix<Real> v = BasicDenseMatrix<Real>::identity(n);
  const Real tol = NumericTraits<Real>::jacobi_tolerance() * m.frobenius_norm();

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > tol) {
    if (sweep == kMaxJacobiSweeps) throw ConvergenceFailure("Jacobi iteration exceeded the sweep cap");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    ++sweep;
  }

  struct Entry {
    Real value;
    std::size_t dominant;
    std::size_t column;
  };
  std::vector<Entry> order;
  order.reserve(n);
  for (std::size_t k = 0; k < n; ++k) order.push_back({re<Real>(a(k, k)), detail::dominant_component(v, k), k});
  std::sort(order.begin(), order.end(), [](const Entry& x, const Entry& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.dominant < y.dominant;
  });
  // Within clusters of (numerically) tied eigenvalues order by dominant index.
  const Real tie = NumericTraits<Real>::tie_tolerance() * std::max<Real>(m.max_abs(), Real(1e-300));
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && order[end].value - order[end - 1].value <= tie) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Entry& x, const Entry& y) { return x.dominant < y.dominant; });
    start = end;
  }

  BasicSpectralDecomposition<Real> out;
  out.sweeps = sweep;
  out.eigenvalues.reserve(n);
  out.eigenvectors = BasicDenseMatrix<Real>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k].column;
    out.eigenvalues.push_back(order[k].value);
    const ComplexT<Real> pivot = v(order[k].dominant, src);
    const ComplexT<Real> phase = conjugate<Real>(pivot) / magnitude<Real>(pivot);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
    const std::size_t d = order[k].dominant;
    out.eigenvectors(d, k) = ComplexT<Real>(re<Real>(out.eigenvectors(d, k)), Real(0));
  }
  return out;
}

/// Sum_k exp(-i lambda_k t / hbar) v_k <v_k|psi0>. Returns psi0 unchanged at t == 0.
template <class Real>
BasicStateVector<Real> evolve(const BasicSpectralDecomposition<Real>& dec, const BasicStateVector<Real>& psi0,
                              const Real& t, const Real& hbar) {
  const std::size_t n = dec.dim();
  if (psi0.dim() != n) throw DimensionMismatch(n, psi0.dim());
  if (!(hbar > Real(0))) throw InvalidInput("hbar must be positive");
  if (!is_finite<Real>(t)) throw InvalidInput("time must be finite");
  if (t == Real(0)) return psi0;
  using C = ComplexT<Real>;
  std::vector<C> out(n, C(0));
  for (std::size_t k = 0; k < n; ++k) {
    C overlap(0);
    for (std::size_t i = 0; i < n; ++i) overlap += conjugate<Real>(dec.eigenvectors(i, k)) * psi0[i];
    const C weight = overlap * unit_phase<Real>(Real(-dec.eigenvalues[k] * t / hbar));
    for (std::size_t i = 0; i < n; ++i) out[i] += dec.eigenvectors(i, k) * weight;
  }
  return BasicStateVector<Real>(std::move(out));
}

/// <bra|m|ket>
template <class Real>
ComplexT<Real> matrix_element(const BasicStateVector<Real>& bra, const BasicHermitianMatrix<Real>& m,
                              const BasicStateVector<Real>& ket) {
  if (bra.dim() != m.dim()) throw DimensionMismatch(m.dim(), bra.dim());
  return inner(bra, m * ket);
}

using StateVector = BasicStateVector<double>;
using DenseMatrix = BasicDenseMatrix<double>;
using HermitianMatrix = BasicHermitianMatrix<double>;
using SpectralDecomposition = BasicSpectralDecomposition<double>;

extern template class BasicStateVector<double>;
extern template class BasicDenseMatrix<double>;
extern template class BasicHermitianMatrix<double>;
extern template BasicSpectralDecomposition<double> eigendecompose(const BasicHermitianMatrix<double>&);
extern template BasicStateVector<double> evolve(const BasicSpectralDecomposition<double>&,
                                                const BasicStateVector<double>&, const double&, const double&);

extern template class BasicStateVector<QuadReal>;
extern template class BasicDenseMatrix<QuadReal>;
extern template class BasicHermitianMatrix<QuadReal>;
extern template BasicSpectralDecomposition<QuadReal> eigendecompose(const BasicHermitianMatrix<QuadReal>&);
extern template BasicStateVector<QuadReal> evolve(const BasicSpectralDecomposition<QuadReal>&,
                                                  const BasicStateVector<QuadReal>&, const QuadReal&,
                                                  const QuadReal&);

}  // namespace perturba
