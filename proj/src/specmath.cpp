#include "perturba/specmath.hpp"

namespace perturba {

template class BasicStateVector<double>;
template class BasicDenseMatrix<double>;
template class BasicHermitianMatrix<double>;
template BasicSpectralDecomposition<double> eigendecompose(const BasicHermitianMatrix<double>&);
template BasicStateVector<double> evolve(const BasicSpectralDecomposition<double>&, const BasicStateVector<double>&,
                                         const double&, const double&);

template class BasicStateVector<QuadReal>;
template class BasicDenseMatrix<QuadReal>;
template class BasicHermitianMatrix<QuadReal>;
template BasicSpectralDecomposition<QuadReal> eigendecompose(const BasicHermitianMatrix<QuadReal>&);
template BasicStateVector<QuadReal> evolve(const BasicSpectralDecomposition<QuadReal>&,
                                           const BasicStateVector<QuadReal>&, const QuadReal&, const QuadReal&);

}  // namespace perturba
