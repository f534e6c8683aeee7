/// @file bounds.hpp
/// @brief Robinson-Wathen style elementwise bounds on diag(A^-1).

#ifndef TRACEINV_BOUNDS_HPP
#define TRACEINV_BOUNDS_HPP

#include <utility>

#include "traceinv/diag_approx.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

/// Lower/upper bound vectors on the diagonal of A^-1 for real symmetric A,
/// from estimates of the extreme eigenvalues. Throws on unsymmetric input
/// or estimates incompatible with the matrix (nonpositive denominators).
std::pair<DiagApprox, DiagApprox> variational_bounds(const SparseMatrix& a,
                                                     double lambda_min,
                                                     double lambda_max);

/// Power-iteration estimates (lambda_min, lambda_max) for symmetric A.
std::pair<double, double> estimate_spectrum_range(const SparseMatrix& a, int iters = 200);

}  // namespace traceinv

#endif
