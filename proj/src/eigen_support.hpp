// Internal Eigen interop helpers shared by the factorization-backed paths.

#ifndef TRACEINV_EIGEN_SUPPORT_HPP
#define TRACEINV_EIGEN_SUPPORT_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "traceinv/sparse_matrix.hpp"

namespace traceinv::detail {

inline Eigen::SparseMatrix<double> to_eigen_sparse(const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nnz());
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            trips.emplace_back(i, a.col_idx[k], a.values[k]);
        }
    }
    Eigen::SparseMatrix<double> m(a.n, a.n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace traceinv::detail

#endif
