#include "traceinv/dense_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace traceinv {

namespace {

using EigenMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstEigenMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void check_cap(int n, int cap, const char* who) {
    if (n > cap) {
        throw std::invalid_argument(std::string(who) + ": order " + std::to_string(n) +
                                    " exceeds oracle cap " + std::to_string(cap));
    }
}

}  // namespace

double DenseMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

DenseVector DenseMatrix::diagonal() const {
    DenseVector d(n);
    for (int i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

DenseMatrix to_dense(const SparseMatrix& a) {
    DenseMatrix d(a.n);
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            d(i, a.col_idx[k]) = a.values[k];
        }
    }
    return d;
}

DenseMatrix dense_inverse(const DenseMatrix& a, int cap) {
    check_cap(a.n, cap, "dense_inverse");
    ConstEigenMap m(a.a.data(), a.n, a.n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    // rcond-style singularity screen: a zero (or denormal) pivot means the
    // elimination broke down
    const auto& u = lu.matrixLU();
    double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.n; ++i) {
        double p = std::abs(u(i, i));
        max_pivot = std::max(max_pivot, p);
        min_pivot = std::min(min_pivot, p);
    }
    if (!(min_pivot > max_pivot * 1e-300) || max_pivot == 0.0) {
        throw std::runtime_error("dense_inverse: matrix is singular");
    }
    Eigen::MatrixXd inv = lu.inverse();
    DenseMatrix out(a.n);
    EigenMap(out.a.data(), a.n, a.n) = inv;
    return out;
}

DenseMatrix dense_inverse(const SparseMatrix& a, int cap) {
    check_cap(a.n, cap, "dense_inverse");
    return dense_inverse(to_dense(a), cap);
}

DenseVector dense_inverse_diagonal(const SparseMatrix& a, int cap) {
    return dense_inverse(a, cap).diagonal();
}

std::pair<double, double> dense_symmetric_spectrum(const SparseMatrix& a, int cap) {
    check_cap(a.n, cap, "dense_symmetric_spectrum");
    if (!is_symmetric(a, 0.0)) {
        throw std::invalid_argument("dense_symmetric_spectrum: matrix is not symmetric");
    }
    DenseMatrix d = to_dense(a);
    ConstEigenMap m(d.a.data(), d.n, d.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("dense_symmetric_spectrum: eigensolver failed");
    }
    return {es.eigenvalues()(0), es.eigenvalues()(d.n - 1)};
}

}  // namespace traceinv
