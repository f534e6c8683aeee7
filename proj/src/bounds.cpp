#include "traceinv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "traceinv/rng.hpp"

namespace traceinv {

std::pair<DiagApprox, DiagApprox> variational_bounds(const SparseMatrix& a,
                                                     double lambda_min,
                                                     double lambda_max) {
    validate(a);
    if (!is_symmetric(a, 0.0)) {
        throw std::invalid_argument("variational_bounds: matrix must be symmetric");
    }
    if (!(lambda_min > 0.0) || lambda_min > lambda_max) {
        throw std::invalid_argument("variational_bounds: need 0 < lambda_min <= lambda_max");
    }
    const int n = a.n;
    DenseVector lower(n), upper(n);
    for (int i = 0; i < n; ++i) {
        const double aii = a.at(i, i);
        double sii = 0.0;  // squared row norm = (A^2)_ii for symmetric A
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            sii += a.values[k] * a.values[k];
        }

        const double lo_num = (lambda_max - aii) * (lambda_max - aii);
        const double lo_den = lambda_max * (lambda_max * aii - sii);
        double lo = 1.0 / lambda_max;
        if (lo_num != 0.0) {
            if (!(lo_den > 0.0)) {
                throw std::invalid_argument(
                    "variational_bounds: lambda_max estimate incompatible at entry " +
                    std::to_string(i));
            }
            lo += lo_num / lo_den;
        }

        const double up_num = (aii - lambda_min) * (aii - lambda_min);
        const double up_den = lambda_min * (sii - lambda_min * aii);
        double up = 1.0 / lambda_min;
        if (up_num != 0.0) {
            if (!(up_den > 0.0)) {
                throw std::invalid_argument(
                    "variational_bounds: lambda_min estimate incompatible at entry " +
                    std::to_string(i));
            }
            up -= up_num / up_den;
        }
        lower[i] = lo;
        upper[i] = up;
    }
    return {make_diag_approx(std::move(lower), ApproxSource::bounds_lower),
            make_diag_approx(std::move(upper), ApproxSource::bounds_upper)};
}

std::pair<double, double> estimate_spectrum_range(const SparseMatrix& a, int iters) {
    validate(a);
    if (!is_symmetric(a, 0.0)) {
        throw std::invalid_argument("estimate_spectrum_range: matrix must be symmetric");
    }
    const int n = a.n;
    const int m = std::min(n, std::max(iters, 8));

    // plain Lanczos with full reorthogonalization; the extreme Ritz values
    // approach the extreme eigenvalues from inside, so each is padded
    // outward by its residual norm |beta_m * s_last| (a rigorous enclosure
    // for symmetric matrices)
    std::vector<DenseVector> basis;
    basis.reserve(m);
    std::vector<double> alpha, beta;
    DenseVector q(n);
    RngStream rng(0xB0D5ull, 2);
    for (int i = 0; i < n; ++i) q[i] = rng.next_double() - 0.5;
    double nrm = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
    for (double& v : q) v /= nrm;
    basis.push_back(q);

    DenseVector w(n);
    double last_beta = 0.0;
    for (int j = 0; j < m; ++j) {
        matvec(a, basis[j], w);
        alpha.push_back(std::inner_product(basis[j].begin(), basis[j].end(), w.begin(), 0.0));
        for (int pass = 0; pass < 2; ++pass) {
            for (const DenseVector& b : basis) {
                double proj = std::inner_product(b.begin(), b.end(), w.begin(), 0.0);
                for (int i = 0; i < n; ++i) w[i] -= proj * b[i];
            }
        }
        last_beta = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (j + 1 == m || last_beta <= 1e-14) break;
        beta.push_back(last_beta);
        DenseVector next(n);
        for (int i = 0; i < n; ++i) next[i] = w[i] / last_beta;
        basis.push_back(std::move(next));
    }

    const int dim = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("estimate_spectrum_range: tridiagonal eigensolver failed");
    }
    const double res_lo = std::abs(last_beta * es.eigenvectors()(dim - 1, 0));
    const double res_hi = std::abs(last_beta * es.eigenvectors()(dim - 1, dim - 1));
    return {es.eigenvalues()(0) - res_lo, es.eigenvalues()(dim - 1) + res_hi};
}

}  // namespace traceinv
