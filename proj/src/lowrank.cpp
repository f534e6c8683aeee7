#include "traceinv/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "eigen_support.hpp"
#include "traceinv/rng.hpp"

namespace traceinv {

namespace {

double estimate_sigma_max(const SparseMatrix& a, const SparseMatrix& at) {
    const int n = a.n;
    DenseVector x(n), ax(n);
    RngStream rng(0x5EEDFACEull, 0);
    for (int i = 0; i < n; ++i) x[i] = rng.next_double() - 0.5;
    double norm = 0.0;
    for (int it = 0; it < 60; ++it) {
        matvec(a, x, ax);
        matvec(at, ax, x);  // x <- A^T A x
        norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        if (norm == 0.0) return 0.0;
        for (double& v : x) v /= norm;
    }
    return std::sqrt(norm);
}

LowRankFactors dense_triplets(const SparseMatrix& a, int k) {
    const int n = a.n;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            dense(i, a.col_idx[p]) = a.values[p];
        }
    }
    LowRankFactors f;
    f.n = n;
    f.k = k;
    f.sigma.resize(k);
    f.u_vecs.resize(static_cast<std::size_t>(n) * k);
    f.v_vecs.resize(static_cast<std::size_t>(n) * k);

    if (is_symmetric(a, 0.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("smallest_singular_triplets: dense eigensolver failed");
        }
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return std::abs(es.eigenvalues()(x)) < std::abs(es.eigenvalues()(y));
        });
        for (int j = 0; j < k; ++j) {
            const double lambda = es.eigenvalues()(order[j]);
            f.sigma[j] = std::abs(lambda);
            const double sign = lambda < 0.0 ? -1.0 : 1.0;
            for (int i = 0; i < n; ++i) {
                const double q = es.eigenvectors()(i, order[j]);
                f.v_vecs[static_cast<std::size_t>(j) * n + i] = q;
                f.u_vecs[static_cast<std::size_t>(j) * n + i] = sign * q;
            }
        }
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullU | Eigen::ComputeFullV);
        for (int j = 0; j < k; ++j) {
            const int col = n - 1 - j;  // Eigen sorts descending
            f.sigma[j] = svd.singularValues()(col);
            for (int i = 0; i < n; ++i) {
                f.u_vecs[static_cast<std::size_t>(j) * n + i] = svd.matrixU()(i, col);
                f.v_vecs[static_cast<std::size_t>(j) * n + i] = svd.matrixV()(i, col);
            }
        }
    }
    if (f.sigma[0] <= 0.0) {
        throw std::runtime_error("smallest_singular_triplets: matrix is numerically singular");
    }
    return f;
}

struct RitzCandidate {
    double sigma;
    Eigen::VectorXd u, v;
    double residual;
};

/// Shift-invert Lanczos on A^T A with full reorthogonalization. Converged
/// pairs give the smallest singular values of A.
LowRankFactors lanczos_triplets(const SparseMatrix& a, int k) {
    const int n = a.n;
    const bool symmetric = is_symmetric(a, 0.0);
    const SparseMatrix at = symmetric ? SparseMatrix{} : transpose(a);
    const double sigma_max = estimate_sigma_max(a, symmetric ? a : at);
    const double rtol = kTripletResidualTol * sigma_max;

    Eigen::SparseMatrix<double> sp = detail::to_eigen_sparse(a);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sp);
    if (lu.info() != Eigen::Success) {
        throw std::runtime_error(
            "smallest_singular_triplets: sparse factorization failed (singular matrix?)");
    }

    // op(x) = A^-1 x for symmetric A, else (A^T A)^-1 x
    auto apply_op = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        if (symmetric) return lu.solve(x);
        Eigen::VectorXd z = lu.adjoint().solve(x);
        return lu.solve(z);
    };

    const int maxdim = std::min(n, 2 * k + 100);
    Eigen::MatrixXd basis(n, maxdim);
    std::vector<double> alpha, beta;  // tridiagonal entries of T

    RngStream rng(0xA5C3D1ull, 1);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = rng.next_double() - 0.5;
    q.normalize();
    basis.col(0) = q;

    int m = 1;
    double worst_residual = std::numeric_limits<double>::infinity();

    auto extract = [&](std::vector<RitzCandidate>& out) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        // largest |theta| of the inverted operator map to the smallest
        // singular values of A
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return std::abs(es.eigenvalues()(x)) > std::abs(es.eigenvalues()(y));
        });
        out.clear();
        for (int j = 0; j < std::min(k, m); ++j) {
            const double theta = es.eigenvalues()(order[j]);
            if (theta == 0.0) break;
            RitzCandidate c;
            c.v = basis.leftCols(m) * es.eigenvectors().col(order[j]);
            c.v.normalize();
            Eigen::VectorXd av(n);
            matvec(a, std::span<const double>(c.v.data(), n), std::span<double>(av.data(), n));
            if (symmetric) {
                const double lambda = 1.0 / theta;
                c.sigma = std::abs(lambda);
                c.u = (lambda < 0.0 ? -1.0 : 1.0) * c.v;
                c.residual = (av - lambda * c.v).norm();
            } else {
                c.sigma = 1.0 / std::sqrt(theta);
                c.u = av / av.norm();
                Eigen::VectorXd atu(n);
                matvec(at, std::span<const double>(c.u.data(), n),
                       std::span<double>(atu.data(), n));
                c.residual = std::max((av - c.sigma * c.u).norm(),
                                      (atu - c.sigma * c.v).norm());
            }
            out.push_back(std::move(c));
        }
    };

    std::vector<RitzCandidate> ritz;
    while (true) {
        Eigen::VectorXd w = apply_op(basis.col(m - 1));
        double av = basis.col(m - 1).dot(w);
        alpha.push_back(av);
        // two-pass reorthogonalization against the whole basis
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd proj = basis.leftCols(m).transpose() * w;
            w.noalias() -= basis.leftCols(m) * proj;
        }
        double b = w.norm();

        const bool check_now = m >= std::min(maxdim, k + 5) &&
                               (m % 10 == 0 || m == maxdim || b <= 1e-13);
        if (check_now) {
            extract(ritz);
            if (static_cast<int>(ritz.size()) == k) {
                worst_residual = 0.0;
                for (const auto& c : ritz) {
                    worst_residual = std::max(worst_residual, c.residual);
                }
                if (worst_residual <= rtol) break;
            }
        }
        if (m == maxdim) {
            throw std::runtime_error(
                "smallest_singular_triplets: no convergence at basis size " +
                std::to_string(m) + ", worst residual " + std::to_string(worst_residual) +
                " (target " + std::to_string(rtol) + ")");
        }
        if (b <= 1e-13) {
            // invariant subspace hit; restart with a fresh orthogonal direction
            for (int i = 0; i < n; ++i) w(i) = rng.next_double() - 0.5;
            for (int pass = 0; pass < 2; ++pass) {
                Eigen::VectorXd proj = basis.leftCols(m).transpose() * w;
                w.noalias() -= basis.leftCols(m) * proj;
            }
            b = w.norm();
            if (b <= 1e-13) {
                extract(ritz);
                break;  // full space resolved
            }
        }
        beta.push_back(b);
        basis.col(m) = w / b;
        ++m;
    }

    if (static_cast<int>(ritz.size()) < k) {
        throw std::runtime_error("smallest_singular_triplets: only " +
                                 std::to_string(ritz.size()) + " of " + std::to_string(k) +
                                 " triplets resolved");
    }
    std::stable_sort(ritz.begin(), ritz.end(),
                     [](const RitzCandidate& x, const RitzCandidate& y) {
                         return x.sigma < y.sigma;
                     });

    LowRankFactors f;
    f.n = n;
    f.k = k;
    f.sigma.resize(k);
    f.u_vecs.resize(static_cast<std::size_t>(n) * k);
    f.v_vecs.resize(static_cast<std::size_t>(n) * k);
    for (int j = 0; j < k; ++j) {
        f.sigma[j] = ritz[j].sigma;
        for (int i = 0; i < n; ++i) {
            f.u_vecs[static_cast<std::size_t>(j) * n + i] = ritz[j].u(i);
            f.v_vecs[static_cast<std::size_t>(j) * n + i] = ritz[j].v(i);
        }
    }
    if (f.sigma[0] <= 0.0) {
        throw std::runtime_error("smallest_singular_triplets: nonpositive singular value");
    }
    return f;
}

}  // namespace

LowRankFactors smallest_singular_triplets(const SparseMatrix& a, int k, int dense_limit) {
    validate(a);
    if (k < 1 || k > a.n) {
        throw std::invalid_argument("smallest_singular_triplets: need 1 <= k <= n");
    }
    if (a.n <= dense_limit || k >= a.n / 2) {
        return dense_triplets(a, k);
    }
    return lanczos_triplets(a, k);
}

LowRankFactors truncate(const LowRankFactors& f, int k) {
    if (k < 1 || k > f.k) {
        throw std::invalid_argument("lowrank truncate: need 1 <= k <= f.k");
    }
    LowRankFactors out;
    out.n = f.n;
    out.k = k;
    out.sigma.assign(f.sigma.begin(), f.sigma.begin() + k);
    out.u_vecs.assign(f.u_vecs.begin(), f.u_vecs.begin() + static_cast<std::size_t>(f.n) * k);
    out.v_vecs.assign(f.v_vecs.begin(), f.v_vecs.begin() + static_cast<std::size_t>(f.n) * k);
    return out;
}

DiagApprox diag_from_lowrank(const LowRankFactors& f) {
    if (f.k < 1) {
        throw std::invalid_argument("diag_from_lowrank: need at least one triplet");
    }
    DenseVector m(f.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < f.n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < f.k; ++j) {
            sum += f.v(i, j) * f.u(i, j) / f.sigma[j];
        }
        m[i] = sum;
    }
    return make_diag_approx(std::move(m), ApproxSource::svd);
}

DenseVector apply_inverse(const LowRankFactors& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.n) {
        throw std::invalid_argument("lowrank apply_inverse: dimension mismatch");
    }
    DenseVector coeff(f.k, 0.0);
    for (int j = 0; j < f.k; ++j) {
        double dot = 0.0;
        for (int i = 0; i < f.n; ++i) dot += f.u(i, j) * x[i];
        coeff[j] = dot / f.sigma[j];
    }
    DenseVector y(f.n, 0.0);
    for (int j = 0; j < f.k; ++j) {
        for (int i = 0; i < f.n; ++i) y[i] += f.v(i, j) * coeff[j];
    }
    return y;
}

DenseVector inverse_column(const LowRankFactors& f, int i) {
    if (i < 0 || i >= f.n) {
        throw std::invalid_argument("lowrank inverse_column: index out of range");
    }
    DenseVector y(f.n, 0.0);
    for (int j = 0; j < f.k; ++j) {
        const double c = f.u(i, j) / f.sigma[j];
        for (int r = 0; r < f.n; ++r) y[r] += f.v(r, j) * c;
    }
    return y;
}

DenseVector residual_column(const SparseMatrix& a, const LowRankFactors& f,
                            const DenseVector& x_i, int i) {
    if (i < 0 || i >= a.n) {
        throw std::invalid_argument("residual_column: index out of range");
    }
    if (static_cast<int>(x_i.size()) != a.n || f.n != a.n) {
        throw std::invalid_argument("residual_column: dimension mismatch");
    }
    DenseVector z = inverse_column(f, i);
    for (int r = 0; r < a.n; ++r) {
        z[r] = x_i[r] - z[r];
    }
    return z;
}

}  // namespace traceinv
