#include "traceinv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "eigen_support.hpp"

namespace traceinv {

namespace {

double norm2(const DenseVector& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double dot(const DenseVector& a, const DenseVector& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

[[noreturn]] void no_convergence(const char* method, int iters, double best, double target) {
    throw std::runtime_error(std::string(method) + ": no convergence after " +
                             std::to_string(iters) + " iterations, best residual " +
                             std::to_string(best) + " (target " + std::to_string(target) + ")");
}

}  // namespace

struct LinearSolver::Impl {
    Eigen::SparseMatrix<double> sp;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

LinearSolver::LinearSolver(const SparseMatrix& a, SolveOptions opts)
    : a_(&a), opts_(opts) {
    validate(a);
    if (opts_.tol < 1e-14) {
        throw std::invalid_argument("solver: tol must be >= 1e-14");
    }
    if (opts_.max_iters <= 0) {
        opts_.max_iters = std::min(10 * a.n + 100, 50000);
    }
    method_ = opts_.method;
    if (method_ == SolveMethod::automatic) {
        if (a.n <= opts_.direct_cap) {
            method_ = SolveMethod::direct;
        } else {
            method_ = is_symmetric(a, 0.0) ? SolveMethod::cg : SolveMethod::bicgstab;
        }
    }
    if (method_ == SolveMethod::direct) {
        impl_ = std::make_unique<Impl>();
        impl_->sp = detail::to_eigen_sparse(a);
        impl_->lu.compute(impl_->sp);
        if (impl_->lu.info() != Eigen::Success) {
            throw std::runtime_error("solver: sparse LU factorization failed (singular matrix?)");
        }
    }
    if (opts_.precond && opts_.precond->lower.n != a.n) {
        throw std::invalid_argument("solver: preconditioner dimension mismatch");
    }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

DenseVector LinearSolver::solve(const DenseVector& b) const {
    const SparseMatrix& a = *a_;
    const int n = a.n;
    if (static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("solver: rhs dimension mismatch");
    }
    const double bnorm = norm2(b);
    const double target = opts_.tol * (bnorm == 0.0 ? 1.0 : bnorm);

    auto precondition = [&](DenseVector v) {
        if (opts_.precond) apply_inverse(*opts_.precond, std::span<double>(v));
        return v;
    };

    DenseVector x(n, 0.0);

    if (method_ == SolveMethod::direct) {
        Eigen::Map<const Eigen::VectorXd> bm(b.data(), n);
        Eigen::VectorXd sol = impl_->lu.solve(bm);
        std::copy(sol.data(), sol.data() + n, x.begin());
    } else if (method_ == SolveMethod::cg) {
        DenseVector r = b;  // x0 = 0
        DenseVector z = precondition(r);
        DenseVector p = z;
        DenseVector ap(n);
        double rz = dot(r, z);
        double best = norm2(r);
        int it = 0;
        while (best > target) {
            if (it++ >= opts_.max_iters) no_convergence("cg", it, best, target);
            matvec(a, p, ap);
            const double pap = dot(p, ap);
            if (pap == 0.0) no_convergence("cg", it, best, target);
            const double alpha = rz / pap;
            for (int i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            best = norm2(r);
            if (best <= target) break;
            z = precondition(r);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) {
                p[i] = z[i] + beta * p[i];
            }
        }
    } else {  // bicgstab
        DenseVector r = b;  // x0 = 0
        DenseVector rhat = r;
        DenseVector p(n, 0.0), v(n, 0.0), t(n), phat(n), shat(n);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        double best = norm2(r);
        int it = 0;
        while (best > target) {
            if (it++ >= opts_.max_iters) no_convergence("bicgstab", it, best, target);
            const double rho_new = dot(rhat, r);
            if (rho_new == 0.0) no_convergence("bicgstab", it, best, target);
            if (it == 1) {
                p = r;
            } else {
                const double beta = (rho_new / rho) * (alpha / omega);
                for (int i = 0; i < n; ++i) {
                    p[i] = r[i] + beta * (p[i] - omega * v[i]);
                }
            }
            rho = rho_new;
            phat = precondition(p);
            matvec(a, phat, v);
            const double rhat_v = dot(rhat, v);
            if (rhat_v == 0.0) no_convergence("bicgstab", it, best, target);
            alpha = rho / rhat_v;
            DenseVector& s = r;  // s overwrites r
            for (int i = 0; i < n; ++i) s[i] -= alpha * v[i];
            double snorm = norm2(s);
            if (snorm <= target) {
                for (int i = 0; i < n; ++i) x[i] += alpha * phat[i];
                best = snorm;
                break;
            }
            shat = precondition(s);
            matvec(a, shat, t);
            const double tt = dot(t, t);
            if (tt == 0.0) no_convergence("bicgstab", it, snorm, target);
            omega = dot(t, s) / tt;
            if (omega == 0.0) no_convergence("bicgstab", it, snorm, target);
            for (int i = 0; i < n; ++i) {
                x[i] += alpha * phat[i] + omega * shat[i];
                r[i] = s[i] - omega * t[i];
            }
            best = std::min(best, norm2(r));
        }
    }

    // the contract is the true residual, independent of the method
    DenseVector ax(n);
    matvec(a, x, ax);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = b[i] - ax[i];
        res += d * d;
    }
    res = std::sqrt(res);
    if (res > target * 1.0001 + 1e-300) {
        throw std::runtime_error("solver: true residual " + std::to_string(res) +
                                 " exceeds target " + std::to_string(target));
    }
    return x;
}

std::vector<ColumnSolve> solve_columns(const SparseMatrix& a, std::span<const int> indices,
                                       const SolveOptions& opts) {
    std::set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= a.n) {
            throw std::invalid_argument("solve_columns: index out of range");
        }
        if (!seen.insert(i).second) {
            throw std::invalid_argument("solve_columns: duplicate index " + std::to_string(i));
        }
    }
    LinearSolver solver(a, opts);
    const int count = static_cast<int>(indices.size());
    std::vector<ColumnSolve> out(count);

    auto solve_one = [&](int pos) {
        const int idx = indices[pos];
        DenseVector e(a.n, 0.0);
        e[idx] = 1.0;
        DenseVector x = solver.solve(e);
        DenseVector ax(a.n);
        matvec(a, x, ax);
        double res = 0.0;
        for (int i = 0; i < a.n; ++i) {
            const double d = (i == idx ? 1.0 : 0.0) - ax[i];
            res += d * d;
        }
        out[pos] = ColumnSolve{idx, std::move(x), 0.0, std::sqrt(res)};
        out[pos].d = out[pos].x[idx];
    };

    if (solver.resolved_method() == SolveMethod::direct) {
        // Eigen's factor object is shared; keep its solves on one thread
        for (int pos = 0; pos < count; ++pos) solve_one(pos);
    } else {
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
        for (int pos = 0; pos < count; ++pos) {
            try {
                solve_one(pos);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    }
    return out;
}

}  // namespace traceinv
