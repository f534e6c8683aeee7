#include "traceinv/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace traceinv {

namespace {

[[noreturn]] void zero_pivot(int row) {
    throw std::runtime_error("ilu: zero pivot in row " + std::to_string(row));
}

SparseMatrix assemble(int n, const std::vector<std::vector<std::pair<int, double>>>& rows) {
    SparseMatrix m;
    m.n = n;
    m.row_ptr.assign(n + 1, 0);
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    m.col_idx.reserve(total);
    m.values.reserve(total);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, v] : rows[i]) {
            m.col_idx.push_back(j);
            m.values.push_back(v);
        }
        m.row_ptr[i + 1] = static_cast<int>(m.col_idx.size());
    }
    return m;
}

}  // namespace

IluFactors ilu0_factorize(const SparseMatrix& a) {
    validate(a);
    const int n = a.n;
    std::vector<std::vector<std::pair<int, double>>> lrows(n), urows(n);
    // udiag[k] caches the pivot of U row k for the elimination updates
    std::vector<double> udiag(n, 0.0);
    std::map<int, double> work;

    for (int i = 0; i < n; ++i) {
        work.clear();
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            work[a.col_idx[k]] = a.values[k];
        }
        for (auto it = work.begin(); it != work.end() && it->first < i; ++it) {
            const int k = it->first;
            if (udiag[k] == 0.0) zero_pivot(k);
            const double lik = it->second / udiag[k];
            it->second = lik;
            for (const auto& [j, ukj] : urows[k]) {
                if (j <= k) continue;
                auto hit = work.find(j);          // no fill outside pattern(A)
                if (hit != work.end()) hit->second -= lik * ukj;
            }
        }
        lrows[i].reserve(8);
        urows[i].reserve(8);
        for (const auto& [j, v] : work) {
            if (j < i) {
                lrows[i].push_back({j, v});
            } else {
                urows[i].push_back({j, v});
            }
        }
        lrows[i].push_back({i, 1.0});
        if (urows[i].empty() || urows[i].front().first != i || urows[i].front().second == 0.0) {
            zero_pivot(i);
        }
        udiag[i] = urows[i].front().second;
    }

    IluFactors f;
    f.lower = assemble(n, lrows);
    f.upper = assemble(n, urows);
    f.droptol = 0.0;
    return f;
}

IluFactors ilut_factorize(const SparseMatrix& a, double droptol) {
    validate(a);
    if (droptol < 0.0) {
        throw std::invalid_argument("ilut_factorize: droptol must be nonnegative");
    }
    const int n = a.n;
    std::vector<std::vector<std::pair<int, double>>> lrows(n), urows(n);
    std::vector<double> udiag(n, 0.0);
    std::map<int, double> work;

    for (int i = 0; i < n; ++i) {
        work.clear();
        double row_norm = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            work[a.col_idx[k]] = a.values[k];
            row_norm += a.values[k] * a.values[k];
        }
        row_norm = std::sqrt(row_norm);
        const double drop = droptol * row_norm;

        for (auto it = work.begin(); it != work.end() && it->first < i;) {
            const int k = it->first;
            if (udiag[k] == 0.0) zero_pivot(k);
            const double lik = it->second / udiag[k];
            if (droptol > 0.0 && std::abs(lik) < drop) {
                it = work.erase(it);
                continue;
            }
            it->second = lik;
            for (const auto& [j, ukj] : urows[k]) {
                if (j <= k) continue;
                work[j] -= lik * ukj;             // fill allowed
            }
            ++it;
        }

        lrows[i].reserve(8);
        urows[i].reserve(8);
        for (const auto& [j, v] : work) {
            const bool keep = j == i || std::abs(v) >= drop || droptol == 0.0;
            if (!keep) continue;
            if (j < i) {
                lrows[i].push_back({j, v});
            } else {
                urows[i].push_back({j, v});
            }
        }
        lrows[i].push_back({i, 1.0});
        if (urows[i].empty() || urows[i].front().first != i || urows[i].front().second == 0.0) {
            zero_pivot(i);
        }
        udiag[i] = urows[i].front().second;
    }

    IluFactors f;
    f.lower = assemble(n, lrows);
    f.upper = assemble(n, urows);
    f.droptol = droptol;
    return f;
}

void lower_unit_solve(const SparseMatrix& lower, std::span<double> x) {
    for (int i = 0; i < lower.n; ++i) {
        double sum = x[i];
        for (int k = lower.row_ptr[i]; k < lower.row_ptr[i + 1]; ++k) {
            const int j = lower.col_idx[k];
            if (j < i) sum -= lower.values[k] * x[j];
        }
        x[i] = sum;  // unit diagonal
    }
}

void upper_solve(const SparseMatrix& upper, std::span<double> x) {
    for (int i = upper.n - 1; i >= 0; --i) {
        double sum = x[i];
        double diag = 0.0;
        for (int k = upper.row_ptr[i]; k < upper.row_ptr[i + 1]; ++k) {
            const int j = upper.col_idx[k];
            if (j == i) {
                diag = upper.values[k];
            } else if (j > i) {
                sum -= upper.values[k] * x[j];
            }
        }
        if (diag == 0.0) zero_pivot(i);
        x[i] = sum / diag;
    }
}

DenseVector inverse_column(const IluFactors& f, int i) {
    const int n = f.lower.n;
    if (i < 0 || i >= n) {
        throw std::invalid_argument("ilu inverse_column: index out of range");
    }
    DenseVector x(n, 0.0);
    x[i] = 1.0;
    lower_unit_solve(f.lower, x);
    upper_solve(f.upper, x);
    return x;
}

void apply_inverse(const IluFactors& f, std::span<double> x) {
    lower_unit_solve(f.lower, x);
    upper_solve(f.upper, x);
}

DiagApprox diag_inverse_from_ilu(const IluFactors& f) {
    const int n = f.lower.n;
    DenseVector m(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        m[i] = inverse_column(f, i)[i];
    }
    return make_diag_approx(std::move(m), ApproxSource::ilu);
}

DenseVector diag_inverse_from_ilu_serial(const IluFactors& f) {
    const int n = f.lower.n;
    DenseVector m(n);
    for (int i = 0; i < n; ++i) {
        m[i] = inverse_column(f, i)[i];
    }
    return m;
}

DenseVector residual_column(const SparseMatrix& a, const IluFactors& f,
                            const DenseVector& x_i, int i) {
    if (i < 0 || i >= a.n) {
        throw std::invalid_argument("residual_column: index out of range");
    }
    if (static_cast<int>(x_i.size()) != a.n || f.lower.n != a.n) {
        throw std::invalid_argument("residual_column: dimension mismatch");
    }
    DenseVector z = inverse_column(f, i);
    for (int r = 0; r < a.n; ++r) {
        z[r] = x_i[r] - z[r];
    }
    return z;
}

}  // namespace traceinv
