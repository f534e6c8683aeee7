#include "traceinv/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace traceinv {

double SparseMatrix::at(int i, int j) const {
    const int* begin = col_idx.data() + row_ptr[i];
    const int* end = col_idx.data() + row_ptr[i + 1];
    const int* it = std::lower_bound(begin, end, j);
    if (it != end && *it == j) {
        return values[it - col_idx.data()];
    }
    return 0.0;
}

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> entries) {
    if (n <= 0) {
        throw std::invalid_argument("sparse: order must be positive");
    }
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
            throw std::invalid_argument("sparse: triplet index out of range");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix a;
    a.n = n;
    a.row_ptr.assign(n + 1, 0);
    a.col_idx.reserve(entries.size());
    a.values.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size();) {
        std::size_t k2 = k;
        double sum = 0.0;
        while (k2 < entries.size() && entries[k2].row == entries[k].row &&
               entries[k2].col == entries[k].col) {
            sum += entries[k2].value;
            ++k2;
        }
        a.col_idx.push_back(entries[k].col);
        a.values.push_back(sum);
        a.row_ptr[entries[k].row + 1]++;
        k = k2;
    }
    for (int i = 0; i < n; ++i) {
        a.row_ptr[i + 1] += a.row_ptr[i];
    }
    validate(a);
    return a;
}

void validate(const SparseMatrix& a) {
    if (a.n <= 0) {
        throw std::invalid_argument("sparse: order must be positive");
    }
    if (a.row_ptr.size() != static_cast<std::size_t>(a.n) + 1 || a.row_ptr.front() != 0 ||
        a.row_ptr.back() != a.nnz()) {
        throw std::invalid_argument("sparse: malformed row_ptr");
    }
    if (a.col_idx.size() != a.values.size()) {
        throw std::invalid_argument("sparse: col_idx/values size mismatch");
    }
    for (int i = 0; i < a.n; ++i) {
        if (a.row_ptr[i] > a.row_ptr[i + 1]) {
            throw std::invalid_argument("sparse: row_ptr not nondecreasing");
        }
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            if (a.col_idx[k] < 0 || a.col_idx[k] >= a.n) {
                throw std::invalid_argument("sparse: column index out of range");
            }
            if (k > a.row_ptr[i] && a.col_idx[k] <= a.col_idx[k - 1]) {
                throw std::invalid_argument("sparse: duplicate or unsorted column in row " +
                                            std::to_string(i));
            }
            if (!std::isfinite(a.values[k])) {
                throw std::invalid_argument("sparse: non-finite value");
            }
        }
    }
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (static_cast<int>(x.size()) != a.n || static_cast<int>(y.size()) != a.n) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.n; ++i) {
        double sum = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            sum += a.values[k] * x[a.col_idx[k]];
        }
        y[i] = sum;
    }
}

void matvec_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (static_cast<int>(x.size()) != a.n || static_cast<int>(y.size()) != a.n) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    for (int i = 0; i < a.n; ++i) {
        double sum = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            sum += a.values[k] * x[a.col_idx[k]];
        }
        y[i] = sum;
    }
}

DenseVector matvec(const SparseMatrix& a, const DenseVector& x) {
    DenseVector y(a.n);
    matvec(a, std::span<const double>(x), std::span<double>(y));
    return y;
}

bool is_symmetric(const SparseMatrix& a, double tol) {
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            if (std::abs(a.values[k] - a.at(a.col_idx[k], i)) > tol) {
                return false;
            }
        }
    }
    return true;
}

SparseMatrix transpose(const SparseMatrix& a) {
    SparseMatrix t;
    t.n = a.n;
    t.row_ptr.assign(a.n + 1, 0);
    t.col_idx.resize(a.nnz());
    t.values.resize(a.nnz());
    for (int k = 0; k < a.nnz(); ++k) {
        t.row_ptr[a.col_idx[k] + 1]++;
    }
    for (int i = 0; i < a.n; ++i) {
        t.row_ptr[i + 1] += t.row_ptr[i];
    }
    std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            int pos = next[a.col_idx[k]]++;
            t.col_idx[pos] = i;
            t.values[pos] = a.values[k];
        }
    }
    return t;
}

}  // namespace traceinv
