/// @file solver.hpp
/// @brief Exact diagonal samples D_i = e_i^T A^-1 e_i with reusable columns.

#ifndef TRACEINV_SOLVER_HPP
#define TRACEINV_SOLVER_HPP

#include <memory>
#include <span>
#include <vector>

#include "traceinv/dense_oracle.hpp"
#include "traceinv/ilu.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

enum class SolveMethod { automatic, direct, cg, bicgstab };

struct SolveOptions {
    double tol = 1e-10;                 // residual target relative to ||b||
    int max_iters = 0;                  // 0 = choose from the order
    SolveMethod method = SolveMethod::automatic;
    const IluFactors* precond = nullptr;
    int direct_cap = kOracleCap;        // automatic picks the direct path below this
};

struct ColumnSolve {
    int index = -1;
    DenseVector x;           // A^-1 e_index
    double d = 0.0;          // x[index]
    double residual_norm = 0.0;
};

/// One factorization (or preconditioner setup), many right-hand sides.
/// The matrix must outlive the solver.
class LinearSolver {
public:
    LinearSolver(const SparseMatrix& a, SolveOptions opts);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    /// Solves A x = b to ||b - A x|| <= tol * ||b||; throws on failure with
    /// the best residual achieved.
    DenseVector solve(const DenseVector& b) const;

    SolveMethod resolved_method() const { return method_; }

private:
    struct Impl;
    const SparseMatrix* a_;
    SolveOptions opts_;
    SolveMethod method_;
    std::unique_ptr<Impl> impl_;
};

/// Solves the canonical systems A x = e_i for each requested index.
/// Results are returned in input order; indices must be distinct.
std::vector<ColumnSolve> solve_columns(const SparseMatrix& a, std::span<const int> indices,
                                       const SolveOptions& opts = {});

}  // namespace traceinv

#endif
