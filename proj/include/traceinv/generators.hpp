/// @file generators.hpp
/// @brief Deterministic test-matrix generators on row-major square grids.

#ifndef TRACEINV_GENERATORS_HPP
#define TRACEINV_GENERATORS_HPP

#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

/// 5-point Laplacian of the 2D Poisson problem with Dirichlet boundary on a
/// grid_side x grid_side interior grid: 4 on the diagonal, -1 for neighbors.
SparseMatrix gen_poisson2d(int grid_side);

/// Implicit-Euler heat flow operator I + alpha * L with L the 5-point
/// Laplacian above. Symmetric positive definite and diagonally dominant.
SparseMatrix gen_heatflow(int grid_side, double alpha);

}  // namespace traceinv

#endif
