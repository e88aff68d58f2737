#pragma once

#include <Eigen/Sparse>

#include "mrt/common.hpp"

namespace mrt {

// Sparse direct LU (COLAMD ordering); throws SolveError on factorization
// failure. The systems here are nonsymmetric, so LU is the robust default at
// desk scale (~65k unknowns for the 251x251 grids).
Eigen::VectorXd solve_sparse_lu(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

double max_abs_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& b);

// ||Ax-b||_inf / (||A||_inf ||x||_inf + ||b||_inf)
double relative_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b);

}  // namespace mrt
