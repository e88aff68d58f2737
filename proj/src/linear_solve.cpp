#include "mrt/linear_solve.hpp"

#include <Eigen/SparseLU>

namespace mrt {

Eigen::VectorXd solve_sparse_lu(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SolveError("sparse LU factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolveError("sparse LU solve failed");
    return x;
}

double max_abs_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& b) {
    return (A * x - b).cwiseAbs().maxCoeff();
}

double relative_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
    double anorm = 0.0;
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            rowsum[it.row()] += std::abs(it.value());
    anorm = rowsum.maxCoeff();
    const double denom = anorm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
    if (denom == 0.0) return max_abs_residual(A, x, b);
    return max_abs_residual(A, x, b) / denom;
}

}  // namespace mrt
