#pragma once

#include "curveddg/sparse.hpp"

#include <span>
#include <vector>

namespace curveddg {

enum class Preconditioner { jacobi, block_jacobi };

/// Inner solver of the refinement loop: preconditioned conjugate gradients, or
/// a sparse LDL^T factorization reused in every sweep (also handles symmetric
/// indefinite systems).
enum class SolverMethod { pcg, ldlt };

struct SolverOptions {
    double tol = 1e-10;          // on ||b - A x|| / ||b||
    int max_iterations = 400000; // CG iterations summed over all sweeps
    int max_sweeps = 5;          // iterative refinement sweeps
    Preconditioner preconditioner = Preconditioner::jacobi;
    int block_size = 1;          // diagonal block size for block_jacobi
    SolverMethod method = SolverMethod::pcg;
};

struct SolveReport {
    std::vector<double> solution;
    double relative_residual = 0.0;
    int iterations = 0;
    int sweeps = 0;
};

/// Iterative refinement: each sweep solves A d = r for the current residual r
/// (by PCG or with the LDL^T factors) and updates x += d. Residuals are formed
/// with compensated summation. Throws NotSpdError on a non-positive diagonal
/// entry, or when PCG meets a non-positive curvature direction, and
/// ConvergenceError (carrying the best residual) when the budget is exhausted.
SolveReport solve_spd(const SparseSystem& system, const SolverOptions& options = {});
SolveReport solve_spd(const CsrMatrix& matrix, const std::vector<double>& rhs, const SolverOptions& options = {});

/// b - A x, each row accumulated with error-free transformations so the result
/// is accurate to about one rounding of the exact residual.
std::vector<double> residual(const CsrMatrix& matrix, std::span<const double> rhs, std::span<const double> x);

/// ||b - A x||_2 / ||b||_2 (or ||b - A x|| when b = 0), residual as above.
double relative_residual(const CsrMatrix& matrix, const std::vector<double>& rhs, const std::vector<double>& x);

} // namespace curveddg
