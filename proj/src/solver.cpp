#include "curveddg/solver.hpp"

#include "curveddg/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <string>

namespace curveddg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

class PreconditionerApply {
public:
    PreconditionerApply(const CsrMatrix& A, const SolverOptions& opt) {
        const std::vector<double> diag = A.diagonal();
        for (int i = 0; i < A.rows; ++i)
            if (!(diag[i] > 0.0))
                throw NotSpdError("matrix has non-positive diagonal entry at row " + std::to_string(i));
        if (opt.preconditioner == Preconditioner::block_jacobi && opt.block_size > 1) {
            block_ = opt.block_size;
            if (A.rows % block_ != 0) throw InvalidParameterError("block size does not divide matrix dimension");
            const int blocks = A.rows / block_;
            factors_.reserve(blocks);
            Eigen::MatrixXd B(block_, block_);
            for (int b = 0; b < blocks; ++b) {
                for (int i = 0; i < block_; ++i)
                    for (int j = 0; j < block_; ++j) B(i, j) = A.at(b * block_ + i, b * block_ + j);
                factors_.emplace_back(B);
                if (factors_.back().info() != Eigen::Success)
                    throw NotSpdError("diagonal block " + std::to_string(b) + " is not positive definite");
            }
        } else {
            inv_diag_.resize(A.rows);
            for (int i = 0; i < A.rows; ++i) inv_diag_[i] = 1.0 / diag[i];
        }
    }

    void apply(std::span<const double> r, std::span<double> z) const {
        if (block_ > 1) {
            for (std::size_t b = 0; b < factors_.size(); ++b) {
                const Eigen::Map<const Eigen::VectorXd> rb(r.data() + b * block_, block_);
                Eigen::Map<Eigen::VectorXd>(z.data() + b * block_, block_) = factors_[b].solve(rb);
            }
        } else {
            for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
        }
    }

private:
    int block_ = 1;
    std::vector<double> inv_diag_;
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors_;
};

// PCG for A d = r from d = 0, until ||r - A d|| <= target (recursive residual).
int pcg(const CsrMatrix& A, const PreconditionerApply& M, std::span<const double> rhs, std::span<double> d,
        double target, int budget) {
    const std::size_t n = rhs.size();
    std::vector<double> r(rhs.begin(), rhs.end()), z(n), p(n), q(n);
    std::fill(d.begin(), d.end(), 0.0);
    M.apply(r, z);
    p = z;
    double rz = dot(r, z);
    int it = 0;
    while (norm2(r) > target && it < budget) {
        A.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) throw NotSpdError("conjugate gradients met a non-positive curvature direction");
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        M.apply(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++it;
    }
    return it;
}

} // namespace

namespace {

// (s, e) with s = fl(a + b) and a + b = s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double z = s - a;
    e = (a - (s - z)) + (b - z);
}

} // namespace

std::vector<double> residual(const CsrMatrix& A, std::span<const double> b, std::span<const double> x) {
    std::vector<double> r(b.size());
    for (int i = 0; i < A.rows; ++i) {
        double s = b[i], c = 0.0;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const double p = -A.val[k] * x[A.col[k]];
            const double pe = std::fma(-A.val[k], x[A.col[k]], -p);
            double e;
            two_sum(s, p, s, e);
            c += e + pe;
        }
        r[i] = s + c;
    }
    return r;
}

double relative_residual(const CsrMatrix& A, const std::vector<double>& b, const std::vector<double>& x) {
    const double rnorm = norm2(residual(A, b, x));
    const double bnorm = norm2(b);
    return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

namespace {

using SparseLdlt = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower>;

// The CSR arrays of a symmetric matrix read as CSC describe the same matrix.
std::unique_ptr<SparseLdlt> factorize(const CsrMatrix& A) {
    const Eigen::Map<const Eigen::SparseMatrix<double>> view(A.rows, A.rows, A.nnz(), A.row_ptr.data(), A.col.data(),
                                                             A.val.data());
    auto f = std::make_unique<SparseLdlt>(view);
    if (f->info() != Eigen::Success) throw ConvergenceError("solve_spd: LDL^T factorization failed", 1.0);
    return f;
}

} // namespace

SolveReport solve_spd(const CsrMatrix& A, const std::vector<double>& b, const SolverOptions& opt) {
    if (!(opt.tol > 0.0 && opt.tol <= 1e-4)) throw InvalidParameterError("solve_spd: tol must lie in (0, 1e-4]");
    if (static_cast<int>(b.size()) != A.rows) throw InvalidParameterError("solve_spd: dimension mismatch");
    const bool direct = opt.method == SolverMethod::ldlt;
    std::unique_ptr<PreconditionerApply> M;
    std::unique_ptr<SparseLdlt> ldlt;
    if (direct) {
        for (int i = 0; i < A.rows; ++i)
            if (!(A.at(i, i) > 0.0)) throw NotSpdError("matrix has non-positive diagonal entry at row " + std::to_string(i));
    } else {
        M = std::make_unique<PreconditionerApply>(A, opt);
    }

    SolveReport report;
    const std::size_t n = b.size();
    report.solution.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return report;
    if (direct) ldlt = factorize(A);

    std::vector<double> r = b, d(n);
    double rel = 1.0;
    double best = rel;
    while (report.sweeps < opt.max_sweeps) {
        if (direct) {
            const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));
            Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(n)) = ldlt->solve(rv);
            ++report.iterations;
        } else {
            const int budget = opt.max_iterations - report.iterations;
            if (budget <= 0) break;
            // Ask a little more of the inner solve than the outer target needs.
            const double target = std::max(0.5 * opt.tol * bnorm, 1e-15 * norm2(r));
            report.iterations += pcg(A, *M, r, d, target, budget);
        }
        ++report.sweeps;
        for (std::size_t i = 0; i < n; ++i) report.solution[i] += d[i];
        r = residual(A, b, report.solution);
        rel = norm2(r) / bnorm;
        best = std::min(best, rel);
        if (rel <= opt.tol) break;
    }
    report.relative_residual = rel;
    if (!(rel <= opt.tol))
        throw ConvergenceError("solve_spd: relative residual " + format_sci(rel) + " above tolerance after " +
                                   std::to_string(report.sweeps) + " sweeps",
                               best);
    return report;
}

SolveReport solve_spd(const SparseSystem& system, const SolverOptions& options) {
    return solve_spd(system.matrix, system.rhs, options);
}

} // namespace curveddg
