#pragma once

#include "curveddg/analysis.hpp"
#include "curveddg/assembly.hpp"
#include "curveddg/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace curveddg {

/// u(x) = g(|x|^2) from g and its first three derivatives at s = |x|^2.
PointDerivs radial_function(const Vec2& x, double g0, double g1, double g2, double g3);

/// u_1 = sin(pi |x|^2) / 4 and f_1 = -Delta u_1.
PointDerivs poisson_exact(const Vec2& x);
double poisson_rhs(const Vec2& x);

/// u_2 = sin^2(pi |x|^2) and f_2 = Delta^2 u_2.
PointDerivs biharmonic_exact(const Vec2& x);
double biharmonic_rhs(const Vec2& x);

struct StudyConfig {
    Problem problem = Problem::poisson;
    int degree = 1;
    int levels = 5;
    double h0 = 0.5;
    std::optional<PenaltyConfig> penalties;  // defaults from the degree when empty
    int quad_degree = 0;                     // 0: min(2p + 4, 20)
    double tol = 1e-10;
    std::uint64_t seed = 20240229;
    Preconditioner preconditioner = Preconditioner::jacobi;
    /// Inner solver; when empty, PCG for Poisson and LDL^T for the biharmonic
    /// problem, whose p = 2 system with the default penalties is indefinite.
    std::optional<SolverMethod> method;

    /// Throws InvalidParameterError on an invalid combination.
    void validate() const;
};

struct LevelResult {
    ErrorRecord errors;
    double relative_residual = 0.0;
    int iterations = 0;
    int sweeps = 0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    StudyConfig config;
    PenaltyConfig penalties;
    std::vector<LevelResult> levels;  // decreasing h
    std::string failure;              // non-empty when a level's solve failed

    /// Error columns written for this problem.
    std::vector<std::string> error_columns() const;
    /// Values of one error column, by level.
    std::vector<double> column(const std::string& name) const;
};

/// Fresh disk mesh per level at target_h = h0 / 2^l; assemble, solve, measure.
/// A solver failure stops the study and is recorded in `failure`.
ConvergenceReport run_convergence(const StudyConfig& config);

/// Solve CSV: level, h, dofs, error columns, then eoc_<column> (blank on the
/// first row). Numbers use 17 significant digits.
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

/// Inequality CSV, one row per level; a trailing comment carries max/min over
/// levels when there are at least two.
void write_inequality_csv(const InequalityReport& report, std::ostream& out);

/// Parsed numeric CSV; empty cells are NaN; lines starting with '#' are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column_index(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

/// Disk levels target_h = h0 / 2^l for l = 0..levels-1.
std::vector<CurvedMesh> disk_levels(double h0, int levels);

} // namespace curveddg
