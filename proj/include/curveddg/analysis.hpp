#pragma once

#include "curveddg/assembly.hpp"
#include "curveddg/metrics.hpp"
#include "curveddg/space.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace curveddg {

/// Exact solution with derivatives up to order 3 at a physical point.
using ExactFunction = std::function<PointDerivs(const Vec2&)>;

/// Errors of a discrete solution against an exact one. The h,k norms use
/// C_* = 1: |e|_{H^k broken}^2 + J_k(e, e).
struct ErrorRecord {
    double h = 0.0;
    int dofs = 0;
    double err_L2 = 0.0;
    double err_H1_broken = 0.0;
    double err_H2_broken = 0.0;
    double err_h1_norm = 0.0;
    double err_h2_norm = 0.0;
    std::vector<double> face_jump_h1;  // J_1(e, e) per face
    std::vector<double> face_jump_h2;  // J_2(e, e) per face
};

/// Error of u_h (element-major coefficients) against `exact`. Interior jumps
/// of e = u - u_h are those of u_h; boundary traces are those of e. The h,2
/// quantities are only computed when the space degree is at least 2 and the
/// biharmonic penalties are set.
ErrorRecord error_norms(const DGSpace& space, const CurvedMesh& mesh, std::span<const double> coefficients,
                        const ExactFunction& exact, const PenaltyConfig& penalties, QuadratureDegrees quad = {});

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}). Throws DomainError for
/// non-positive entries, mismatched lengths or fewer than two entries.
std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs);

/// Least-squares slope of log(errors) against log(hs).
double loglog_slope(std::span<const double> errors, std::span<const double> hs);

/// Local coefficients of the projection of target o F_K onto P^p(K^) in the
/// reference L^2 inner product.
Eigen::VectorXd l2_project(const DGSpace& space, const CurvedMap& map, const PointFunction& target);

/// Element-wise projection on the whole mesh.
std::vector<double> l2_project(const DGSpace& space, const CurvedMesh& mesh, const PointFunction& target);

/// Squared local norms of one element's function: ||v||_K^2, |v|_{H^1(K)}^2,
/// |v|_{H^2(K)}^2 and ||v||_{dK}^2.
struct ElementSeminorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double boundary = 0.0;
};

ElementSeminorms element_seminorms(const DGSpace& space, const CurvedMap& map, std::span<const double> coefficients);

/// Per-level suprema of the ratio families over random DG functions.
struct LevelRatios {
    double h = 0.0;
    double trace = 0.0;
    double inverse_01 = 0.0;
    double inverse_12 = 0.0;
    double inverse_02 = 0.0;
    double discrete_pf = 0.0;          // refined estimate
    double gradient_pf = 0.0;          // refined estimate
    double discrete_pf_samples = 0.0;  // supremum over the random samples only
    double gradient_pf_samples = 0.0;
    double coercivity_poisson = 0.0;     // min A_1(v,v) / ||v||_{h,1}^2
    double coercivity_biharmonic = 0.0;  // min A_2(v,v) / ||v||_{h,2}^2; 0 when p < 2
};

struct InequalityReport {
    int degree = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<LevelRatios> levels;
};

struct InequalityOptions {
    int samples = 100;
    std::uint64_t seed = 20240229;
    /// Inverse iteration steps refining the Poincare-Friedrichs suprema.
    int refinement_steps = 25;
};

/// Empirical constants of the trace, inverse, Poincare-Friedrichs and
/// coercivity estimates. Samples are DG coefficient vectors with i.i.d.
/// uniform[-1, 1] entries from a mt19937_64 stream. The global PF suprema are
/// also refined by inverse iteration started from the first sample, since
/// random vectors are dominated by high-frequency modes. Requires samples >= 50.
InequalityReport verify_inequalities(int degree, std::span<const CurvedMesh> levels, const InequalityOptions& options = {},
                                     const PenaltyConfig* penalties = nullptr);

/// max/min of a positive sequence.
double spread(std::span<const double> values);

/// Terms of the integration-by-parts identity relating the Laplacian and
/// Hessian forms.
struct ConsistencyTerms {
    double laplacian_product = 0.0;   // sum_K <Delta w, Delta v>_K
    double hessian_product = 0.0;     // sum_K <D^2 w, D^2 v>_K
    double form_c = 0.0;              // C(w, v)
    double boundary_remainder = 0.0;  // sum_{F bdry} <Delta w, dv/dn> - <D^2 w n, grad v>

    /// laplacian - hessian - C, which equals the boundary remainder for smooth w.
    double residual() const { return laplacian_product - hessian_product - form_c; }
};

ConsistencyTerms consistency_terms(const CurvedMesh& mesh, const ElementField& w, const ElementField& v,
                                   int element_degree, int face_degree);

} // namespace curveddg
