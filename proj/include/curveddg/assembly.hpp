#pragma once

#include "curveddg/forms.hpp"
#include "curveddg/metrics.hpp"
#include "curveddg/quadrature.hpp"
#include "curveddg/sparse.hpp"
#include "curveddg/space.hpp"

#include <functional>
#include <span>
#include <vector>

namespace curveddg {

/// Face-uniform penalty parameters: eta1 for the Poisson scheme, eta2..eta4
/// for the jump, normal-derivative jump and tangential-gradient jump terms of
/// the biharmonic scheme.
struct PenaltyConfig {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    double eta4 = 0.0;

    /// eta1 = 10 p^4; eta2 = c_p p^6, eta3 = eta4 = c_p p^4 with c_p = 0.1 for
    /// p = 2 and 10 otherwise.
    static PenaltyConfig defaults(int degree);
};

enum class Problem { poisson, biharmonic };

/// Symmetric interior penalty system for -Delta u = f with homogeneous
/// Dirichlet data. Throws InvalidParameterError for eta1 <= 0.
SparseSystem assemble_poisson(const DGSpace& space, const CurvedMesh& mesh, const PenaltyConfig& penalties,
                              const PointFunction& f, QuadratureDegrees quad = {});

/// Symmetric DG system for Delta^2 u = f with clamped boundary conditions,
/// using the Hessian form plus the curved-face correction C. Requires p >= 2;
/// p = 2 is accepted with a warning on std::clog.
SparseSystem assemble_biharmonic(const DGSpace& space, const CurvedMesh& mesh, const PenaltyConfig& penalties,
                                 const PointFunction& f, QuadratureDegrees quad = {});

SparseSystem assemble(Problem problem, const DGSpace& space, const CurvedMesh& mesh,
                      const PenaltyConfig& penalties, const PointFunction& f, QuadratureDegrees quad = {});

/// Weights of a symmetric quadratic form made of broken element seminorms and
/// penalized face jumps. Face terms are weighted by coefficient * h~_F^power,
/// separately for interior and boundary faces.
struct QuadraticFormWeights {
    struct FaceTerm {
        double interior = 0.0;
        int interior_power = 0;
        double boundary = 0.0;
        int boundary_power = 0;
    };
    double mass = 0.0;  // ||v||_K^2
    double h1 = 0.0;    // |v|_{H^1(K)}^2
    double h2 = 0.0;    // |v|_{H^2(K)}^2
    FaceTerm jump;      // ||[v]||_F^2
    FaceTerm jump_dn;   // ||[dv/dn]||_F^2
    FaceTerm jump_tan;  // ||[grad_T v]||_F^2

    /// |v|_{H^k}^2 + J_k(v, v), the squared h,k norm with C_* = 1.
    static QuadraticFormWeights energy_norm(Problem problem, const PenaltyConfig& penalties);
};

CsrMatrix assemble_quadratic_form(const DGSpace& space, const CurvedMesh& mesh, const QuadraticFormWeights& weights,
                                  QuadratureDegrees quad = {});

/// A function given element-wise through its physical derivatives at the image
/// of a reference point.
using ElementField = std::function<PointDerivs(int element, const Vec2& ref)>;

/// DG function with element-major coefficients.
ElementField dg_field(const DGSpace& space, const std::vector<CurvedMap>& maps, std::span<const double> coefficients);

/// Globally defined function evaluated at physical points.
ElementField analytic_field(const std::vector<CurvedMap>& maps, std::function<PointDerivs(const Vec2&)> fn);

/// The curved-face form C(u, v) summed over interior faces, evaluated by face
/// quadrature from the fields' physical derivatives.
double eval_form_C(const CurvedMesh& mesh, const ElementField& u, const ElementField& v, const EdgeRule& rule);

} // namespace curveddg
