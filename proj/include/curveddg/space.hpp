#pragma once

#include "curveddg/geometry.hpp"
#include "curveddg/mesh.hpp"
#include "curveddg/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace curveddg {

/// Nodal Lagrange basis of degree p on the reference triangle, nodes on the
/// uniform barycentric lattice, in Silvester's product form.
class ReferenceBasis {
public:
    explicit ReferenceBasis(int degree);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    /// Values and reference derivatives (orders 1-3) of every basis function.
    std::vector<PointDerivs> evaluate(const Vec2& ref) const;

private:
    int degree_;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 3>> lattice_;  // barycentric lattice index p * (l0, l1, l2)
};

/// Basis tables over a point set: table[point][basis].
using RefBasisTable = std::vector<std::vector<PointDerivs>>;
RefBasisTable eval_ref_basis(const ReferenceBasis& basis, std::span<const Vec2> points);

/// Discontinuous space of mapped polynomials; dofs are element-major.
class DGSpace {
public:
    DGSpace(int degree, int num_elements);

    int degree() const { return basis_.degree(); }
    int local_size() const { return basis_.size(); }
    int num_elements() const { return num_elements_; }
    int num_dofs() const { return local_size() * num_elements_; }
    int dof(int element, int local) const { return element * local_size() + local; }
    const ReferenceBasis& basis() const { return basis_; }

private:
    ReferenceBasis basis_;
    int num_elements_;
};

/// Chain rule for v = rho o F^{-1}: physical derivatives up to `max_order` from
/// reference derivatives and derivatives of the inverse map.
PointDerivs push_forward(const PointDerivs& ref, const MapDerivatives& map, int max_order = 3);

/// Physical derivatives of every basis function at F_K(ref).
std::vector<PointDerivs> physical_derivatives(const DGSpace& space, const CurvedMap& map, const Vec2& ref,
                                              int max_order = 3);

/// Linear combination sum_j c_j d_j.
PointDerivs combine(std::span<const PointDerivs> basis, std::span<const double> coefficients);

/// Face-trace quantities of one function on one side of a face. Tangential
/// vectors are stored by their component along the face tangent.
struct TraceDerivs {
    PointDerivs phys;
    double normal_derivative = 0.0;           // dv/dn_F
    double tangential = 0.0;                  // grad_T v . tau
    double tangential_laplacian = 0.0;        // Delta_T v
    double tangential_normal_derivative = 0.0;  // grad_T (dv/dn_F) . tau
    double laplacian = 0.0;
    double normal_laplacian_derivative = 0.0;   // d(Delta v)/dn_F
};

/// Trace quantities from reference derivatives on the face curve. `direction`
/// is d(ref point)/dt for the face parameter t; `frame` is the face frame.
TraceDerivs trace_quantities(const PointDerivs& ref, const MapDerivatives& map, const Vec2& direction,
                             const FaceFrame& frame);

/// Reference point and direction on the right element matching parameter t of
/// the left element's edge.
struct EdgeLocation {
    int edge = 0;
    bool reversed = false;
};
EdgeLocation right_edge_location(const Face& face, const std::vector<CurvedMap>& maps);

struct FaceTraces {
    FaceFrame frame;
    std::vector<TraceDerivs> left;
    std::vector<TraceDerivs> right;  // empty on boundary faces
};

FaceTraces trace_derivatives(const DGSpace& space, const Face& face, const std::vector<CurvedMap>& maps, double t);

} // namespace curveddg
