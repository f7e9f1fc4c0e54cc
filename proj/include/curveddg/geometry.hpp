#pragma once

#include "curveddg/mesh.hpp"
#include "curveddg/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace curveddg {

/// Reference triangle vertices (0,0), (1,0), (0,1).
Vec2 reference_vertex(int i);

/// Point on local reference edge e at parameter t in [0,1], running from
/// reference vertex e to vertex (e+1)%3.
Vec2 reference_edge_point(int edge, double t);
Vec2 reference_edge_direction(int edge);

/// Derivatives of a curved map F_K and of its inverse at one point.
struct MapDerivatives {
    Mat2 jacobian;          // DF_K
    double det = 0.0;
    Mat2 inverse;           // D(F_K^{-1}) = DF_K^{-1}
    Tensor2x2x2 second;     // second[k](a,b) = d^2 F_k / dx_a dx_b
    Tensor2x2x2 inverse2;   // inverse2[a](i,j) = d^2 (F^{-1})_a / dx_i dx_j
    std::array<Tensor3, 2> inverse3;  // inverse3[a](i,j,l)
};

/// Quadratic (P2) element map from six geometry nodes: three vertices followed by
/// the midpoint nodes of local edges 0, 1, 2.
class CurvedMap {
public:
    CurvedMap() = default;
    explicit CurvedMap(const std::array<Vec2, 6>& nodes);

    const std::array<Vec2, 6>& nodes() const { return nodes_; }

    /// Affine part: B~ x + b~ interpolates the three vertices.
    const Mat2& affine_matrix() const { return affine_; }
    const Vec2& affine_offset() const { return nodes_[0]; }
    bool is_affine() const { return affine_only_; }

    Vec2 map_point(const Vec2& ref) const;
    Mat2 jacobian(const Vec2& ref) const;
    /// Constant second derivative, second[k](a,b).
    const Tensor2x2x2& second_derivative() const { return second_; }

    /// D Phi_K = DF_K - B~ at a reference point.
    Mat2 nonlinear_jacobian(const Vec2& ref) const { return jacobian(ref) - affine_; }

    /// Throws GeometryError when det DF_K <= 1e-14 ||B~||^2.
    MapDerivatives derivatives(const Vec2& ref) const;

    /// Newton inversion of F_K; throws GeometryError when it does not converge.
    Vec2 inverse_point(const Vec2& phys) const;

private:
    std::array<Vec2, 6> nodes_{};
    // F(x,y) = c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2
    Vec2 c0_ = Vec2::Zero(), cx_ = Vec2::Zero(), cy_ = Vec2::Zero();
    Vec2 cxx_ = Vec2::Zero(), cxy_ = Vec2::Zero(), cyy_ = Vec2::Zero();
    Mat2 affine_ = Mat2::Zero();
    Tensor2x2x2 second_{Mat2::Zero(), Mat2::Zero()};
    bool affine_only_ = true;
};

MapDerivatives map_derivatives(const CurvedMap& map, const Vec2& ref);

using Chart = std::function<Vec2(const Vec2&)>;

/// Chart of the unit circle, x -> x/|x|. Throws GeometryError near the origin.
Vec2 disk_chart(const Vec2& x);

/// Builds one P2 map per element, moving each boundary-edge midpoint onto the
/// chart. Every other geometry node keeps its straight position.
std::vector<CurvedMap> curve_boundary(const Mesh& mesh, const FaceSet& faces, const Chart& chart);
std::vector<CurvedMap> curve_boundary(const Mesh& mesh, const Chart& chart);

/// Straight-edge P2 maps (no curving).
std::vector<CurvedMap> affine_maps(const Mesh& mesh);

struct FaceFrame {
    Vec2 point = Vec2::Zero();
    Vec2 tangent = Vec2::Zero();
    Vec2 normal = Vec2::Zero();   // outward from the face's left element
    double metric = 0.0;          // |gamma'(t)|
    double curvature = 0.0;       // H_F = div_T n_F
    Mat2 shape = Mat2::Zero();    // grad_T n_F^T = H_F tau tau^T
};

/// Frame of the face curve gamma(t) = F_K(reference_edge_point(edge, t)) of the
/// left element, t in [0,1].
FaceFrame face_frame(const Face& face, const std::vector<CurvedMap>& maps, double t);
FaceFrame edge_frame(const CurvedMap& map, int local_edge, double t);

/// xi1^T (grad_T n_F^T) xi2.
double q_form(const FaceFrame& frame, const Vec2& xi1, const Vec2& xi2);

} // namespace curveddg
