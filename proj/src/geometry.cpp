#include "curveddg/geometry.hpp"

#include "curveddg/error.hpp"

#include <cmath>
#include <string>

namespace curveddg {

Vec2 reference_vertex(int i) {
    switch (i) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

Vec2 reference_edge_point(int edge, double t) {
    return (1.0 - t) * reference_vertex(edge) + t * reference_vertex((edge + 1) % 3);
}

Vec2 reference_edge_direction(int edge) {
    return reference_vertex((edge + 1) % 3) - reference_vertex(edge);
}

CurvedMap::CurvedMap(const std::array<Vec2, 6>& nodes) : nodes_(nodes) {
    const auto& X = nodes_;
    // Midpoint deviations from the straight edges; exactly zero for straight
    // edges, so affine elements carry no rounding-level curvature.
    const Vec2 d0 = X[3] - 0.5 * (X[0] + X[1]);
    const Vec2 d1 = X[4] - 0.5 * (X[1] + X[2]);
    const Vec2 d2 = X[5] - 0.5 * (X[2] + X[0]);
    c0_ = X[0];
    cx_ = X[1] - X[0] + 4.0 * d0;
    cy_ = X[2] - X[0] + 4.0 * d2;
    cxx_ = -4.0 * d0;
    cyy_ = -4.0 * d2;
    cxy_ = 4.0 * (d1 - d0 - d2);
    affine_.col(0) = X[1] - X[0];
    affine_.col(1) = X[2] - X[0];
    for (int k = 0; k < 2; ++k) {
        second_[k] << 2.0 * cxx_[k], cxy_[k], cxy_[k], 2.0 * cyy_[k];
    }
    const double scale = affine_.norm();
    affine_only_ = cxx_.norm() <= 1e-15 * scale && cyy_.norm() <= 1e-15 * scale && cxy_.norm() <= 1e-15 * scale;
}

Vec2 CurvedMap::map_point(const Vec2& r) const {
    const double x = r.x();
    const double y = r.y();
    return c0_ + x * cx_ + y * cy_ + x * x * cxx_ + x * y * cxy_ + y * y * cyy_;
}

Mat2 CurvedMap::jacobian(const Vec2& r) const {
    Mat2 J;
    J.col(0) = cx_ + 2.0 * r.x() * cxx_ + r.y() * cxy_;
    J.col(1) = cy_ + r.x() * cxy_ + 2.0 * r.y() * cyy_;
    return J;
}

MapDerivatives CurvedMap::derivatives(const Vec2& ref) const {
    MapDerivatives d;
    d.jacobian = jacobian(ref);
    d.det = d.jacobian.determinant();
    const double scale = affine_.squaredNorm();
    if (!(d.det > 1e-14 * scale))
        throw GeometryError("degenerate element map: det DF = " + std::to_string(d.det));
    d.inverse = d.jacobian.inverse();
    d.second = second_;
    const Mat2& G = d.inverse;

    // F(G(x)) = x differentiated twice:
    //   G_{a,ij} = -G_{a,k} F_{k,bc} G_{b,i} G_{c,j}
    // Wk(i,j) = F_{k,bc} G_{b,i} G_{c,j}
    std::array<Mat2, 2> W;
    for (int k = 0; k < 2; ++k) W[k] = G.transpose() * second_[k] * G;
    for (int a = 0; a < 2; ++a) d.inverse2[a] = -(G(a, 0) * W[0] + G(a, 1) * W[1]);

    // Once more, using D^3 F = 0 and d/dx_l G_{a,k} = G_{a,kl}:
    //   G_{a,ijl} = -[G_{a,kl} F_{k,bc} G_{b,i} G_{c,j}
    //                 + G_{a,k} F_{k,bc} (G_{b,il} G_{c,j} + G_{b,i} G_{c,jl})]
    for (int a = 0; a < 2; ++a) {
        Tensor3& T = d.inverse3[a];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    double value = 0.0;
                    for (int k = 0; k < 2; ++k) {
                        value += d.inverse2[a](k, l) * W[k](i, j);
                        double mixed = 0.0;
                        for (int b = 0; b < 2; ++b)
                            for (int c = 0; c < 2; ++c)
                                mixed += second_[k](b, c) *
                                         (d.inverse2[b](i, l) * G(c, j) + G(b, i) * d.inverse2[c](j, l));
                        value += G(a, k) * mixed;
                    }
                    T(i, j, l) = -value;
                }
    }
    return d;
}

Vec2 CurvedMap::inverse_point(const Vec2& phys) const {
    Vec2 ref = affine_.inverse() * (phys - nodes_[0]);
    for (int it = 0; it < 50; ++it) {
        const Vec2 residual = map_point(ref) - phys;
        const Vec2 step = jacobian(ref).inverse() * residual;
        ref -= step;
        if (step.norm() <= 1e-15 * (1.0 + ref.norm())) return ref;
    }
    const Vec2 residual = map_point(ref) - phys;
    if (residual.norm() <= 1e-13 * affine_.norm()) return ref;
    throw GeometryError("Newton inversion of element map did not converge");
}

MapDerivatives map_derivatives(const CurvedMap& map, const Vec2& ref) { return map.derivatives(ref); }

Vec2 disk_chart(const Vec2& x) {
    const double r = x.norm();
    if (r < 1e-14) throw GeometryError("disk chart evaluated at the origin");
    return x / r;
}

namespace {

std::array<Vec2, 6> straight_nodes(const Mesh& mesh, int k) {
    const auto& tri = mesh.triangles[k];
    std::array<Vec2, 6> nodes;
    for (int i = 0; i < 3; ++i) nodes[i] = mesh.vertices[tri[i]];
    for (int e = 0; e < 3; ++e) nodes[3 + e] = 0.5 * (nodes[e] + nodes[(e + 1) % 3]);
    return nodes;
}

} // namespace

std::vector<CurvedMap> affine_maps(const Mesh& mesh) {
    std::vector<CurvedMap> maps;
    maps.reserve(mesh.triangles.size());
    for (int k = 0; k < mesh.num_elements(); ++k) maps.emplace_back(straight_nodes(mesh, k));
    return maps;
}

std::vector<CurvedMap> curve_boundary(const Mesh& mesh, const FaceSet& faces, const Chart& chart) {
    std::vector<std::array<Vec2, 6>> nodes(mesh.triangles.size());
    for (int k = 0; k < mesh.num_elements(); ++k) nodes[k] = straight_nodes(mesh, k);
    for (const Face& face : faces.faces) {
        if (!face.is_boundary()) continue;
        Vec2& mid = nodes[face.left][3 + face.left_edge];
        mid = chart(mid);
    }
    std::vector<CurvedMap> maps;
    maps.reserve(nodes.size());
    for (const auto& n : nodes) maps.emplace_back(n);
    return maps;
}

std::vector<CurvedMap> curve_boundary(const Mesh& mesh, const Chart& chart) {
    return curve_boundary(mesh, build_connectivity(mesh), chart);
}

FaceFrame edge_frame(const CurvedMap& map, int local_edge, double t) {
    const Vec2 ref = reference_edge_point(local_edge, t);
    const Vec2 dir = reference_edge_direction(local_edge);
    const Vec2 d1 = map.jacobian(ref) * dir;
    const auto& D2 = map.second_derivative();
    const Vec2 d2(dir.dot(D2[0] * dir), dir.dot(D2[1] * dir));

    FaceFrame frame;
    frame.point = map.map_point(ref);
    frame.metric = d1.norm();
    if (!(frame.metric > 1e-14)) throw GeometryError("degenerate face parameterization");
    frame.tangent = d1 / frame.metric;
    // Counter-clockwise traversal keeps the element on the left; outward is to the right.
    frame.normal = Vec2(frame.tangent.y(), -frame.tangent.x());
    const double cross = d1.x() * d2.y() - d1.y() * d2.x();
    frame.curvature = cross / (frame.metric * frame.metric * frame.metric);
    frame.shape = frame.curvature * frame.tangent * frame.tangent.transpose();
    return frame;
}

FaceFrame face_frame(const Face& face, const std::vector<CurvedMap>& maps, double t) {
    return edge_frame(maps.at(face.left), face.left_edge, t);
}

double q_form(const FaceFrame& frame, const Vec2& xi1, const Vec2& xi2) { return xi1.dot(frame.shape * xi2); }

} // namespace curveddg
