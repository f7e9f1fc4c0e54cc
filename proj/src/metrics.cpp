#include "curveddg/metrics.hpp"

#include "curveddg/error.hpp"
#include "curveddg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curveddg {

double nonlinearity_constant(const CurvedMap& map) {
    if (map.is_affine()) return 0.0;
    static const TriangleRule samples = triangle_rule(6);
    const Mat2 inv = map.affine_matrix().inverse();
    const auto norm_at = [&](const Vec2& ref) {
        const Mat2 m = map.nonlinear_jacobian(ref) * inv;
        return Eigen::JacobiSVD<Mat2>(m).singularValues()(0);
    };
    double c = 0.0;
    for (int i = 0; i < 3; ++i) {
        c = std::max(c, norm_at(reference_vertex(i)));
        c = std::max(c, norm_at(reference_edge_point(i, 0.5)));
    }
    for (const Vec2& p : samples.points) c = std::max(c, norm_at(p));
    return c;
}

MeshMetrics mesh_metrics(const Mesh& mesh, const std::vector<CurvedMap>& maps, const FaceSet& faces) {
    MeshMetrics m;
    const int n = mesh.num_elements();
    m.h.resize(n);
    m.rho.resize(n);
    m.nonlinearity.resize(n);
    for (int k = 0; k < n; ++k) {
        const auto& tri = mesh.triangles[k];
        const Vec2& a = mesh.vertices[tri[0]];
        const Vec2& b = mesh.vertices[tri[1]];
        const Vec2& c = mesh.vertices[tri[2]];
        const double ab = (b - a).norm();
        const double bc = (c - b).norm();
        const double ca = (a - c).norm();
        const double area = 0.5 * std::abs(signed_area2(a, b, c));
        const double semi = 0.5 * (ab + bc + ca);
        m.h[k] = std::max({ab, bc, ca});
        m.rho[k] = 2.0 * area / semi;
        m.nonlinearity[k] = nonlinearity_constant(maps.at(k));
        if (!(m.nonlinearity[k] < 1.0))
            throw GeometryError("element " + std::to_string(k) + " has C_K = " +
                                std::to_string(m.nonlinearity[k]) + " >= 1");
        m.h_max = std::max(m.h_max, m.h[k]);
        m.sigma = std::max(m.sigma, m.h[k] / m.rho[k]);
        m.max_nonlinearity = std::max(m.max_nonlinearity, m.nonlinearity[k]);
    }
    m.face_h.resize(faces.faces.size());
    for (std::size_t f = 0; f < faces.faces.size(); ++f) {
        const Face& face = faces.faces[f];
        if (face.is_boundary()) {
            m.face_h[f] = m.h[face.left];
        } else {
            const double hl = m.h[face.left];
            const double hr = m.h[face.right];
            m.face_h[f] = std::min(hl, hr);
            m.size_ratio = std::max(m.size_ratio, std::max(hl, hr) / std::min(hl, hr));
        }
    }
    return m;
}

CurvedMesh make_curved_mesh(Mesh mesh, const Chart& chart) {
    CurvedMesh out;
    out.mesh = std::move(mesh);
    out.faces = build_connectivity(out.mesh);
    out.maps = curve_boundary(out.mesh, out.faces, chart);
    out.metrics = mesh_metrics(out.mesh, out.maps, out.faces);
    return out;
}

CurvedMesh make_straight_mesh(Mesh mesh) {
    CurvedMesh out;
    out.mesh = std::move(mesh);
    out.faces = build_connectivity(out.mesh);
    out.maps = affine_maps(out.mesh);
    out.metrics = mesh_metrics(out.mesh, out.maps, out.faces);
    return out;
}

CurvedMesh make_disk(double target_h) { return make_curved_mesh(generate_disk_mesh(target_h), disk_chart); }

} // namespace curveddg
