#pragma once

#include "curveddg/geometry.hpp"
#include "curveddg/mesh.hpp"

#include <vector>

namespace curveddg {

/// Size and shape measures of a curved mesh. Element sizes refer to the
/// straight triangle through the element's vertices.
struct MeshMetrics {
    std::vector<double> h;             // diameter (longest edge)
    std::vector<double> rho;           // inscribed-circle diameter
    std::vector<double> nonlinearity;  // C_K = sup ||D Phi_K B~^{-1}||
    std::vector<double> face_h;        // h~_F
    double h_max = 0.0;
    double sigma = 0.0;                // max h_K / rho_K
    double size_ratio = 1.0;           // C_T: max over interior faces of max/min incident h_K
    double max_nonlinearity = 0.0;
};

/// Throws GeometryError if any element has C_K >= 1.
MeshMetrics mesh_metrics(const Mesh& mesh, const std::vector<CurvedMap>& maps, const FaceSet& faces);

/// Nonlinearity constant of a single map, sampled at the geometry nodes and
/// interior quadrature points (DF_K is affine, so the maximum sits at a vertex).
double nonlinearity_constant(const CurvedMap& map);

/// A mesh together with everything derived from it.
struct CurvedMesh {
    Mesh mesh;
    FaceSet faces;
    std::vector<CurvedMap> maps;
    MeshMetrics metrics;

    int num_elements() const { return mesh.num_elements(); }
};

/// Connectivity, P2 boundary curving via `chart` and metrics.
CurvedMesh make_curved_mesh(Mesh mesh, const Chart& chart);
/// Same, keeping all elements straight.
CurvedMesh make_straight_mesh(Mesh mesh);
/// generate_disk_mesh + make_curved_mesh with the unit-circle chart.
CurvedMesh make_disk(double target_h);

} // namespace curveddg
