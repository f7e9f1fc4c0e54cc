#pragma once

#include "curveddg/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace curveddg {

struct BoundaryEdge {
    int v0 = 0;
    int v1 = 0;
    int marker = 0;
};

/// Straight-sided triangulation. Triangles are counter-clockwise.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;

    int num_elements() const { return static_cast<int>(triangles.size()); }
    int num_vertices() const { return static_cast<int>(vertices.size()); }
};

/// Twice the signed area of triangle (a, b, c).
double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c);

/// A mesh edge. The normal n_F points out of `left`; jumps are left minus right.
struct Face {
    std::array<int, 2> vertices{};  // ordered counter-clockwise w.r.t. `left`
    int left = -1;
    int right = -1;                 // -1 on the boundary
    int left_edge = -1;             // local edge index in `left`
    int right_edge = -1;
    int marker = 0;

    bool is_boundary() const { return right < 0; }
};

/// Faces of a mesh. Local edge e of a triangle joins local vertices e and (e+1)%3.
struct FaceSet {
    std::vector<Face> faces;
    std::vector<std::array<int, 3>> element_faces;  // face index per local edge
    int num_interior = 0;
    int num_boundary = 0;
};

/// Ring-based triangulation of the unit disk with n = max(2, round(1/target_h))
/// concentric rings; ring i (radius i/n) carries 6i vertices.
Mesh generate_disk_mesh(double target_h);

/// Reads the `nodes` / `triangles` / `boundary_edges` text format. Clockwise
/// triangles are reoriented. Throws ParseError naming the offending line.
Mesh load_mesh(std::istream& in);

void write_mesh(std::ostream& out, const Mesh& mesh);

FaceSet build_connectivity(const Mesh& mesh);

} // namespace curveddg
