#include "curveddg/mesh.hpp"

#include "curveddg/error.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace curveddg {

double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

Mesh generate_disk_mesh(double target_h) {
    if (!(target_h > 0.0) || !std::isfinite(target_h))
        throw InvalidParameterError("generate_disk_mesh: target_h must be positive");
    const int n = std::max(2, static_cast<int>(std::lround(1.0 / target_h)));

    Mesh mesh;
    // ring_start[i] is the index of the first vertex of ring i; ring 0 is the centre.
    std::vector<int> ring_start(n + 2, 0);
    mesh.vertices.emplace_back(0.0, 0.0);
    for (int i = 1; i <= n; ++i) {
        ring_start[i] = mesh.num_vertices();
        const int count = 6 * i;
        const double radius = static_cast<double>(i) / n;
        for (int k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / count;
            if (i == n)
                mesh.vertices.emplace_back(std::cos(theta), std::sin(theta));
            else
                mesh.vertices.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
        }
    }

    for (int k = 0; k < 6; ++k)
        mesh.triangles.push_back({0, ring_start[1] + k, ring_start[1] + (k + 1) % 6});

    for (int i = 2; i <= n; ++i) {
        const int m = 6 * (i - 1);
        const int outer = 6 * i;
        const auto in_id = [&](int a) { return ring_start[i - 1] + a % m; };
        const auto out_id = [&](int b) { return ring_start[i] + b % outer; };
        int a = 0;
        int b = 0;
        while (a < m || b < outer) {
            // Advance along whichever ring has the smaller next angle.
            const bool advance_outer =
                a == m || (b < outer && static_cast<long>(b + 1) * m < static_cast<long>(a + 1) * outer);
            if (advance_outer) {
                mesh.triangles.push_back({in_id(a), out_id(b), out_id(b + 1)});
                ++b;
            } else {
                mesh.triangles.push_back({in_id(a), out_id(b), in_id(a + 1)});
                ++a;
            }
        }
    }

    const int count = 6 * n;
    for (int k = 0; k < count; ++k)
        mesh.boundary_edges.push_back({ring_start[n] + k, ring_start[n] + (k + 1) % count, 1});
    return mesh;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty, non-comment line; false at end of stream.
    bool next(std::istringstream& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            fields.clear();
            fields.str(line);
            return true;
        }
        return false;
    }

    int line() const { return line_no_; }

private:
    std::istream& in_;
    int line_no_ = 0;
};

int read_header(LineReader& reader, const std::string& keyword) {
    std::istringstream fields;
    if (!reader.next(fields))
        throw ParseError(reader.line(), "expected '" + keyword + "' section, found end of file");
    std::string word;
    long count = -1;
    if (!(fields >> word) || word != keyword || !(fields >> count) || count < 0)
        throw ParseError(reader.line(), "malformed section header, expected '" + keyword + " <count>'");
    return static_cast<int>(count);
}

void expect_end(std::istringstream& fields, int line) {
    std::string extra;
    if (fields >> extra) throw ParseError(line, "unexpected trailing token '" + extra + "'");
}

} // namespace

Mesh load_mesh(std::istream& in) {
    LineReader reader(in);
    Mesh mesh;
    std::istringstream fields;

    const int num_nodes = read_header(reader, "nodes");
    for (int i = 0; i < num_nodes; ++i) {
        if (!reader.next(fields)) throw ParseError(reader.line(), "unexpected end of file in nodes");
        double x = 0.0;
        double y = 0.0;
        if (!(fields >> x >> y)) throw ParseError(reader.line(), "expected node coordinates 'x y'");
        expect_end(fields, reader.line());
        mesh.vertices.emplace_back(x, y);
    }

    const auto check_index = [&](long v) {
        if (v < 0 || v >= num_nodes)
            throw ParseError(reader.line(), "node index " + std::to_string(v) + " out of range [0, " +
                                                std::to_string(num_nodes) + ")");
        return static_cast<int>(v);
    };

    std::map<std::pair<int, int>, int> edge_count;
    const int num_triangles = read_header(reader, "triangles");
    for (int i = 0; i < num_triangles; ++i) {
        if (!reader.next(fields)) throw ParseError(reader.line(), "unexpected end of file in triangles");
        long v[3];
        if (!(fields >> v[0] >> v[1] >> v[2])) throw ParseError(reader.line(), "expected 'v0 v1 v2'");
        expect_end(fields, reader.line());
        std::array<int, 3> tri{check_index(v[0]), check_index(v[1]), check_index(v[2])};
        const double area2 = signed_area2(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        if (area2 == 0.0) throw ParseError(reader.line(), "degenerate triangle");
        if (area2 < 0.0) std::swap(tri[1], tri[2]);
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            ++edge_count[{std::min(a, b), std::max(a, b)}];
        }
        mesh.triangles.push_back(tri);
    }

    std::set<std::pair<int, int>> seen;
    const int num_boundary = read_header(reader, "boundary_edges");
    for (int i = 0; i < num_boundary; ++i) {
        if (!reader.next(fields)) throw ParseError(reader.line(), "unexpected end of file in boundary_edges");
        long a = 0;
        long b = 0;
        long marker = 0;
        if (!(fields >> a >> b >> marker)) throw ParseError(reader.line(), "expected 'v0 v1 marker'");
        expect_end(fields, reader.line());
        const int v0 = check_index(a);
        const int v1 = check_index(b);
        const std::pair<int, int> key{std::min(v0, v1), std::max(v0, v1)};
        if (!seen.insert(key).second) throw ParseError(reader.line(), "duplicate boundary edge");
        const auto it = edge_count.find(key);
        if (it == edge_count.end() || it->second != 1)
            throw ParseError(reader.line(), "boundary edge is not an edge of exactly one triangle");
        mesh.boundary_edges.push_back({v0, v1, static_cast<int>(marker)});
    }

    if (reader.next(fields)) throw ParseError(reader.line(), "unexpected content after boundary_edges");
    return mesh;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << "nodes " << mesh.vertices.size() << '\n';
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << '\n';
    out << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "boundary_edges " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges) out << e.v0 << ' ' << e.v1 << ' ' << e.marker << '\n';
}

FaceSet build_connectivity(const Mesh& mesh) {
    struct Incidence {
        int element;
        int local_edge;
    };
    std::map<std::pair<int, int>, std::vector<Incidence>> edges;
    for (int k = 0; k < mesh.num_elements(); ++k) {
        for (int e = 0; e < 3; ++e) {
            const int a = mesh.triangles[k][e];
            const int b = mesh.triangles[k][(e + 1) % 3];
            auto& list = edges[{std::min(a, b), std::max(a, b)}];
            list.push_back({k, e});
            if (list.size() > 2)
                throw NonManifoldError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                       ") is shared by more than two triangles");
        }
    }
    std::map<std::pair<int, int>, int> markers;
    for (const auto& be : mesh.boundary_edges)
        markers[{std::min(be.v0, be.v1), std::max(be.v0, be.v1)}] = be.marker;

    // Faces are numbered in order of first appearance when sweeping elements.
    FaceSet set;
    set.element_faces.assign(mesh.triangles.size(), {-1, -1, -1});
    for (int k = 0; k < mesh.num_elements(); ++k) {
        for (int e = 0; e < 3; ++e) {
            if (set.element_faces[k][e] >= 0) continue;
            const int a = mesh.triangles[k][e];
            const int b = mesh.triangles[k][(e + 1) % 3];
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            const auto& list = edges.at(key);
            Face face;
            face.vertices = {a, b};
            face.left = k;
            face.left_edge = e;
            if (list.size() == 2) {
                const auto& other = list[0].element == k && list[0].local_edge == e ? list[1] : list[0];
                face.right = other.element;
                face.right_edge = other.local_edge;
                ++set.num_interior;
            } else {
                const auto it = markers.find(key);
                face.marker = it == markers.end() ? 0 : it->second;
                ++set.num_boundary;
            }
            const int id = static_cast<int>(set.faces.size());
            set.faces.push_back(face);
            set.element_faces[k][e] = id;
            if (face.right >= 0) set.element_faces[face.right][face.right_edge] = id;
        }
    }
    return set;
}

} // namespace curveddg
