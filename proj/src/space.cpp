#include "curveddg/space.hpp"

#include "curveddg/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace curveddg {

namespace {

// Silvester factors F_m(t) = prod_{q<m} (p t - q) / (q + 1) for m = 0..p and
// their first three derivatives: out[m][r] = F_m^{(r)}(t).
std::vector<std::array<double, 4>> silvester_table(int p, double t) {
    std::vector<std::array<double, 4>> out(p + 1, {0.0, 0.0, 0.0, 0.0});
    out[0][0] = 1.0;
    for (int q = 0; q < p; ++q) {
        const double l = (p * t - q) / (q + 1);
        const double dl = static_cast<double>(p) / (q + 1);
        for (int r = 0; r < 4; ++r) out[q + 1][r] = out[q][r] * l + (r > 0 ? r * out[q][r - 1] * dl : 0.0);
    }
    return out;
}

// Gradients of the barycentric coordinates 1 - x - y, x, y.
constexpr double kBaryGrad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

} // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
    if (degree < 1 || degree > 10) throw InvalidParameterError("ReferenceBasis: degree must be in [1, 10]");
    for (int j = 0; j <= degree; ++j)
        for (int i = 0; i + j <= degree; ++i) {
            nodes_.emplace_back(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
            lattice_.push_back({degree - i - j, i, j});
        }
}

std::vector<PointDerivs> ReferenceBasis::evaluate(const Vec2& ref) const {
    // phi = F_a(l0) F_b(l1) F_c(l2); each derivative direction falls on one factor.
    const double bary[3] = {1.0 - ref.x() - ref.y(), ref.x(), ref.y()};
    std::array<std::vector<std::array<double, 4>>, 3> tables;
    for (int k = 0; k < 3; ++k) tables[k] = silvester_table(degree_, bary[k]);

    std::vector<PointDerivs> out(size());
    for (int j = 0; j < size(); ++j) {
        const auto& m = lattice_[j];
        const auto term = [&](std::array<int, 3> counts, double directional) {
            double v = directional;
            for (int k = 0; k < 3; ++k) v *= tables[k][m[k]][counts[k]];
            return v;
        };
        PointDerivs& phi = out[j];
        phi.value = term({0, 0, 0}, 1.0);
        for (int i = 0; i < 2; ++i) {
            for (int a = 0; a < 3; ++a) {
                std::array<int, 3> c{};
                ++c[a];
                phi.grad[i] += term(c, kBaryGrad[a][i]);
            }
            for (int l = 0; l < 2; ++l)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        std::array<int, 3> c{};
                        ++c[a];
                        ++c[b];
                        phi.hess(i, l) += term(c, kBaryGrad[a][i] * kBaryGrad[b][l]);
                    }
        }
        for (int i = 0; i < 2; ++i)
            for (int l = 0; l < 2; ++l)
                for (int r = 0; r < 2; ++r) {
                    double v = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int c3 = 0; c3 < 3; ++c3) {
                                std::array<int, 3> c{};
                                ++c[a];
                                ++c[b];
                                ++c[c3];
                                v += term(c, kBaryGrad[a][i] * kBaryGrad[b][l] * kBaryGrad[c3][r]);
                            }
                    phi.third(i, l, r) = v;
                }
    }
    return out;
}

RefBasisTable eval_ref_basis(const ReferenceBasis& basis, std::span<const Vec2> points) {
    RefBasisTable table;
    table.reserve(points.size());
    for (const Vec2& p : points) table.push_back(basis.evaluate(p));
    return table;
}

DGSpace::DGSpace(int degree, int num_elements) : basis_(degree), num_elements_(num_elements) {}

PointDerivs push_forward(const PointDerivs& ref, const MapDerivatives& md, int max_order) {
    const Mat2& G = md.inverse;
    PointDerivs out;
    out.value = ref.value;
    if (max_order < 1) return out;
    out.grad = G.transpose() * ref.grad;
    if (max_order < 2) return out;
    out.hess = G.transpose() * ref.hess * G + ref.grad[0] * md.inverse2[0] + ref.grad[1] * md.inverse2[1];
    if (max_order < 3) return out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) {
                double v = 0.0;
                for (int a = 0; a < 2; ++a) {
                    v += ref.grad[a] * md.inverse3[a](i, j, l);
                    for (int b = 0; b < 2; ++b) {
                        v += ref.hess(a, b) * (md.inverse2[a](i, l) * G(b, j) + G(a, i) * md.inverse2[b](j, l) +
                                               md.inverse2[a](i, j) * G(b, l));
                        for (int c = 0; c < 2; ++c) v += ref.third(a, b, c) * G(a, i) * G(b, j) * G(c, l);
                    }
                }
                out.third(i, j, l) = v;
            }
    return out;
}

std::vector<PointDerivs> physical_derivatives(const DGSpace& space, const CurvedMap& map, const Vec2& ref,
                                              int max_order) {
    const MapDerivatives md = map.derivatives(ref);
    std::vector<PointDerivs> out;
    for (const PointDerivs& r : space.basis().evaluate(ref)) out.push_back(push_forward(r, md, max_order));
    return out;
}

PointDerivs combine(std::span<const PointDerivs> basis, std::span<const double> coefficients) {
    PointDerivs out;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const double c = coefficients[j];
        out.value += c * basis[j].value;
        out.grad += c * basis[j].grad;
        out.hess += c * basis[j].hess;
        for (int s = 0; s < 8; ++s) out.third.data[s] += c * basis[j].third.data[s];
    }
    return out;
}

TraceDerivs trace_quantities(const PointDerivs& ref, const MapDerivatives& md, const Vec2& direction,
                             const FaceFrame& frame) {
    TraceDerivs t;
    t.phys = push_forward(ref, md, 3);
    const Vec2& tau = frame.tangent;
    const Vec2& n = frame.normal;

    // Intrinsic derivatives of g(t) = v(gamma(t)) along this element's face curve.
    const Vec2 d1 = md.jacobian * direction;
    const Vec2 d2(direction.dot(md.second[0] * direction), direction.dot(md.second[1] * direction));
    const double metric = d1.norm();
    const double metric_rate = d1.dot(d2) / metric;
    const double g1 = ref.grad.dot(direction);
    const double g2 = direction.dot(ref.hess * direction);
    t.tangential = g1 / metric;
    t.tangential_laplacian = (g2 - t.tangential * metric_rate) / (metric * metric);

    t.normal_derivative = t.phys.grad.dot(n);
    // d/ds (grad v . n) with dn/ds = H_F tau.
    t.tangential_normal_derivative = tau.dot(t.phys.hess * n) + frame.curvature * t.phys.grad.dot(tau);
    t.laplacian = t.phys.hess.trace();
    t.normal_laplacian_derivative = t.phys.third.laplacian_derivative(n);
    return t;
}

EdgeLocation right_edge_location(const Face& face, const std::vector<CurvedMap>& maps) {
    const auto& left_nodes = maps.at(face.left).nodes();
    const auto& right_nodes = maps.at(face.right).nodes();
    const Vec2& start = left_nodes[face.left_edge];
    const Vec2& end = left_nodes[(face.left_edge + 1) % 3];
    const double tol = 1e-12 * std::max(1.0, (end - start).norm());
    const Vec2& r0 = right_nodes[face.right_edge];
    const Vec2& r1 = right_nodes[(face.right_edge + 1) % 3];
    if ((r0 - start).norm() <= tol && (r1 - end).norm() <= tol) return {face.right_edge, false};
    if ((r0 - end).norm() <= tol && (r1 - start).norm() <= tol) return {face.right_edge, true};
    throw GeometryError("face vertices of neighbouring elements do not match");
}

FaceTraces trace_derivatives(const DGSpace& space, const Face& face, const std::vector<CurvedMap>& maps, double t) {
    FaceTraces out;
    out.frame = face_frame(face, maps, t);
    {
        const Vec2 ref = reference_edge_point(face.left_edge, t);
        const Vec2 dir = reference_edge_direction(face.left_edge);
        const MapDerivatives md = maps[face.left].derivatives(ref);
        for (const auto& r : space.basis().evaluate(ref)) out.left.push_back(trace_quantities(r, md, dir, out.frame));
    }
    if (!face.is_boundary()) {
        const EdgeLocation loc = right_edge_location(face, maps);
        const double s = loc.reversed ? 1.0 - t : t;
        const Vec2 ref = reference_edge_point(loc.edge, s);
        const Vec2 dir = (loc.reversed ? -1.0 : 1.0) * reference_edge_direction(loc.edge);
        const MapDerivatives md = maps[face.right].derivatives(ref);
        for (const auto& r : space.basis().evaluate(ref)) out.right.push_back(trace_quantities(r, md, dir, out.frame));
    }
    return out;
}

} // namespace curveddg
