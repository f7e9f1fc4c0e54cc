#include "curveddg/forms.hpp"

#include <algorithm>

namespace curveddg {

ReferenceTables::ReferenceTables(const DGSpace& space, QuadratureDegrees degrees) {
    const int p = space.degree();
    // 2p + 4 by default, capped at the highest tabulated triangle rule.
    const int fallback = std::min(2 * p + 4, kMaxQuadratureDegree);
    element_rule_ = triangle_rule(degrees.element > 0 ? degrees.element : fallback);
    face_rule_ = edge_rule(degrees.face > 0 ? degrees.face : fallback);
    element_table_ = eval_ref_basis(space.basis(), element_rule_.points);
    for (int e = 0; e < 3; ++e)
        for (int reversed = 0; reversed < 2; ++reversed) {
            std::vector<Vec2> pts;
            for (double t : face_rule_.points) pts.push_back(reference_edge_point(e, reversed ? 1.0 - t : t));
            edge_tables_[e][reversed] = eval_ref_basis(space.basis(), pts);
        }
}

ElementValues::ElementValues(const ReferenceTables& tables, const CurvedMap& map, int max_order) {
    const auto& rule = tables.element_rule();
    const auto& table = tables.element_table();
    weights_.resize(rule.size());
    points_.resize(rule.size());
    basis_.resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const MapDerivatives md = map.derivatives(rule.points[q]);
        weights_[q] = rule.weights[q] * md.det;
        points_[q] = map.map_point(rule.points[q]);
        basis_[q].reserve(table[q].size());
        for (const PointDerivs& r : table[q]) basis_[q].push_back(push_forward(r, md, max_order));
    }
}

FaceValues::FaceValues(const ReferenceTables& tables, const Face& face, const std::vector<CurvedMap>& maps)
    : interior_(!face.is_boundary()) {
    const auto& rule = tables.face_rule();
    const std::size_t nq = rule.size();
    weights_.resize(nq);
    frames_.resize(nq);
    left_.resize(nq);
    right_.resize(interior_ ? nq : 0);

    const CurvedMap& lmap = maps[face.left];
    const Vec2 ldir = reference_edge_direction(face.left_edge);
    const RefBasisTable& ltable = tables.edge_table(face.left_edge, false);
    EdgeLocation loc;
    if (interior_) loc = right_edge_location(face, maps);

    for (std::size_t q = 0; q < nq; ++q) {
        const double t = rule.points[q];
        frames_[q] = edge_frame(lmap, face.left_edge, t);
        weights_[q] = rule.weights[q] * frames_[q].metric;
        const MapDerivatives lmd = lmap.derivatives(reference_edge_point(face.left_edge, t));
        for (const PointDerivs& r : ltable[q]) left_[q].push_back(trace_quantities(r, lmd, ldir, frames_[q]));
        if (interior_) {
            const Vec2 rref = reference_edge_point(loc.edge, loc.reversed ? 1.0 - t : t);
            const Vec2 rdir = (loc.reversed ? -1.0 : 1.0) * reference_edge_direction(loc.edge);
            const MapDerivatives rmd = maps[face.right].derivatives(rref);
            for (const PointDerivs& r : tables.edge_table(loc.edge, loc.reversed)[q])
                right_[q].push_back(trace_quantities(r, rmd, rdir, frames_[q]));
        }
    }
}

TraceDerivs trace_from_physical(const PointDerivs& phys, const FaceFrame& frame) {
    const Vec2& tau = frame.tangent;
    const Vec2& n = frame.normal;
    TraceDerivs t;
    t.phys = phys;
    t.normal_derivative = phys.grad.dot(n);
    t.tangential = phys.grad.dot(tau);
    t.tangential_laplacian = tau.dot(phys.hess * tau) - frame.curvature * t.normal_derivative;
    t.tangential_normal_derivative = tau.dot(phys.hess * n) + frame.curvature * t.tangential;
    t.laplacian = phys.hess.trace();
    t.normal_laplacian_derivative = phys.third.laplacian_derivative(n);
    return t;
}

TraceDerivs combine_traces(std::span<const TraceDerivs> traces, std::span<const double> c) {
    TraceDerivs out;
    for (std::size_t j = 0; j < traces.size(); ++j) {
        const TraceDerivs& t = traces[j];
        out.phys.value += c[j] * t.phys.value;
        out.phys.grad += c[j] * t.phys.grad;
        out.phys.hess += c[j] * t.phys.hess;
        for (int s = 0; s < 8; ++s) out.phys.third.data[s] += c[j] * t.phys.third.data[s];
        out.normal_derivative += c[j] * t.normal_derivative;
        out.tangential += c[j] * t.tangential;
        out.tangential_laplacian += c[j] * t.tangential_laplacian;
        out.tangential_normal_derivative += c[j] * t.tangential_normal_derivative;
        out.laplacian += c[j] * t.laplacian;
        out.normal_laplacian_derivative += c[j] * t.normal_laplacian_derivative;
    }
    return out;
}

} // namespace curveddg
