#pragma once

#include "curveddg/metrics.hpp"
#include "curveddg/quadrature.hpp"
#include "curveddg/space.hpp"

#include <array>
#include <span>
#include <vector>

namespace curveddg {

/// Quadrature degrees for element and face integrals; 0 selects min(2p + 4, 20).
struct QuadratureDegrees {
    int element = 0;
    int face = 0;
};

/// Rules plus reference basis tables at their points, shared by all elements.
class ReferenceTables {
public:
    ReferenceTables(const DGSpace& space, QuadratureDegrees degrees = {});

    const TriangleRule& element_rule() const { return element_rule_; }
    const EdgeRule& face_rule() const { return face_rule_; }
    const RefBasisTable& element_table() const { return element_table_; }
    /// Table on local edge `edge` at parameters t (or 1 - t when reversed).
    const RefBasisTable& edge_table(int edge, bool reversed) const { return edge_tables_[edge][reversed]; }

private:
    TriangleRule element_rule_;
    EdgeRule face_rule_;
    RefBasisTable element_table_;
    std::array<std::array<RefBasisTable, 2>, 3> edge_tables_;
};

/// Physical basis derivatives at the element quadrature points.
class ElementValues {
public:
    ElementValues(const ReferenceTables& tables, const CurvedMap& map, int max_order);

    std::size_t size() const { return weights_.size(); }
    /// Quadrature weight times det DF_K.
    double weight(std::size_t q) const { return weights_[q]; }
    const Vec2& point(std::size_t q) const { return points_[q]; }
    std::span<const PointDerivs> basis(std::size_t q) const { return basis_[q]; }

private:
    std::vector<double> weights_;
    std::vector<Vec2> points_;
    std::vector<std::vector<PointDerivs>> basis_;
};

/// Trace quantities of the basis of both incident elements at the face
/// quadrature points. Face-intrinsic derivatives use the left element's
/// parameterization for both sides.
class FaceValues {
public:
    FaceValues(const ReferenceTables& tables, const Face& face, const std::vector<CurvedMap>& maps);

    std::size_t size() const { return weights_.size(); }
    /// Quadrature weight times |gamma'|.
    double weight(std::size_t q) const { return weights_[q]; }
    const FaceFrame& frame(std::size_t q) const { return frames_[q]; }
    std::span<const TraceDerivs> left(std::size_t q) const { return left_[q]; }
    std::span<const TraceDerivs> right(std::size_t q) const {
        return interior_ ? std::span<const TraceDerivs>(right_[q]) : std::span<const TraceDerivs>();
    }
    bool interior() const { return interior_; }

private:
    bool interior_;
    std::vector<double> weights_;
    std::vector<FaceFrame> frames_;
    std::vector<std::vector<TraceDerivs>> left_;
    std::vector<std::vector<TraceDerivs>> right_;
};

/// Trace quantities of a field given only its physical derivatives, using the
/// frame identities grad_T v = (grad v . tau) tau and
/// Delta_T v = tau^T D^2 v tau - H_F dv/dn_F.
TraceDerivs trace_from_physical(const PointDerivs& phys, const FaceFrame& frame);

/// Trace of a DG function on one side: sum_j c_j traces_j.
TraceDerivs combine_traces(std::span<const TraceDerivs> traces, std::span<const double> coefficients);

} // namespace curveddg
