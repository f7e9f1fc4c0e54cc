#include "curveddg/assembly.hpp"

#include "curveddg/error.hpp"

#include <cmath>
#include <iostream>
#include <string>

namespace curveddg {

PenaltyConfig PenaltyConfig::defaults(int degree) {
    const double p = degree;
    const double c = degree == 2 ? 0.1 : 10.0;
    PenaltyConfig cfg;
    cfg.eta1 = 10.0 * std::pow(p, 4);
    cfg.eta2 = c * std::pow(p, 6);
    cfg.eta3 = c * std::pow(p, 4);
    cfg.eta4 = c * std::pow(p, 4);
    return cfg;
}

namespace {

std::vector<std::vector<int>> element_neighbours(const CurvedMesh& mesh) {
    std::vector<std::vector<int>> nb(mesh.num_elements());
    for (const Face& f : mesh.faces.faces) {
        if (f.is_boundary()) continue;
        nb[f.left].push_back(f.right);
        nb[f.right].push_back(f.left);
    }
    return nb;
}

void check_space(const DGSpace& space, const CurvedMesh& mesh) {
    if (space.num_elements() != mesh.num_elements())
        throw InvalidParameterError("space and mesh disagree on the number of elements");
}

// Quantities of one basis function of the face-local numbering (left basis
// first, then right) entering the face terms: jumps and averages.
struct FaceBasis {
    double jump = 0.0;
    double jump_dn = 0.0;        // [dv/dn]
    double jump_tan = 0.0;       // [grad_T v] . tau
    double avg_dn = 0.0;         // {dv/dn}
    double avg_tan = 0.0;        // {grad_T v} . tau
    double avg_lap = 0.0;        // {Delta v}
    double avg_dn_lap = 0.0;     // {d(Delta v)/dn}
    double avg_tan_lap = 0.0;    // {Delta_T v}
    double avg_tan_dn = 0.0;     // {grad_T dv/dn} . tau
};

void face_basis(const FaceValues& fv, std::size_t q, std::vector<FaceBasis>& out) {
    const auto left = fv.left(q);
    const auto right = fv.right(q);
    const std::size_t n = left.size();
    out.assign(n + right.size(), {});
    const double avg = fv.interior() ? 0.5 : 1.0;
    const auto fill = [&](const TraceDerivs& t, double sign, FaceBasis& b) {
        b.jump = sign * t.phys.value;
        b.jump_dn = sign * t.normal_derivative;
        b.jump_tan = sign * t.tangential;
        b.avg_dn = avg * t.normal_derivative;
        b.avg_tan = avg * t.tangential;
        b.avg_lap = avg * t.laplacian;
        b.avg_dn_lap = avg * t.normal_laplacian_derivative;
        b.avg_tan_lap = avg * t.tangential_laplacian;
        b.avg_tan_dn = avg * t.tangential_normal_derivative;
    };
    for (std::size_t j = 0; j < n; ++j) fill(left[j], 1.0, out[j]);
    for (std::size_t j = 0; j < right.size(); ++j) fill(right[j], -1.0, out[n + j]);
}

void scatter_face(BlockCsrBuilder& builder, const Face& face, const Eigen::MatrixXd& local, int n) {
    builder.add(face.left, face.left, local.topLeftCorner(n, n));
    if (face.is_boundary()) return;
    builder.add(face.left, face.right, local.topRightCorner(n, n));
    builder.add(face.right, face.left, local.bottomLeftCorner(n, n));
    builder.add(face.right, face.right, local.bottomRightCorner(n, n));
}

std::vector<double> load_vector(const DGSpace& space, const CurvedMesh& mesh, const ReferenceTables& tables,
                                const PointFunction& f) {
    const int n = space.local_size();
    std::vector<double> rhs(space.num_dofs(), 0.0);
    const auto& rule = tables.element_rule();
    const auto& table = tables.element_table();
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const CurvedMap& map = mesh.maps[k];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2& ref = rule.points[q];
            const double w = rule.weights[q] * map.jacobian(ref).determinant() * f(map.map_point(ref));
            for (int i = 0; i < n; ++i) rhs[space.dof(k, i)] += w * table[q][i].value;
        }
    }
    return rhs;
}

// C(u, v) contribution at one face point for trial u and test v.
double form_C_point(const FaceFrame& frame, const FaceBasis& u, const FaceBasis& v) {
    const Vec2& tau = frame.tangent;
    const Vec2& n = frame.normal;
    return u.avg_tan_lap * v.jump_dn + frame.curvature * u.avg_dn * v.jump_dn - u.avg_tan_dn * v.jump_tan +
           q_form(frame, u.avg_tan * tau, v.jump_tan * tau) + q_form(frame, u.avg_dn * n, v.jump_tan * tau);
}

} // namespace

SparseSystem assemble_poisson(const DGSpace& space, const CurvedMesh& mesh, const PenaltyConfig& penalties,
                              const PointFunction& f, QuadratureDegrees quad) {
    check_space(space, mesh);
    if (!(penalties.eta1 > 0.0)) throw InvalidParameterError("assemble_poisson: eta1 must be positive");
    const int n = space.local_size();
    const ReferenceTables tables(space, quad);
    BlockCsrBuilder builder(element_neighbours(mesh), n);

    Eigen::MatrixXd local(n, n);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const ElementValues ev(tables, mesh.maps[k], 1);
        local.setZero();
        for (std::size_t q = 0; q < ev.size(); ++q) {
            const auto phi = ev.basis(q);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) local(i, j) += ev.weight(q) * phi[i].grad.dot(phi[j].grad);
        }
        builder.add(k, k, local);
    }

    std::vector<FaceBasis> fb;
    for (std::size_t fi = 0; fi < mesh.faces.faces.size(); ++fi) {
        const Face& face = mesh.faces.faces[fi];
        const FaceValues fv(tables, face, mesh.maps);
        const double sigma = penalties.eta1 / mesh.metrics.face_h[fi];
        const int m = face.is_boundary() ? n : 2 * n;
        Eigen::MatrixXd flocal = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            face_basis(fv, q, fb);
            const double w = fv.weight(q);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j)
                    flocal(i, j) += w * (-fb[j].avg_dn * fb[i].jump - fb[i].avg_dn * fb[j].jump +
                                         sigma * fb[i].jump * fb[j].jump);
        }
        flocal.triangularView<Eigen::StrictlyLower>() = flocal.transpose();
        scatter_face(builder, face, flocal, n);
    }

    SparseSystem sys;
    sys.matrix = std::move(builder).finish();
    sys.rhs = load_vector(space, mesh, tables, f);
    return sys;
}

SparseSystem assemble_biharmonic(const DGSpace& space, const CurvedMesh& mesh, const PenaltyConfig& penalties,
                                 const PointFunction& f, QuadratureDegrees quad) {
    check_space(space, mesh);
    if (space.degree() < 2) throw InvalidParameterError("assemble_biharmonic: degree must be at least 2");
    if (!(penalties.eta2 > 0.0 && penalties.eta3 > 0.0 && penalties.eta4 > 0.0))
        throw InvalidParameterError("assemble_biharmonic: eta2, eta3, eta4 must be positive");
    if (space.degree() == 2)
        std::clog << "warning: biharmonic scheme with p = 2 is outside the range covered by the error analysis (p >= 3)\n";

    const int n = space.local_size();
    const ReferenceTables tables(space, quad);
    BlockCsrBuilder builder(element_neighbours(mesh), n);

    Eigen::MatrixXd local(n, n);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const ElementValues ev(tables, mesh.maps[k], 2);
        local.setZero();
        for (std::size_t q = 0; q < ev.size(); ++q) {
            const auto phi = ev.basis(q);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) local(i, j) += ev.weight(q) * phi[i].hess.cwiseProduct(phi[j].hess).sum();
        }
        local.triangularView<Eigen::StrictlyLower>() = local.transpose();
        builder.add(k, k, local);
    }

    std::vector<FaceBasis> fb;
    for (std::size_t fi = 0; fi < mesh.faces.faces.size(); ++fi) {
        const Face& face = mesh.faces.faces[fi];
        const FaceValues fv(tables, face, mesh.maps);
        const double h = mesh.metrics.face_h[fi];
        const double s0 = penalties.eta2 / (h * h * h);
        const double s1 = penalties.eta3 / h;
        const double s2 = penalties.eta4 / h;
        const int m = face.is_boundary() ? n : 2 * n;
        Eigen::MatrixXd flocal = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            face_basis(fv, q, fb);
            const FaceFrame& frame = fv.frame(q);
            const double w = fv.weight(q);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j) {
                    const FaceBasis& u = fb[j];  // trial
                    const FaceBasis& v = fb[i];  // test
                    double a = u.avg_dn_lap * v.jump - u.avg_lap * v.jump_dn + v.avg_dn_lap * u.jump -
                               v.avg_lap * u.jump_dn;
                    if (fv.interior()) a += form_C_point(frame, u, v) + form_C_point(frame, v, u);
                    a += s0 * u.jump * v.jump + s1 * u.jump_dn * v.jump_dn + s2 * u.jump_tan * v.jump_tan;
                    flocal(i, j) += w * a;
                }
        }
        flocal.triangularView<Eigen::StrictlyLower>() = flocal.transpose();
        scatter_face(builder, face, flocal, n);
    }

    SparseSystem sys;
    sys.matrix = std::move(builder).finish();
    sys.rhs = load_vector(space, mesh, tables, f);
    return sys;
}

SparseSystem assemble(Problem problem, const DGSpace& space, const CurvedMesh& mesh, const PenaltyConfig& penalties,
                      const PointFunction& f, QuadratureDegrees quad) {
    return problem == Problem::poisson ? assemble_poisson(space, mesh, penalties, f, quad)
                                       : assemble_biharmonic(space, mesh, penalties, f, quad);
}

QuadraticFormWeights QuadraticFormWeights::energy_norm(Problem problem, const PenaltyConfig& penalties) {
    QuadraticFormWeights w;
    if (problem == Problem::poisson) {
        w.h1 = 1.0;
        w.jump = {penalties.eta1, -1, penalties.eta1, -1};
    } else {
        w.h2 = 1.0;
        w.jump = {penalties.eta2, -3, penalties.eta2, -3};
        w.jump_dn = {penalties.eta3, -1, penalties.eta3, -1};
        w.jump_tan = {penalties.eta4, -1, penalties.eta4, -1};
    }
    return w;
}

CsrMatrix assemble_quadratic_form(const DGSpace& space, const CurvedMesh& mesh, const QuadraticFormWeights& weights,
                                  QuadratureDegrees quad) {
    check_space(space, mesh);
    const int n = space.local_size();
    const ReferenceTables tables(space, quad);
    BlockCsrBuilder builder(element_neighbours(mesh), n);
    const int order = weights.h2 != 0.0 ? 2 : 1;

    Eigen::MatrixXd local(n, n);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const ElementValues ev(tables, mesh.maps[k], order);
        local.setZero();
        for (std::size_t q = 0; q < ev.size(); ++q) {
            const auto phi = ev.basis(q);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    local(i, j) += ev.weight(q) * (weights.mass * phi[i].value * phi[j].value +
                                                   weights.h1 * phi[i].grad.dot(phi[j].grad) +
                                                   weights.h2 * phi[i].hess.cwiseProduct(phi[j].hess).sum());
        }
        local.triangularView<Eigen::StrictlyLower>() = local.transpose();
        builder.add(k, k, local);
    }

    const auto coefficient = [](const QuadraticFormWeights::FaceTerm& term, bool interior, double h) {
        return interior ? term.interior * std::pow(h, term.interior_power)
                        : term.boundary * std::pow(h, term.boundary_power);
    };
    std::vector<FaceBasis> fb;
    for (std::size_t fi = 0; fi < mesh.faces.faces.size(); ++fi) {
        const Face& face = mesh.faces.faces[fi];
        const bool interior = !face.is_boundary();
        const double h = mesh.metrics.face_h[fi];
        const double c0 = coefficient(weights.jump, interior, h);
        const double c1 = coefficient(weights.jump_dn, interior, h);
        const double c2 = coefficient(weights.jump_tan, interior, h);
        if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0) continue;
        const FaceValues fv(tables, face, mesh.maps);
        const int m = interior ? 2 * n : n;
        Eigen::MatrixXd flocal = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            face_basis(fv, q, fb);
            const double w = fv.weight(q);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j)
                    flocal(i, j) += w * (c0 * fb[i].jump * fb[j].jump + c1 * fb[i].jump_dn * fb[j].jump_dn +
                                         c2 * fb[i].jump_tan * fb[j].jump_tan);
        }
        flocal.triangularView<Eigen::StrictlyLower>() = flocal.transpose();
        scatter_face(builder, face, flocal, n);
    }
    return std::move(builder).finish();
}

ElementField dg_field(const DGSpace& space, const std::vector<CurvedMap>& maps, std::span<const double> coefficients) {
    const std::vector<double> coeffs(coefficients.begin(), coefficients.end());
    return [&space, &maps, coeffs](int k, const Vec2& ref) {
        const auto phi = physical_derivatives(space, maps[k], ref, 3);
        return combine(phi, std::span<const double>(coeffs).subspan(space.dof(k, 0), space.local_size()));
    };
}

ElementField analytic_field(const std::vector<CurvedMap>& maps, std::function<PointDerivs(const Vec2&)> fn) {
    return [&maps, fn = std::move(fn)](int k, const Vec2& ref) { return fn(maps[k].map_point(ref)); };
}

double eval_form_C(const CurvedMesh& mesh, const ElementField& u, const ElementField& v, const EdgeRule& rule) {
    double total = 0.0;
    for (const Face& face : mesh.faces.faces) {
        if (face.is_boundary()) continue;
        const EdgeLocation loc = right_edge_location(face, mesh.maps);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double t = rule.points[q];
            const FaceFrame frame = face_frame(face, mesh.maps, t);
            const Vec2 lref = reference_edge_point(face.left_edge, t);
            const Vec2 rref = reference_edge_point(loc.edge, loc.reversed ? 1.0 - t : t);
            const TraceDerivs ul = trace_from_physical(u(face.left, lref), frame);
            const TraceDerivs ur = trace_from_physical(u(face.right, rref), frame);
            const TraceDerivs vl = trace_from_physical(v(face.left, lref), frame);
            const TraceDerivs vr = trace_from_physical(v(face.right, rref), frame);
            FaceBasis a;
            a.avg_tan_lap = 0.5 * (ul.tangential_laplacian + ur.tangential_laplacian);
            a.avg_dn = 0.5 * (ul.normal_derivative + ur.normal_derivative);
            a.avg_tan_dn = 0.5 * (ul.tangential_normal_derivative + ur.tangential_normal_derivative);
            a.avg_tan = 0.5 * (ul.tangential + ur.tangential);
            FaceBasis b;
            b.jump_dn = vl.normal_derivative - vr.normal_derivative;
            b.jump_tan = vl.tangential - vr.tangential;
            total += rule.weights[q] * frame.metric * form_C_point(frame, a, b);
        }
    }
    return total;
}

} // namespace curveddg
