#include "curveddg/error.hpp"
#include "curveddg/forms.hpp"
#include "curveddg/metrics.hpp"
#include "curveddg/space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace curveddg;

TEST(ReferenceBasis, SizesAndRange) {
    for (int p = 1; p <= 10; ++p) EXPECT_EQ(ReferenceBasis(p).size(), (p + 1) * (p + 2) / 2);
    EXPECT_THROW(ReferenceBasis(0), InvalidParameterError);
    EXPECT_THROW(ReferenceBasis(11), InvalidParameterError);
    EXPECT_EQ(DGSpace(3, 7).num_dofs(), 70);
    EXPECT_EQ(DGSpace(3, 7).dof(2, 4), 24);
}

TEST(ReferenceBasis, NodalProperty) {
    for (int p = 1; p <= 10; ++p) {
        const ReferenceBasis basis(p);
        const double tol = 1e-13;
        for (int i = 0; i < basis.size(); ++i) {
            const auto v = basis.evaluate(basis.nodes()[i]);
            for (int j = 0; j < basis.size(); ++j) EXPECT_NEAR(v[j].value, i == j ? 1.0 : 0.0, tol) << "p=" << p;
        }
    }
}

TEST(ReferenceBasis, PartitionOfUnity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int p = 1; p <= 10; ++p) {
        const ReferenceBasis basis(p);
        const double tol = 1e-12;
        for (int trial = 0; trial < 5; ++trial) {
            double x = u(rng), y = u(rng);
            if (x + y > 1.0) x = 1.0 - x, y = 1.0 - y;
            PointDerivs sum;
            for (const PointDerivs& d : basis.evaluate(Vec2(x, y))) {
                sum.value += d.value;
                sum.grad += d.grad;
                sum.hess += d.hess;
                for (int k = 0; k < 8; ++k) sum.third.data[k] += d.third.data[k];
            }
            EXPECT_NEAR(sum.value, 1.0, tol);
            EXPECT_LT(sum.grad.cwiseAbs().maxCoeff(), tol * p * p);
            EXPECT_LT(sum.hess.cwiseAbs().maxCoeff(), tol * p * p * p * p);
            for (double t : sum.third.data) EXPECT_LT(std::abs(t), tol * std::pow(p, 6));
        }
    }
}

TEST(ReferenceBasis, DerivativesMatchDifferences) {
    const ReferenceBasis basis(4);
    const Vec2 r(0.21, 0.33);
    const double d = 1e-6;
    const auto v = basis.evaluate(r);
    for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e[a] = d;
        const auto vp = basis.evaluate(r + e);
        const auto vm = basis.evaluate(r - e);
        for (int j = 0; j < basis.size(); ++j) {
            const double s = 1.0 + std::abs(v[j].grad[a]);
            EXPECT_NEAR((vp[j].value - vm[j].value) / (2 * d), v[j].grad[a], 1e-7 * s);
            for (int i = 0; i < 2; ++i) {
                EXPECT_NEAR((vp[j].grad[i] - vm[j].grad[i]) / (2 * d), v[j].hess(i, a), 1e-6 * (1 + std::abs(v[j].hess(i, a))));
                for (int k = 0; k < 2; ++k)
                    EXPECT_NEAR((vp[j].hess(i, k) - vm[j].hess(i, k)) / (2 * d), v[j].third(i, k, a),
                                1e-5 * (1 + std::abs(v[j].third(i, k, a))));
            }
        }
    }
}

TEST(DGSpace, ReproducesPolynomialsOnCurvedElements) {
    // A mapped polynomial space contains constants; its physical gradient
    // must vanish everywhere on curved elements too.
    const CurvedMesh cm = make_disk(0.25);
    const DGSpace space(3, cm.num_elements());
    std::vector<double> ones(space.local_size(), 1.0);
    for (int k = 0; k < cm.num_elements(); ++k) {
        const auto d = physical_derivatives(space, cm.maps[k], Vec2(0.2, 0.6));
        const PointDerivs c = combine(d, ones);
        EXPECT_NEAR(c.value, 1.0, 1e-12);
        EXPECT_LT(c.grad.norm(), 1e-10);
        EXPECT_LT(c.hess.cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(DGSpace, ReproducesLinearFunctionsOnAffineElements) {
    const Mesh m = generate_disk_mesh(0.5);
    const CurvedMesh cm = make_straight_mesh(m);
    const DGSpace space(2, cm.num_elements());
    const auto& nodes = space.basis().nodes();
    for (int k = 0; k < cm.num_elements(); ++k) {
        std::vector<double> c;
        for (const Vec2& n : nodes) {
            const Vec2 x = cm.maps[k].map_point(n);
            c.push_back(3.0 * x.x() - 2.0 * x.y() + 0.5);
        }
        const PointDerivs v = combine(physical_derivatives(space, cm.maps[k], Vec2(0.1, 0.7)), c);
        EXPECT_NEAR(v.grad[0], 3.0, 1e-12);
        EXPECT_NEAR(v.grad[1], -2.0, 1e-12);
        EXPECT_LT(v.hess.cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Traces, LeftAndRightAgreeForContinuousFunction) {
    // Nodal interpolant of a linear function on a straight mesh is continuous:
    // both traces agree, including normal derivatives.
    const CurvedMesh cm = make_straight_mesh(generate_disk_mesh(0.5));
    const DGSpace space(2, cm.num_elements());
    const int n = space.local_size();
    std::vector<double> coeffs(space.num_dofs());
    for (int k = 0; k < cm.num_elements(); ++k)
        for (int j = 0; j < n; ++j) {
            const Vec2 x = cm.maps[k].map_point(space.basis().nodes()[j]);
            coeffs[space.dof(k, j)] = x.x() + 2.0 * x.y();
        }
    const ReferenceTables tables(space);
    for (const Face& face : cm.faces.faces) {
        if (face.is_boundary()) continue;
        const FaceValues fv(tables, face, cm.maps);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            const TraceDerivs l = combine_traces(fv.left(q), std::span(coeffs).subspan(face.left * n, n));
            const TraceDerivs r = combine_traces(fv.right(q), std::span(coeffs).subspan(face.right * n, n));
            EXPECT_NEAR(l.phys.value, r.phys.value, 1e-13);
            EXPECT_NEAR(l.normal_derivative, r.normal_derivative, 1e-12);
            EXPECT_NEAR(l.tangential, r.tangential, 1e-12);
        }
    }
}

TEST(ReferenceBasis, LinearBasisIsBarycentric) {
    const ReferenceBasis basis(1);
    const Vec2 r(0.2, 0.45);
    const auto v = basis.evaluate(r);
    EXPECT_NEAR(v[0].value, 1.0 - r.x() - r.y(), 1e-15);
    EXPECT_NEAR(v[1].value, r.x(), 1e-15);
    EXPECT_NEAR(v[2].value, r.y(), 1e-15);
    EXPECT_EQ(v[0].grad, Vec2(-1.0, -1.0));
    EXPECT_EQ(v[1].grad, Vec2(1.0, 0.0));
    EXPECT_EQ(v[2].grad, Vec2(0.0, 1.0));
}

TEST(ChainRule, LinearReferenceFunctionOnCurvedElement) {
    // With a vanishing reference Hessian only the D^2(F^{-1}) term remains.
    const CurvedMesh cm = make_disk(0.5);
    const DGSpace space(1, cm.num_elements());
    for (int k = 0; k < cm.num_elements(); ++k) {
        if (cm.maps[k].is_affine()) continue;
        const Vec2 r(0.3, 0.3);
        const MapDerivatives md = cm.maps[k].derivatives(r);
        const auto ref = space.basis().evaluate(r);
        const auto phys = physical_derivatives(space, cm.maps[k], r);
        for (int j = 0; j < 3; ++j) {
            Mat2 want = Mat2::Zero();
            for (int a = 0; a < 2; ++a) want += ref[j].grad[a] * md.inverse2[a];
            EXPECT_LT((phys[j].hess - want).norm(), 1e-13 * (1.0 + want.norm()));
        }
    }
}

TEST(ChainRule, AffineHessianIsCongruence) {
    const CurvedMesh cm = make_straight_mesh(generate_disk_mesh(0.5));
    const DGSpace space(3, cm.num_elements());
    const CurvedMap& map = cm.maps[5];
    const Mat2 Binv = map.affine_matrix().inverse();
    const Vec2 r(0.2, 0.1);
    const auto ref = space.basis().evaluate(r);
    const auto phys = physical_derivatives(space, map, r);
    for (int j = 0; j < space.local_size(); ++j) {
        const Mat2 want = Binv.transpose() * ref[j].hess * Binv;
        EXPECT_LT((phys[j].hess - want).norm(), 1e-12 * (1.0 + want.norm()));
    }
}

TEST(Traces, SmoothPolynomialHasNoJumps) {
    // w = x^3 - 2 x y^2 + y lies in the p = 3 space on affine elements.
    const CurvedMesh cm = make_straight_mesh(generate_disk_mesh(0.3));
    const DGSpace space(3, cm.num_elements());
    const int n = space.local_size();
    std::vector<double> c(space.num_dofs());
    for (int k = 0; k < cm.num_elements(); ++k)
        for (int j = 0; j < n; ++j) {
            const Vec2 x = cm.maps[k].map_point(space.basis().nodes()[j]);
            c[space.dof(k, j)] = x.x() * x.x() * x.x() - 2.0 * x.x() * x.y() * x.y() + x.y();
        }
    const ReferenceTables tables(space);
    for (const Face& face : cm.faces.faces) {
        if (face.is_boundary()) continue;
        const FaceValues fv(tables, face, cm.maps);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            const TraceDerivs l = combine_traces(fv.left(q), std::span(c).subspan(face.left * n, n));
            const TraceDerivs r = combine_traces(fv.right(q), std::span(c).subspan(face.right * n, n));
            EXPECT_NEAR(l.phys.value, r.phys.value, 1e-11);
            EXPECT_NEAR(l.normal_derivative, r.normal_derivative, 1e-11);
            EXPECT_NEAR(l.tangential, r.tangential, 1e-11);
            EXPECT_NEAR(l.laplacian, r.laplacian, 1e-11);
            EXPECT_NEAR(l.tangential_laplacian, r.tangential_laplacian, 1e-11);
            EXPECT_NEAR(l.tangential_normal_derivative, r.tangential_normal_derivative, 1e-11);
            EXPECT_NEAR(l.normal_laplacian_derivative, r.normal_laplacian_derivative, 1e-10);
        }
    }
}

TEST(Traces, StraightFaceTangentialLaplacian) {
    const CurvedMesh cm = make_straight_mesh(generate_disk_mesh(0.5));
    const DGSpace space(2, cm.num_elements());
    const ReferenceTables tables(space);
    const FaceValues fv(tables, cm.faces.faces[3], cm.maps);
    for (std::size_t q = 0; q < fv.size(); ++q) {
        const Vec2& tau = fv.frame(q).tangent;
        for (const TraceDerivs& t : fv.left(q))
            EXPECT_NEAR(t.tangential_laplacian, tau.dot(t.phys.hess * tau), 1e-10 * (1.0 + t.phys.hess.norm()));
    }
}

TEST(Traces, LaplacianSplitOnUnitCircle) {
    // w = x^2 y on the exact unit circle: Delta w = Delta_T w + H dw/dn + d^2w/dn^2
    // with Delta_T w = g''(theta) for g(theta) = cos^2 sin.
    for (double theta : {0.3, 1.1, 2.5, 4.0, 5.7}) {
        const Vec2 x(std::cos(theta), std::sin(theta));
        FaceFrame fr;
        fr.point = x;
        fr.normal = x;
        fr.tangent = Vec2(-x.y(), x.x());
        fr.metric = 1.0;
        fr.curvature = 1.0;
        fr.shape = fr.tangent * fr.tangent.transpose();
        PointDerivs w;
        w.value = x.x() * x.x() * x.y();
        w.grad = Vec2(2 * x.x() * x.y(), x.x() * x.x());
        w.hess << 2 * x.y(), 2 * x.x(), 2 * x.x(), 0.0;
        const TraceDerivs t = trace_from_physical(w, fr);
        const double s = std::sin(theta), c = std::cos(theta);
        const double g2 = 2 * s * s * s - 7 * c * c * s;
        EXPECT_NEAR(t.tangential_laplacian, g2, 1e-12);
        const double dnn = x.dot(w.hess * x);
        EXPECT_NEAR(t.laplacian - t.tangential_laplacian - fr.curvature * t.normal_derivative - dnn, 0.0, 1e-12);
    }
}
