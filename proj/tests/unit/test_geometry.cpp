#include "curveddg/error.hpp"
#include "curveddg/forms.hpp"
#include "curveddg/geometry.hpp"
#include "curveddg/metrics.hpp"
#include "curveddg/quadrature.hpp"
#include "curveddg/space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace curveddg;

namespace {

// Straight triangle with midpoints pushed off the edges by at most `bump`
// times the edge length; small bumps keep C_K well below one.
CurvedMap random_map(std::mt19937_64& rng, double bump) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<Vec2, 6> n;
    n[0] = Vec2(0.1 * u(rng), 0.1 * u(rng));
    n[1] = Vec2(1.0 + 0.1 * u(rng), 0.1 * u(rng));
    n[2] = Vec2(0.3 + 0.1 * u(rng), 0.9 + 0.1 * u(rng));
    for (int e = 0; e < 3; ++e) {
        const Vec2 a = n[e], b = n[(e + 1) % 3];
        const Vec2 d = b - a;
        const Vec2 normal(d.y(), -d.x());
        n[3 + e] = 0.5 * (a + b) + bump * u(rng) * normal;
    }
    return CurvedMap(n);
}

// Value of reference function rho o F^{-1} at a physical point.
double pulled_value(const ReferenceBasis& basis, int j, const CurvedMap& map, const Vec2& x) {
    return basis.evaluate(map.inverse_point(x))[j].value;
}

PointDerivs physical_at(const ReferenceBasis& basis, int j, const CurvedMap& map, const Vec2& x) {
    const Vec2 ref = map.inverse_point(x);
    return push_forward(basis.evaluate(ref)[j], map.derivatives(ref));
}

} // namespace

TEST(CurvedMap, InterpolatesNodes) {
    std::mt19937_64 rng(1);
    const CurvedMap map = random_map(rng, 0.1);
    const std::array<Vec2, 6> ref{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(0.5, 0), Vec2(0.5, 0.5), Vec2(0, 0.5)};
    for (int i = 0; i < 6; ++i) EXPECT_LT((map.map_point(ref[i]) - map.nodes()[i]).norm(), 1e-15);
    EXPECT_FALSE(map.is_affine());
}

TEST(CurvedMap, JacobianMatchesDifferences) {
    std::mt19937_64 rng(2);
    const CurvedMap map = random_map(rng, 0.1);
    const Vec2 p(0.2, 0.3);
    const double d = 1e-6;
    for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e[a] = d;
        const Vec2 fd = (map.map_point(p + e) - map.map_point(p - e)) / (2 * d);
        EXPECT_LT((fd - map.jacobian(p).col(a)).norm(), 1e-9);
        // F is quadratic, so differences of the Jacobian are exact up to rounding.
        const Mat2 djac = (map.jacobian(p + e) - map.jacobian(p - e)) / (2 * d);
        for (int k = 0; k < 2; ++k)
            for (int b = 0; b < 2; ++b) EXPECT_NEAR(djac(k, b), map.second_derivative()[k](b, a), 1e-8);
    }
}

TEST(CurvedMap, InverseRoundTrip) {
    std::mt19937_64 rng(3);
    const CurvedMap map = random_map(rng, 0.15);
    for (const Vec2& r : {Vec2(0.1, 0.1), Vec2(0.7, 0.2), Vec2(0.05, 0.9), Vec2(1.0 / 3, 1.0 / 3)})
        EXPECT_LT((map.inverse_point(map.map_point(r)) - r).norm(), 1e-13);
}

TEST(CurvedMap, DegenerateElementThrows) {
    const std::array<Vec2, 6> n{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(0.5, 0), Vec2(1.5, 0), Vec2(1, 0)};
    EXPECT_THROW(CurvedMap(n).derivatives(Vec2(0.2, 0.2)), GeometryError);
}

// Chain rule for orders 1-3 against central differences of the pulled-back
// function (first order) and of the next-lower pushed-forward derivatives.
TEST(ChainRule, MatchesFiniteDifferences) {
    std::mt19937_64 rng(4);
    const ReferenceBasis basis(3);
    const double d = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        const CurvedMap map = random_map(rng, 0.12);
        ASSERT_LT(nonlinearity_constant(map), 1.0);
        const Vec2 x = map.map_point(Vec2(0.25, 0.3));
        const int j = trial % basis.size();
        const PointDerivs v = physical_at(basis, j, map, x);
        double scale = 1.0;
        for (int a = 0; a < 2; ++a) {
            Vec2 e = Vec2::Zero();
            e[a] = d;
            const double g = (pulled_value(basis, j, map, x + e) - pulled_value(basis, j, map, x - e)) / (2 * d);
            const PointDerivs vp = physical_at(basis, j, map, x + e);
            const PointDerivs vm = physical_at(basis, j, map, x - e);
            scale = std::max({scale, std::abs(v.grad[a]), v.hess.cwiseAbs().maxCoeff()});
            EXPECT_NEAR(g, v.grad[a], 1e-5 * scale) << "trial " << trial;
            for (int i = 0; i < 2; ++i) {
                EXPECT_NEAR((vp.grad[i] - vm.grad[i]) / (2 * d), v.hess(i, a), 1e-5 * scale) << "trial " << trial;
                for (int k = 0; k < 2; ++k)
                    EXPECT_NEAR((vp.hess(i, k) - vm.hess(i, k)) / (2 * d), v.third(i, k, a), 1e-5 * scale)
                        << "trial " << trial;
            }
        }
    }
}

TEST(ChainRule, AffineMapOfLinearFunction) {
    // v(x) = 2 x - y on an affine element: rho = 2 F_0 - F_1 in reference variables.
    const std::array<Vec2, 6> n{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1), Vec2(1, 0), Vec2(1.25, 0.5), Vec2(0.25, 0.5)};
    const CurvedMap map(n);
    EXPECT_TRUE(map.is_affine());
    PointDerivs ref;
    const Mat2 B = map.affine_matrix();
    ref.value = 0.0;
    ref.grad = B.transpose() * Vec2(2.0, -1.0);
    const PointDerivs v = push_forward(ref, map.derivatives(Vec2(0.3, 0.3)));
    EXPECT_NEAR(v.grad[0], 2.0, 1e-14);
    EXPECT_NEAR(v.grad[1], -1.0, 1e-14);
    EXPECT_LT(v.hess.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FaceFrame, TangentialDecomposition) {
    const CurvedMesh cm = make_disk(0.25);
    const DGSpace space(3, cm.num_elements());
    const ReferenceTables tables(space);
    for (std::size_t f = 0; f < cm.faces.faces.size(); f += 7) {
        const Face& face = cm.faces.faces[f];
        const FaceValues fv(tables, face, cm.maps);
        for (std::size_t q = 0; q < fv.size(); ++q) {
            const FaceFrame& fr = fv.frame(q);
            EXPECT_NEAR(fr.normal.norm(), 1.0, 1e-14);
            EXPECT_NEAR(fr.normal.dot(fr.tangent), 0.0, 1e-14);
            for (const TraceDerivs& t : fv.left(q)) {
                const Vec2 rebuilt = t.normal_derivative * fr.normal + t.tangential * fr.tangent;
                EXPECT_LT((rebuilt - t.phys.grad).norm(), 1e-12 * (1.0 + t.phys.grad.norm()));
                const TraceDerivs alt = trace_from_physical(t.phys, fr);
                const double s = 1.0 + t.phys.hess.cwiseAbs().maxCoeff();
                EXPECT_NEAR(alt.tangential_laplacian, t.tangential_laplacian, 1e-10 * s);
                EXPECT_NEAR(alt.tangential_normal_derivative, t.tangential_normal_derivative, 1e-10 * s);
                EXPECT_NEAR(alt.laplacian, t.laplacian, 1e-12 * s);
            }
        }
    }
}

TEST(FaceFrame, BoundaryCurvatureApproachesCircle) {
    // P2 interpolation of a circular arc: curvature error is O(h^2).
    double previous = 1.0;
    for (double h : {0.25, 0.125, 0.0625}) {
        const CurvedMesh cm = make_disk(h);
        double worst = 0.0;
        for (const Face& face : cm.faces.faces) {
            if (!face.is_boundary()) continue;
            for (double t : {0.0, 0.3, 0.5, 1.0}) {
                const FaceFrame fr = face_frame(face, cm.maps, t);
                worst = std::max(worst, std::abs(fr.curvature - 1.0));
                EXPECT_GT(fr.normal.dot(fr.point), 0.9);
                EXPECT_NEAR(q_form(fr, fr.tangent, fr.tangent), fr.curvature, 1e-13);
                EXPECT_NEAR(q_form(fr, fr.normal, fr.normal), 0.0, 1e-13);
            }
        }
        EXPECT_LT(worst, 0.6 * previous);
        previous = worst;
    }
    EXPECT_LT(previous, 0.05);
}

TEST(FaceFrame, InteriorFacesAreStraight) {
    const CurvedMesh cm = make_disk(0.25);
    for (const Face& face : cm.faces.faces) {
        if (face.is_boundary()) continue;
        const FaceFrame fr = face_frame(face, cm.maps, 0.4);
        EXPECT_NEAR(fr.curvature, 0.0, 1e-12);
        // Normal points from left to right element.
        const Vec2 cl = cm.maps[face.left].map_point(Vec2(1.0 / 3, 1.0 / 3));
        EXPECT_LT(fr.normal.dot(cl - fr.point), 0.0);
    }
}

TEST(FaceFrame, RightEdgeMatchesLeftParameter) {
    const CurvedMesh cm = make_disk(0.25);
    for (const Face& face : cm.faces.faces) {
        if (face.is_boundary()) continue;
        const EdgeLocation loc = right_edge_location(face, cm.maps);
        for (double t : {0.0, 0.2, 0.9}) {
            const Vec2 xl = cm.maps[face.left].map_point(reference_edge_point(face.left_edge, t));
            const Vec2 xr = cm.maps[face.right].map_point(reference_edge_point(loc.edge, loc.reversed ? 1.0 - t : t));
            EXPECT_LT((xl - xr).norm(), 1e-14);
        }
    }
}

TEST(CurvedMap, InverseMapDerivativesMatchDifferences) {
    std::mt19937_64 rng(5);
    const double d = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        const CurvedMap map = random_map(rng, 0.12);
        const Vec2 x = map.map_point(Vec2(0.3, 0.25));
        const MapDerivatives md = map.derivatives(map.inverse_point(x));
        for (int j = 0; j < 2; ++j) {
            Vec2 e = Vec2::Zero();
            e[j] = d;
            const MapDerivatives p = map.derivatives(map.inverse_point(x + e));
            const MapDerivatives m = map.derivatives(map.inverse_point(x - e));
            for (int a = 0; a < 2; ++a)
                for (int i = 0; i < 2; ++i) {
                    const double fd2 = (p.inverse(a, i) - m.inverse(a, i)) / (2 * d);
                    EXPECT_NEAR(fd2, md.inverse2[a](i, j), 1e-5 * (1.0 + std::abs(md.inverse2[a](i, j))));
                    for (int l = 0; l < 2; ++l) {
                        const double fd3 = (p.inverse2[a](i, l) - m.inverse2[a](i, l)) / (2 * d);
                        EXPECT_NEAR(fd3, md.inverse3[a](i, l, j), 1e-5 * (1.0 + std::abs(md.inverse3[a](i, l, j))));
                    }
                }
        }
    }
}

TEST(CurvedMap, AffineElementHasConstantJacobian) {
    const std::array<Vec2, 6> n{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1), Vec2(1, 0), Vec2(1.25, 0.5), Vec2(0.25, 0.5)};
    const CurvedMap map(n);
    for (const Vec2& r : {Vec2(0.1, 0.2), Vec2(0.6, 0.3)}) {
        const MapDerivatives md = map.derivatives(r);
        EXPECT_LT((md.jacobian - map.affine_matrix()).norm(), 1e-15);
        for (int a = 0; a < 2; ++a) {
            EXPECT_EQ(md.second[a].norm(), 0.0);
            EXPECT_LT(md.inverse2[a].norm(), 1e-15);
        }
    }
    EXPECT_LT((map.map_point(Vec2(0.5, 0.5)) - 0.5 * (n[1] + n[2])).norm(), 1e-15);
}

TEST(CurvedMap, DeterminantBoundedByNonlinearity) {
    for (double h : {0.5, 0.25, 0.125}) {
        const CurvedMesh cm = make_disk(h);
        const TriangleRule rule = triangle_rule(8);
        for (int k = 0; k < cm.num_elements(); ++k) {
            const CurvedMap& map = cm.maps[k];
            const double c = cm.metrics.nonlinearity[k];
            const double det0 = map.affine_matrix().determinant();
            for (const Vec2& r : rule.points) {
                const double det = map.jacobian(r).determinant();
                EXPECT_GE(det, (1 - c) * (1 - c) * det0 * (1 - 1e-12));
                EXPECT_LE(det, (1 + c) * (1 + c) * det0 * (1 + 1e-12));
            }
        }
    }
}

TEST(FaceFrame, NeighbourNormalsAreOpposite) {
    const CurvedMesh cm = make_disk(0.2);
    for (const Face& face : cm.faces.faces) {
        if (face.is_boundary()) continue;
        const EdgeLocation loc = right_edge_location(face, cm.maps);
        for (double t : {0.1, 0.5, 0.8}) {
            const FaceFrame l = face_frame(face, cm.maps, t);
            const FaceFrame r = edge_frame(cm.maps[face.right], loc.edge, loc.reversed ? 1.0 - t : t);
            EXPECT_LT((l.normal + r.normal).norm(), 1e-14);
            EXPECT_LT((l.point - r.point).norm(), 1e-14);
        }
    }
}

TEST(FaceFrame, CurvatureOnFineDisk) {
    const CurvedMesh cm = make_disk(0.05);
    const EdgeRule rule = edge_rule(8);
    for (const Face& face : cm.faces.faces) {
        if (!face.is_boundary()) continue;
        for (double t : rule.points) {
            const FaceFrame fr = face_frame(face, cm.maps, t);
            EXPECT_GE(std::abs(fr.curvature), 0.9);
            EXPECT_LE(std::abs(fr.curvature), 1.1);
        }
    }
}

TEST(FaceFrame, ShapeOperatorOnStraightFaceIsZero) {
    const CurvedMesh cm = make_straight_mesh(generate_disk_mesh(0.5));
    const FaceFrame fr = face_frame(cm.faces.faces[0], cm.maps, 0.3);
    EXPECT_EQ(fr.curvature, 0.0);
    EXPECT_EQ(q_form(fr, Vec2(1.0, 2.0), Vec2(-3.0, 0.5)), 0.0);
}
