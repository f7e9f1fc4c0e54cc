#include "curveddg/error.hpp"
#include "curveddg/study.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace curveddg;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Vec2> sample_points(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> r(0.05, 0.95), a(0.0, 2 * pi);
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        const double rr = r(rng), th = a(rng);
        pts.emplace_back(rr * std::cos(th), rr * std::sin(th));
    }
    return pts;
}

template <class F>
double five_point_laplacian(F f, const Vec2& x, double h) {
    const Vec2 ex(h, 0), ey(0, h);
    return (f(x + ex) + f(x - ex) + f(x + ey) + f(x - ey) - 4 * f(x)) / (h * h);
}

// Richardson extrapolation of the 5-point stencil: fourth order in h.
template <class F>
double extrapolated_laplacian(F f, const Vec2& x, double h) {
    return (4 * five_point_laplacian(f, x, h / 2) - five_point_laplacian(f, x, h)) / 3;
}

double laplacian_of(PointDerivs (*u)(const Vec2&), const Vec2& x) { return u(x).hess.trace(); }

} // namespace

TEST(Exact, PoissonRhsMatchesClosedForm) {
    // -Delta g(|x|^2) = -(4 g' + 4 s g'').
    for (const Vec2& x : sample_points(20, 1)) {
        const double s = x.squaredNorm();
        EXPECT_NEAR(poisson_rhs(x), -(pi * std::cos(pi * s) - pi * pi * s * std::sin(pi * s)), 1e-13);
        EXPECT_NEAR(poisson_exact(x).value, 0.25 * std::sin(pi * s), 1e-15);
    }
}

TEST(Exact, PoissonRhsMatchesFiniteDifferences) {
    const auto u = [](const Vec2& x) { return poisson_exact(x).value; };
    for (const Vec2& x : sample_points(20, 2)) {
        EXPECT_NEAR(-extrapolated_laplacian(u, x, 2e-3), poisson_rhs(x), 1e-6 * std::abs(poisson_rhs(x)));
    }
}

TEST(Exact, BiharmonicRhsMatchesClosedForm) {
    // Delta^2 g(|x|^2) = 32 g'' + 64 s g''' + 16 s^2 g'''' with g = sin^2(pi s).
    for (const Vec2& x : sample_points(20, 3)) {
        const double s = x.squaredNorm();
        const double g2 = 2 * pi * pi * std::cos(2 * pi * s);
        const double g3 = -4 * pi * pi * pi * std::sin(2 * pi * s);
        const double g4 = -8 * pi * pi * pi * pi * std::cos(2 * pi * s);
        const double ref = 32 * g2 + 64 * s * g3 + 16 * s * s * g4;
        EXPECT_NEAR(biharmonic_rhs(x), ref, 1e-11 * (1 + std::abs(ref)));
    }
}

TEST(Exact, BiharmonicRhsMatchesFiniteDifferences) {
    const auto lap = [](const Vec2& x) { return laplacian_of(biharmonic_exact, x); };
    const auto u = [](const Vec2& x) { return biharmonic_exact(x).value; };
    for (const Vec2& x : sample_points(20, 4)) {
        EXPECT_NEAR(extrapolated_laplacian(u, x, 2e-3), lap(x), 1e-6 * (1 + std::abs(lap(x))));
        EXPECT_NEAR(extrapolated_laplacian(lap, x, 2e-3), biharmonic_rhs(x), 1e-6 * std::abs(biharmonic_rhs(x)));
    }
}

TEST(Exact, DerivativesMatchFiniteDifferences) {
    const double h = 1e-5;
    for (auto* u : {&poisson_exact, &biharmonic_exact})
        for (const Vec2& x : sample_points(10, 5))
            for (int i = 0; i < 2; ++i) {
                Vec2 e = Vec2::Zero();
                e[i] = h;
                const PointDerivs p = u(x + e), m = u(x - e), c = u(x);
                EXPECT_NEAR((p.value - m.value) / (2 * h), c.grad[i], 1e-8);
                for (int a = 0; a < 2; ++a) {
                    EXPECT_NEAR((p.grad[a] - m.grad[a]) / (2 * h), c.hess(a, i), 1e-7);
                    for (int b = 0; b < 2; ++b)
                        EXPECT_NEAR((p.hess(a, b) - m.hess(a, b)) / (2 * h), c.third(a, b, i), 1e-5);
                }
            }
}

TEST(Exact, RadialFunctionOfLinearProfile) {
    // g(s) = s gives |x|^2.
    const Vec2 x(0.3, -0.7);
    const PointDerivs d = radial_function(x, x.squaredNorm(), 1.0, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(d.value, 0.58);
    EXPECT_DOUBLE_EQ(d.grad.x(), 0.6);
    EXPECT_DOUBLE_EQ(d.grad.y(), -1.4);
    EXPECT_DOUBLE_EQ(d.hess(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(d.hess(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(d.hess(1, 1), 2.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) EXPECT_EQ(d.third(i, j, k), 0.0);
}

TEST(Config, Validation) {
    StudyConfig c;
    EXPECT_NO_THROW(c.validate());
    c.levels = 1;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    c = {};
    c.h0 = 0.0;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    c = {};
    c.degree = 11;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    c = {};
    c.problem = Problem::biharmonic;
    c.degree = 1;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    c = {};
    c.tol = 1e-3;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    c = {};
    c.quad_degree = 21;
    EXPECT_THROW(c.validate(), InvalidParameterError);
    EXPECT_THROW(run_convergence(c), InvalidParameterError);
}

TEST(Study, ShortPoissonRunAndCsvRoundTrip) {
    StudyConfig c;
    c.degree = 1;
    c.levels = 3;
    c.h0 = 0.4;
    const ConvergenceReport r = run_convergence(c);
    ASSERT_TRUE(r.failure.empty()) << r.failure;
    ASSERT_EQ(r.levels.size(), 3u);
    for (std::size_t l = 1; l < 3; ++l) {
        EXPECT_LT(r.levels[l].errors.h, r.levels[l - 1].errors.h);
        EXPECT_LT(r.levels[l].errors.err_L2, r.levels[l - 1].errors.err_L2);
        EXPECT_LE(r.levels[l].relative_residual, 1e-10);
    }

    std::stringstream ss;
    write_convergence_csv(r, ss);
    const CsvTable t = read_csv(ss);
    ASSERT_EQ(t.rows.size(), 3u);
    const std::vector<std::string> expected{"level",  "h",          "dofs", "err_L2", "err_H1_broken", "err_h1_norm",
                                            "eoc_err_L2", "eoc_err_H1_broken", "eoc_err_h1_norm"};
    EXPECT_EQ(t.header, expected);
    const int ih = t.column_index("h"), il2 = t.column_index("err_L2"), ieoc = t.column_index("eoc_err_L2");
    for (std::size_t l = 0; l < 3; ++l) {
        EXPECT_EQ(t.rows[l][ih], r.levels[l].errors.h);
        EXPECT_EQ(t.rows[l][il2], r.levels[l].errors.err_L2);
        EXPECT_EQ(t.rows[l][t.column_index("dofs")], r.levels[l].errors.dofs);
    }
    EXPECT_TRUE(std::isnan(t.rows[0][ieoc]));
    const auto e = eoc(r.column("err_L2"), r.column("h"));
    EXPECT_NEAR(t.rows[2][ieoc], e[1], 1e-14);
}

TEST(Study, BiharmonicColumns) {
    StudyConfig c;
    c.problem = Problem::biharmonic;
    c.degree = 2;
    c.levels = 2;
    c.h0 = 0.5;
    c.tol = 1e-8;
    const ConvergenceReport r = run_convergence(c);
    ASSERT_TRUE(r.failure.empty()) << r.failure;
    EXPECT_EQ(r.error_columns().size(), 5u);
    EXPECT_GT(r.levels[1].errors.err_h2_norm, 0.0);
    EXPECT_THROW(r.column("nope"), InvalidParameterError);
}

TEST(Csv, ParseErrors) {
    std::stringstream bad("a,b\n1,2\n3\n");
    try {
        read_csv(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    std::stringstream word("a\nx1\n");
    EXPECT_THROW(read_csv(word), ParseError);
    std::stringstream blanks("# note\na,b\n1,\n");
    const CsvTable t = read_csv(blanks);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_TRUE(std::isnan(t.rows[0][1]));
}

TEST(Csv, InequalityCsvDeterministic) {
    const std::vector<CurvedMesh> levels = disk_levels(0.5, 2);
    InequalityOptions opt;
    opt.samples = 50;
    opt.refinement_steps = 5;
    std::stringstream a, b;
    write_inequality_csv(verify_inequalities(2, levels, opt), a);
    write_inequality_csv(verify_inequalities(2, levels, opt), b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("# max/min across levels:"), std::string::npos);
    std::stringstream again(a.str());
    EXPECT_EQ(read_csv(again).rows.size(), 2u);
}

TEST(Csv, SingleLevelNotice) {
    InequalityReport r;
    r.degree = 2;
    r.levels.push_back({});
    r.levels.back().h = 0.5;
    std::stringstream s;
    write_inequality_csv(r, s);
    EXPECT_NE(s.str().find("# single level"), std::string::npos);
    EXPECT_EQ(s.str().find("max/min across levels:"), std::string::npos);
}

TEST(Levels, HalvingTargets) {
    const auto levels = disk_levels(0.5, 3);
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0].num_elements(), 24);
    EXPECT_EQ(levels[1].num_elements(), 96);
    EXPECT_EQ(levels[2].num_elements(), 384);
}
