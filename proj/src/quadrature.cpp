#include "curveddg/quadrature.hpp"

#include "curveddg/error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace curveddg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

EdgeRule gauss_legendre(int n) {
    if (n < 1) throw InvalidParameterError("gauss_legendre: need at least one point");
    EdgeRule rule;
    rule.degree = 2 * n - 1;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 1.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = 0.5 * (1.0 - x);
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

EdgeRule edge_rule(int degree) {
    if (degree < 0 || degree > 2 * kMaxQuadratureDegree + 1)
        throw InvalidParameterError("edge_rule: unsupported degree " + std::to_string(degree));
    EdgeRule rule = gauss_legendre(std::max(1, (degree + 2) / 2));
    return rule;
}

namespace {

// Barycentric (a, b, c) -> reference (x, y) = (b, c); weight given for unit area.
void add_orbit(TriangleRule& rule, double /*a*/, double b, double c, double weight) {
    rule.points.emplace_back(b, c);
    rule.weights.push_back(0.5 * weight);
}

void add_s21(TriangleRule& rule, double a, double weight) {
    const double b = 1.0 - 2.0 * a;
    add_orbit(rule, b, a, a, weight);
    add_orbit(rule, a, b, a, weight);
    add_orbit(rule, a, a, b, weight);
}

TriangleRule collapsed_rule(int degree) {
    // (x, y) = (u (1 - v), v) with Jacobian (1 - v).
    const EdgeRule gu = gauss_legendre(std::max(1, (degree + 2) / 2));
    const EdgeRule gv = gauss_legendre(std::max(1, (degree + 3) / 2));
    TriangleRule rule;
    rule.degree = degree;
    for (std::size_t j = 0; j < gv.size(); ++j)
        for (std::size_t i = 0; i < gu.size(); ++i) {
            const double v = gv.points[j];
            rule.points.emplace_back(gu.points[i] * (1.0 - v), v);
            rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - v));
        }
    return rule;
}

} // namespace

TriangleRule triangle_rule(int degree) {
    if (degree < 1 || degree > kMaxQuadratureDegree)
        throw InvalidParameterError("triangle_rule: unsupported degree " + std::to_string(degree) +
                                    " (supported 1.." + std::to_string(kMaxQuadratureDegree) + ")");
    TriangleRule rule;
    rule.degree = degree;
    switch (degree) {
    case 1:
        add_orbit(rule, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0);
        return rule;
    case 2:
        add_s21(rule, 1.0 / 6.0, 1.0 / 3.0);
        return rule;
    case 3:
    case 4:
        add_s21(rule, 0.445948490915965, 0.223381589678011);
        add_s21(rule, 0.091576213509771, 0.109951743655322);
        return rule;
    case 5:
        add_orbit(rule, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225);
        add_s21(rule, 0.470142064105115, 0.132394152788506);
        add_s21(rule, 0.101286507323456, 0.125939180544827);
        return rule;
    default:
        return collapsed_rule(degree);
    }
}

double integrate_element(const PointFunction& f, const CurvedMap& map, const TriangleRule& rule) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2& p = rule.points[q];
        sum += rule.weights[q] * f(map.map_point(p)) * map.jacobian(p).determinant();
    }
    return sum;
}

double integrate_face(const PointFunction& g, const Face& face, const std::vector<CurvedMap>& maps,
                      const EdgeRule& rule) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const FaceFrame frame = face_frame(face, maps, rule.points[q]);
        sum += rule.weights[q] * g(frame.point) * frame.metric;
    }
    return sum;
}

} // namespace curveddg
