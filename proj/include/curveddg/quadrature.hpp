#pragma once

#include "curveddg/geometry.hpp"
#include "curveddg/types.hpp"

#include <functional>
#include <vector>

namespace curveddg {

/// Rule on the reference triangle; weights sum to 1/2.
struct TriangleRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int degree = 0;
    std::size_t size() const { return weights.size(); }
};

/// Rule on [0,1]; weights sum to 1.
struct EdgeRule {
    std::vector<double> points;
    std::vector<double> weights;
    int degree = 0;
    std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Positive-weight rule exact for polynomials of total degree <= degree,
/// 1 <= degree <= 20. Symmetric tabulated rules for degree <= 5, collapsed
/// Gauss-Legendre products above.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre on [0,1] exact to the requested degree.
EdgeRule edge_rule(int degree);

/// Gauss-Legendre with n points on [0,1].
EdgeRule gauss_legendre(int n);

using PointFunction = std::function<double(const Vec2&)>;

/// sum_i w_i f(F_K(p_i)) det DF_K(p_i)
double integrate_element(const PointFunction& f, const CurvedMap& map, const TriangleRule& rule);

/// sum_i w_i g(gamma(t_i)) |gamma'(t_i)| along the left element's edge.
double integrate_face(const PointFunction& g, const Face& face, const std::vector<CurvedMap>& maps,
                      const EdgeRule& rule);

} // namespace curveddg
