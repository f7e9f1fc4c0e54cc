#pragma once

#include <Eigen/Dense>

#include <array>

namespace curveddg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Fully symmetric third-order tensor in two variables, stored densely.
struct Tensor3 {
    std::array<double, 8> data{};

    double& operator()(int i, int j, int k) { return data[4 * i + 2 * j + k]; }
    double operator()(int i, int j, int k) const { return data[4 * i + 2 * j + k]; }

    /// Contraction T_{iik} v_k, i.e. the directional derivative of the Laplacian.
    double laplacian_derivative(const Vec2& v) const {
        double out = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) out += (*this)(i, i, k) * v[k];
        return out;
    }
};

/// Second-order tensor with a free leading index: D2[a](i,j).
using Tensor2x2x2 = std::array<Mat2, 2>;

/// Value and physical derivatives up to order three of a scalar field at a point.
struct PointDerivs {
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
    Tensor3 third{};
};

} // namespace curveddg
