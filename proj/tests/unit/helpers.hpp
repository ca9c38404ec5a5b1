#pragma once

#include <memory>
#include <vector>

#include "oiso/space.hpp"

namespace oiso::test {

inline std::shared_ptr<const PointSpace> grid(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
    return std::make_shared<const PointSpace>(labels);
}

/// Points i / (n - 1) of [0, 1].
inline Eigen::VectorXd grid_values(std::size_t n) {
    return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0.0, 1.0);
}

/// Rows 1, t, t^2, ... up to degree `degree` on the grid.
inline std::shared_ptr<const FunctionFamily> polynomials(std::size_t n, std::size_t degree) {
    const Eigen::VectorXd t = grid_values(n);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(degree + 1), static_cast<Eigen::Index>(n));
    for (Eigen::Index d = 0; d <= static_cast<Eigen::Index>(degree); ++d) g.row(d) = t.array().pow(static_cast<double>(d)).transpose();
    return std::make_shared<const FunctionFamily>(grid(n), g);
}

/// Exact rows 1, t on the grid k / (n - 1).
inline std::shared_ptr<const FunctionFamily> exact_affine(std::size_t n) {
    MatrixXq g(2, static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
        g(0, k) = 1;
        g(1, k) = Rational(k) / Rational(static_cast<long>(n) - 1);
    }
    return std::make_shared<const FunctionFamily>(grid(n), g);
}

} // namespace oiso::test
