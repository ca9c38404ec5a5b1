#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "oiso/example_space.hpp"
#include "oiso/numeric.hpp"
#include "oiso/random.hpp"
#include "oiso/space.hpp"

namespace oiso::gen {

/// A known weighted composition Tf(y) = weight(y) f(sigma(y)).
struct Monomial {
    std::vector<std::size_t> sigma;
    VectorXq weight;

    MatrixXq matrix() const;
};

/// Weights log-uniform on [1e-3, 1e3]; the doubles are taken exactly.
Monomial positive_monomial(Rng& rng, std::size_t n);
/// Weights +-1 with random signs.
Monomial signed_unimodular(Rng& rng, std::size_t n);
/// Weights 1.
Monomial permutation(Rng& rng, std::size_t n);

/// Invertible, entrywise nonnegative and not monomial. Small integer entries,
/// so the inverse is exact.
MatrixXq nonnegative_non_monomial(Rng& rng, std::size_t n);

/// The monomial plus uniform noise on [-magnitude, magnitude] in every
/// off-support entry.
Eigen::MatrixXd perturbed(const Monomial& m, double magnitude, Rng& rng);

/// Points uniform in the unit square, Euclidean distance.
std::shared_ptr<const PointSpace> euclidean_space(Rng& rng, std::size_t n);
/// Shortest-path metric of a random connected graph with integer edge lengths.
std::shared_ptr<const PointSpace> graph_space(Rng& rng, std::size_t n);
std::shared_ptr<const PointSpace> metric_space(Rng& rng, std::size_t n);

/// Coefficient of t in the linear growth of a theta expression: theta nodes
/// are bounded and contribute 0.
double linear_coefficient(const Expr& e);

/// A member of X_n of level exactly n, built from clamp.
Expr x_expression(Rng& rng, std::size_t level);
/// A member of Sigma_n of level exactly n, built from theta, scaled so that
/// |linear_coefficient| <= 1/2.
Expr sigma_expression(Rng& rng, std::size_t level);

/// A subinterval of [0, 1] of length at least min_length.
IntervalBox subinterval(Rng& rng, double min_length = 0.05);

} // namespace oiso::gen
