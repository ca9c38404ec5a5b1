#include "oiso/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oiso/error.hpp"

namespace oiso::gen {

MatrixXq Monomial::matrix() const {
    const auto n = static_cast<Eigen::Index>(sigma.size());
    MatrixXq m = MatrixXq::Zero(n, n);
    for (Eigen::Index y = 0; y < n; ++y) m(y, static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(y)])) = weight(y);
    return m;
}

namespace {

Monomial with_weights(Rng& rng, std::size_t n, auto&& draw) {
    if (n == 0) throw InvalidArgument("dimension must be positive");
    Monomial m{rng.permutation(n), VectorXq(static_cast<Eigen::Index>(n))};
    for (Eigen::Index i = 0; i < m.weight.size(); ++i) m.weight(i) = draw();
    return m;
}

} // namespace

Monomial positive_monomial(Rng& rng, std::size_t n) {
    return with_weights(rng, n, [&] { return Rational(rng.log_uniform(-3.0, 3.0)); });
}

Monomial signed_unimodular(Rng& rng, std::size_t n) {
    return with_weights(rng, n, [&] { return Rational(rng.coin() ? 1 : -1); });
}

Monomial permutation(Rng& rng, std::size_t n) {
    return with_weights(rng, n, [] { return Rational(1); });
}

MatrixXq nonnegative_non_monomial(Rng& rng, std::size_t n) {
    if (n < 2) throw InvalidArgument("a non-monomial invertible matrix needs n >= 2");
    const auto dim = static_cast<Eigen::Index>(n);
    for (;;) {
        const std::vector<std::size_t> perm = rng.permutation(n);
        MatrixXq m = MatrixXq::Zero(dim, dim);
        for (Eigen::Index y = 0; y < dim; ++y)
            m(y, static_cast<Eigen::Index>(perm[static_cast<std::size_t>(y)])) = static_cast<int>(rng.range(1, 9));
        const double density = rng.uniform(0.05, 0.5);
        bool extra = false;
        for (Eigen::Index y = 0; y < dim; ++y)
            for (Eigen::Index x = 0; x < dim; ++x)
                if (m(y, x) == 0 && rng.coin(density)) {
                    m(y, x) = static_cast<int>(rng.range(1, 9));
                    extra = true;
                }
        if (!extra) {
            const std::size_t y = rng.index(n);
            m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>((perm[y] + 1) % n)) =
                static_cast<int>(rng.range(1, 9));
        }
        if (rank(m) == n) return m;
    }
}

Eigen::MatrixXd perturbed(const Monomial& m, double magnitude, Rng& rng) {
    Eigen::MatrixXd out = to_double(m.matrix());
    for (Eigen::Index y = 0; y < out.rows(); ++y)
        for (Eigen::Index x = 0; x < out.cols(); ++x)
            if (static_cast<std::size_t>(x) != m.sigma[static_cast<std::size_t>(y)])
                out(y, x) = rng.uniform(-magnitude, magnitude);
    return out;
}

namespace {

std::vector<std::string> labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

} // namespace

std::shared_ptr<const PointSpace> euclidean_space(Rng& rng, std::size_t n) {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
    return std::make_shared<const PointSpace>(labels(n), d);
}

std::shared_ptr<const PointSpace> graph_space(Rng& rng, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n);
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(dim, dim, inf);
    for (Eigen::Index i = 0; i < dim; ++i) d(i, i) = 0.0;
    auto edge = [&](Eigen::Index a, Eigen::Index b) {
        const double w = static_cast<double>(rng.range(1, 5));
        d(a, b) = std::min(d(a, b), w);
        d(b, a) = d(a, b);
    };
    // Random spanning tree, then extra edges.
    for (Eigen::Index i = 1; i < dim; ++i) edge(i, static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(i))));
    const std::size_t extra = n > 2 ? rng.index(n) : 0;
    for (std::size_t e = 0; e < extra; ++e) {
        const auto a = static_cast<Eigen::Index>(rng.index(n));
        const auto b = static_cast<Eigen::Index>(rng.index(n));
        if (a != b) edge(a, b);
    }
    for (Eigen::Index k = 0; k < dim; ++k)
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return std::make_shared<const PointSpace>(labels(n), d);
}

std::shared_ptr<const PointSpace> metric_space(Rng& rng, std::size_t n) {
    return rng.coin() ? euclidean_space(rng, n) : graph_space(rng, n);
}

double linear_coefficient(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::ident: return 1.0;
    case Expr::Kind::lin: {
        double a = 0.0;
        for (std::size_t i = 0; i < e.children().size(); ++i) a += e.coeffs()[i] * linear_coefficient(e.children()[i]);
        return a;
    }
    default: return 0.0;
    }
}

namespace {

Expr random_expression(Rng& rng, std::size_t level, Expr::Kind wrapper, double spread) {
    if (level == 0) throw InvalidArgument("levels start at 1");
    if (level == 1)
        return Expr::lin({rng.uniform(-spread, spread), rng.uniform(-spread, spread)},
                         {Expr::constant(1.0), Expr::ident()});
    auto wrap = [&](Expr e) { return wrapper == Expr::Kind::clamp ? Expr::clamp(e) : Expr::theta(e); };
    std::vector<double> coeffs{rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
    std::vector<Expr> children{random_expression(rng, level - 1, wrapper, spread),
                               wrap(random_expression(rng, level - 1, wrapper, spread))};
    if (rng.coin()) {
        coeffs.push_back(rng.uniform(-spread, spread));
        children.push_back(wrap(random_expression(rng, rng.range(1, level - 1), wrapper, spread)));
    }
    return Expr::lin(std::move(coeffs), std::move(children));
}

} // namespace

Expr x_expression(Rng& rng, std::size_t level) { return random_expression(rng, level, Expr::Kind::clamp, 2.0); }

Expr sigma_expression(Rng& rng, std::size_t level) {
    Expr e = random_expression(rng, level, Expr::Kind::theta, 1.0);
    const double a = std::abs(linear_coefficient(e));
    if (a > 0.5) e = Expr::lin({0.5 / a}, {e});
    return e;
}

IntervalBox subinterval(Rng& rng, double min_length) {
    const double lo = rng.uniform(0.0, 1.0 - min_length);
    return {lo, rng.uniform(lo + min_length, 1.0)};
}

} // namespace oiso::gen
