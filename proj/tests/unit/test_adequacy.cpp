#include <doctest.h>

#include "helpers.hpp"
#include "oiso/adequacy.hpp"
#include "oiso/error.hpp"
#include "oiso/generators.hpp"

using namespace oiso;

namespace {

std::shared_ptr<const PointSpace> path3() {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    return std::make_shared<const PointSpace>(std::vector<std::string>{"x1", "x2", "x3"}, d);
}

} // namespace

TEST_SUITE("adequacy") {
    TEST_CASE("clamp") {
        CHECK(clamp(-3.0) == 0.0);
        CHECK(clamp(2.0) == 1.0);
        CHECK(clamp(0.5) == 0.5);
        for (double t = -2.0; t <= 2.0; t += 0.125) CHECK(clamp(clamp(t)) == clamp(t));
    }

    TEST_CASE("full families are adequate") {
        const AdequacyReport r = check_adequate(*FunctionFamily::full(PointSpace::anonymous(5)));
        CHECK(r.adequate);
        CHECK(r.separates);
        CHECK(r.has_constants);
        CHECK(r.g_invariant);
        CHECK(r.cone_generates);
        CHECK(r.separation.size() == 5u);
    }

    TEST_CASE("the zero family on one point") {
        const auto point = std::make_shared<const PointSpace>(std::vector<std::string>{"x"}, Eigen::MatrixXd::Zero(1, 1));
        const FunctionFamily one = build_lipschitz_family(point);
        REQUIRE(one.dimension() == 1u);
        CHECK(check_adequate(one).adequate);
        const AdequacyReport empty = check_adequate(one.without(0));
        CHECK_FALSE(empty.has_constants);
        CHECK_FALSE(empty.adequate);
    }

    TEST_CASE("{t} on two points lacks constants") {
        Eigen::MatrixXd g(1, 2);
        g << 0.0, 1.0;
        const AdequacyReport r = check_adequate(FunctionFamily(test::grid(2), g));
        CHECK_FALSE(r.has_constants);
        CHECK_FALSE(r.adequate);
    }

    TEST_CASE("Lipschitz families are adequate and lose constants when they are removed") {
        const FunctionFamily fam = build_lipschitz_family(path3());
        const AdequacyReport r = check_adequate(fam);
        CHECK(r.adequate);
        // Drop the generator carrying the constants.
        const FunctionFamily without = fam.without(0);
        CHECK_FALSE(check_adequate(without).has_constants);
    }

    TEST_CASE("a sublattice with constants that does not separate points") {
        // Functions constant on {x2, x3}: closed under min, max and clamp.
        Eigen::MatrixXd g(2, 3);
        g << 1, 1, 1, 0, 1, 1;
        const AdequacyReport r = check_adequate(FunctionFamily(test::grid(3), g));
        CHECK(r.has_constants);
        CHECK(r.g_invariant);
        CHECK(r.cone_generates);
        CHECK_FALSE(r.separates);
        CHECK_FALSE(r.adequate);
    }

    TEST_CASE("the quadratic family is not g-invariant") {
        const AdequacyReport r = check_adequate(*test::polynomials(6, 2));
        CHECK(r.has_constants);
        CHECK_FALSE(r.g_invariant);
        CHECK(r.g_worst_residual > 1e-6);
        CHECK_FALSE(r.g_worst_input.empty());
    }

    TEST_CASE("bounded families with constants generate with their cone") {
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = rng.range(2, 8);
            const std::size_t k = rng.range(1, n);
            Eigen::MatrixXd g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
            g.row(0).setOnes();
            for (Eigen::Index i = 1; i < g.rows(); ++i)
                for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.uniform(-3, 3);
            CHECK(check_adequate(FunctionFamily(PointSpace::anonymous(n), g)).cone_generates);
        }
    }

    TEST_CASE("subbasic bump with f = 0 and eps = 1 vanishes") {
        const auto fam = FunctionFamily::full(PointSpace::anonymous(4));
        const FunctionVec h = build_subbasic_bump(*fam, 0, Eigen::VectorXd::Zero(4), 1.0);
        CHECK(h == Eigen::VectorXd::Zero(4));
    }

    TEST_CASE("subbasic bump for f = t at 0 with eps = 1/2") {
        const auto fam = FunctionFamily::full(test::grid(5));
        const Eigen::VectorXd t = test::grid_values(5);
        const FunctionVec h = build_subbasic_bump(*fam, 0, t, 0.5);
        CHECK(h(0) == 0.0);
        CHECK(h.minCoeff() >= 0.0);
        CHECK(h.maxCoeff() <= 1.0);
        for (Eigen::Index i = 0; i < 5; ++i) {
            if (t(i) >= 0.5) CHECK(h(i) == 1.0);
            if (h(i) < 1.0) CHECK(std::abs(t(i) - t(0)) < 0.5);
        }
        // Anchor at the maximum.
        const FunctionVec g = build_subbasic_bump(*fam, 4, t, 0.5);
        CHECK(g(4) == 0.0);
        CHECK(g(0) == 1.0);
    }

    TEST_CASE("subbasic bump needs g-invariance") {
        const auto fam = test::polynomials(6, 1);
        CHECK_THROWS_AS(build_subbasic_bump(*fam, 0, test::grid_values(6), 0.3), GInvarianceFailure);
    }

    TEST_CASE("precise bumps") {
        const auto full = FunctionFamily::full(PointSpace::anonymous(4));
        CHECK(build_precise_bump(*full, 2, {0, 1, 3}) == Eigen::Vector4d(0, 0, 1, 0));
        CHECK(build_precise_bump(*full, 2, {}) == Eigen::VectorXd::Ones(4));

        const FunctionFamily lip = build_lipschitz_family(path3());
        const FunctionVec h = build_precise_bump(lip, 0, {2});
        CHECK(h(0) == 1.0);
        CHECK(h(2) == 0.0);
        CHECK(h(1) >= 0.0);
        CHECK(h(1) <= 1.0);
    }

    TEST_CASE("precise bumps fail without separation") {
        Eigen::MatrixXd g(2, 3);
        g << 1, 1, 1, 0, 1, 1;
        CHECK_THROWS_AS(build_precise_bump(FunctionFamily(test::grid(3), g), 1, {2}), SeparationInfeasible);
    }

    TEST_CASE("precise bumps on random Lipschitz families") {
        Rng rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const auto space = gen::metric_space(rng, rng.range(2, 8));
            const FunctionFamily fam = build_lipschitz_family(space);
            const std::size_t n = space->size();
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t z = 0; z < n; ++z) {
                    if (z == x) continue;
                    const FunctionVec h = build_precise_bump(fam, x, {z});
                    CHECK(h(static_cast<Eigen::Index>(x)) == 1.0);
                    CHECK(h(static_cast<Eigen::Index>(z)) == 0.0);
                    CHECK(h.minCoeff() >= 0.0);
                    CHECK(h.maxCoeff() <= 1.0);
                }
        }
    }
}
