#include <doctest.h>

#include "helpers.hpp"
#include "oiso/error.hpp"
#include "oiso/generators.hpp"

using namespace oiso;
using oiso::test::grid;
using oiso::test::grid_values;
using oiso::test::polynomials;

TEST_SUITE("space_model") {
    TEST_CASE("point spaces validate labels and metrics") {
        CHECK_THROWS_AS(PointSpace({}), InvalidArgument);
        CHECK_THROWS_AS(PointSpace({"a", "a"}), InvalidArgument);
        Eigen::MatrixXd bad(3, 3);
        bad << 0, 1, 5, 1, 0, 1, 5, 1, 0;
        CHECK_THROWS_AS(PointSpace({"a", "b", "c"}, bad), InvalidArgument);
        Eigen::MatrixXd asym(2, 2);
        asym << 0, 1, 2, 0;
        CHECK_THROWS_AS(PointSpace({"a", "b"}, asym), InvalidArgument);
        const PointSpace ok({"a", "b"});
        CHECK(ok.index_of("b") == 1u);
        CHECK_FALSE(ok.index_of("z"));
    }

    TEST_CASE("zero sets use the threshold") {
        Eigen::VectorXd f(4);
        f << 0.0, 1e-12, -0.5, 2.0;
        const ZeroSet z = zero_set(f, 1e-9);
        CHECK(z.points() == std::vector<std::size_t>{0, 1});
        CHECK(z.count() == 2u);
    }

    TEST_CASE("span membership of a combination of generators") {
        const auto fam = polynomials(5, 1);
        const Eigen::VectorXd f = (3.0 + 2.0 * grid_values(5).array()).matrix();
        const SpanResult r = span_membership(*fam, f);
        REQUIRE(r.member);
        CHECK(r.coefficients(0) == doctest::Approx(3.0));
        CHECK(r.coefficients(1) == doctest::Approx(2.0));
    }

    TEST_CASE("t is not in the span of the constants") {
        const auto fam = polynomials(3, 0);
        CHECK_FALSE(span_membership(*fam, grid_values(3)).member);
    }

    TEST_CASE("binomial identity in the quadratic family") {
        const auto fam = polynomials(5, 2);
        const Eigen::VectorXd f = (grid_values(5).array() - 1.0).square().matrix();
        const SpanResult r = span_membership(*fam, f);
        REQUIRE(r.member);
        CHECK(r.coefficients(0) == doctest::Approx(1.0));
        CHECK(r.coefficients(1) == doctest::Approx(-2.0));
        CHECK(r.coefficients(2) == doctest::Approx(1.0));
        CHECK((fam->combine(r.coefficients) - f).cwiseAbs().maxCoeff() <= 10 * kDefaultTol);
    }

    TEST_CASE("span membership rejects mismatched lengths") {
        CHECK_THROWS_AS(span_membership(*polynomials(3, 1), Eigen::VectorXd::Ones(4)), DimensionMismatch);
    }

    TEST_CASE("exact coefficients") {
        const auto fam = test::exact_affine(3);
        VectorXq f(3);
        f << Rational(1), Rational(3, 2), Rational(2);
        const auto c = exact_coefficients(*fam, f);
        REQUIRE(c);
        CHECK((*c)(0) == 1);
        CHECK((*c)(1) == 1);
        f(1) = 0;
        CHECK_FALSE(exact_coefficients(*fam, f));
    }

    TEST_CASE("cone membership is pointwise nonnegativity") {
        const auto fam = polynomials(5, 1);
        CHECK(cone_membership(*fam, Eigen::Vector2d(1.0, 0.0)));
        CHECK_FALSE(cone_membership(*fam, Eigen::Vector2d(-1.0, 0.0)));
        CHECK_FALSE(cone_membership(*fam, Eigen::Vector2d(-0.5, 1.0)));
    }

    TEST_CASE("full families contain every function") {
        Rng rng(7);
        const auto fam = FunctionFamily::full(PointSpace::anonymous(6));
        CHECK(fam->is_full());
        for (int k = 0; k < 20; ++k) {
            Eigen::VectorXd f(6);
            for (Eigen::Index i = 0; i < 6; ++i) f(i) = rng.uniform(-5, 5);
            const SpanResult r = span_membership(*fam, f);
            CHECK(r.member);
            CHECK((fam->combine(r.coefficients) - f).cwiseAbs().maxCoeff() <= 10 * kDefaultTol);
        }
    }

    TEST_CASE("dependent generators are refused") {
        Eigen::MatrixXd g(2, 3);
        g << 1, 1, 1, 2, 2, 2;
        CHECK_THROWS_AS(FunctionFamily(grid(3), g), InvalidArgument);
    }

    TEST_CASE("Lipschitz family on two points") {
        Eigen::MatrixXd d(2, 2);
        d << 0, 1, 1, 0;
        const auto space = std::make_shared<const PointSpace>(std::vector<std::string>{"x1", "x2"}, d);
        const FunctionFamily fam = build_lipschitz_family(space);
        CHECK(fam.dimension() == 2u);
        CHECK(span_membership(fam, Eigen::VectorXd::Ones(2)).member);
        CHECK(fam.generators().row(1).cwiseAbs().maxCoeff() > 0);
    }

    TEST_CASE("Lipschitz family on the three-point path is full") {
        Eigen::MatrixXd d(3, 3);
        d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
        const auto space = std::make_shared<const PointSpace>(std::vector<std::string>{"x1", "x2", "x3"}, d);
        const FunctionFamily fam = build_lipschitz_family(space);
        CHECK(fam.dimension() == 3u);
        CHECK(rank(fam.generators()) == 3u);
    }

    TEST_CASE("Lipschitz family on one point and without a metric") {
        const auto one = std::make_shared<const PointSpace>(std::vector<std::string>{"x"}, Eigen::MatrixXd::Zero(1, 1));
        const FunctionFamily fam = build_lipschitz_family(one);
        CHECK(fam.dimension() == 1u);
        CHECK(fam.generators()(0, 0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(build_lipschitz_family(PointSpace::anonymous(3)), InvalidArgument);
    }

    TEST_CASE("Lipschitz families on random metric spaces contain constants and are full") {
        Rng rng(11);
        for (int k = 0; k < 20; ++k) {
            const auto space = gen::metric_space(rng, rng.range(1, 12));
            const FunctionFamily fam = build_lipschitz_family(space);
            CHECK(fam.is_full());
            const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(space->size()));
            CHECK(span_membership(fam, one).member);
            const SpanResult c = span_membership(fam, one);
            CHECK(cone_membership(fam, c.coefficients));
            CHECK_FALSE(cone_membership(fam, -c.coefficients));
        }
    }
}
