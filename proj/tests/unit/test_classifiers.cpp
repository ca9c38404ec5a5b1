#include <doctest.h>

#include "oiso/classifiers.hpp"
#include "oiso/error.hpp"
#include "oiso/generators.hpp"

using namespace oiso;

namespace {

MatrixXq q2(int a, int b, int c, int d) {
    MatrixXq m(2, 2);
    m << Rational(a), Rational(b), Rational(c), Rational(d);
    return m;
}

ScreenOptions floating() {
    ScreenOptions o;
    o.mode = Mode::floating;
    return o;
}

} // namespace

TEST_SUITE("classifiers") {
    TEST_CASE("isometry_reduce on the identity") {
        const OperatorModel op = OperatorModel::point(MatrixXq(MatrixXq::Identity(3, 3)));
        const IsometryReduction r = isometry_reduce(op);
        CHECK(r.sign == Eigen::VectorXd::Ones(3));
        CHECK(*r.reduced.exact() == *op.exact());
        CHECK(r.screen.passed);
    }

    TEST_CASE("isometry_reduce on diag(-1, 1) * swap") {
        const OperatorModel op = OperatorModel::point(q2(0, -1, 1, 0));
        for (const ScreenOptions& o : {ScreenOptions{}, floating()}) {
            const IsometryReduction r = isometry_reduce(op, o);
            CHECK(r.sign == Eigen::Vector2d(-1, 1));
            CHECK(r.reduced.matrix() == Eigen::Matrix2d{{0, 1}, {1, 0}});
            CHECK(is_order_isomorphism(r.reduced).accept);
        }
    }

    TEST_CASE("diag(1/2, 1) * swap is not an isometry") {
        MatrixXq m(2, 2);
        m << Rational(0), Rational(1, 2), Rational(1), Rational(0);
        try {
            isometry_reduce(OperatorModel::point(m));
            FAIL("expected NotAnIsometry");
        } catch (const NotAnIsometry& e) {
            REQUIRE(e.witness_point());
            CHECK(*e.witness_point() == 0u);
        }
    }

    TEST_CASE("unimodular T1 on a non-monomial operator fails the reduction") {
        MatrixXq m(2, 2);
        m << Rational(2), Rational(-1), Rational(0), Rational(1);
        CHECK_THROWS_AS(isometry_reduce(OperatorModel::point(m)), NotAnIsometry);
    }

    TEST_CASE("lattice_check") {
        Rng rng(1);
        const gen::Monomial pos = gen::positive_monomial(rng, 5);
        CHECK(lattice_check(compose(pos.sigma, pos.weight)).passed);
        CHECK(lattice_check(compose(pos.sigma, to_double(pos.weight)), floating()).passed);

        gen::Monomial neg = pos;
        neg.weight(2) = -neg.weight(2);
        const IdentityCheck c = lattice_check(compose(neg.sigma, neg.weight));
        CHECK_FALSE(c.passed);
        REQUIRE(c.witness_f);
        CHECK((*c.witness_f)(static_cast<Eigen::Index>(neg.sigma[2])) > 0);
        CHECK_FALSE(lattice_check(compose(neg.sigma, to_double(neg.weight)), floating()).passed);

        const IdentityCheck shear = lattice_check(OperatorModel::point(q2(1, 1, 0, 1)));
        CHECK_FALSE(shear.passed);
        // f = (1, -1): |Tf| = (0, 1) but T|f| = (2, 1).
        Eigen::Vector2d f(1, -1);
        const OperatorModel op = OperatorModel::point(q2(1, 1, 0, 1));
        CHECK((op.apply(f).cwiseAbs() - op.apply(f.cwiseAbs())).cwiseAbs().maxCoeff() == 2.0);
    }

    TEST_CASE("algebra_check") {
        Rng rng(2);
        const gen::Monomial p = gen::permutation(rng, 6);
        CHECK(algebra_check(compose(p.sigma, p.weight)).passed);
        CHECK(algebra_check(compose(p.sigma, to_double(p.weight)), floating()).passed);

        gen::Monomial twice = p;
        twice.weight *= Rational(2);
        CHECK_FALSE(algebra_check(compose(twice.sigma, twice.weight)).passed);

        gen::Monomial partial = p;
        partial.weight(3) = 3;
        const IdentityCheck c = algebra_check(compose(partial.sigma, partial.weight));
        CHECK_FALSE(c.passed);
        CHECK(c.witness_f);
        CHECK(c.witness_g);
    }

    TEST_CASE("classify: permutation, positive monomial, signed swap, shear") {
        Rng rng(3);
        const gen::Monomial p = gen::permutation(rng, 5);
        const ClassificationReport a = classify(compose(p.sigma, p.weight));
        CHECK(a.kind == Kind::algebra_iso);
        REQUIRE(a.decomposition);
        CHECK(a.decomposition->sigma == p.sigma);
        CHECK(a.decomposition->weight == Eigen::VectorXd::Ones(5));
        CHECK(a.sigma_agreement);

        gen::Monomial w = gen::positive_monomial(rng, 5);
        w.weight(0) = 7;
        const ClassificationReport l = classify(compose(w.sigma, w.weight));
        CHECK(l.kind == Kind::lattice_iso);
        CHECK(l.decomposition->weight.minCoeff() > 0);
        CHECK(l.sigma_agreement);

        const ClassificationReport s = classify(OperatorModel::point(q2(0, -1, 1, 0)));
        CHECK(s.kind == Kind::isometry);
        REQUIRE(s.unimodular_sign);
        CHECK(*s.unimodular_sign == Eigen::Vector2d(-1, 1));
        CHECK(s.decomposition->sigma == std::vector<std::size_t>{1, 0});

        const ClassificationReport r = classify(OperatorModel::point(q2(1, 1, 0, 1)));
        CHECK(r.kind == Kind::rejected);
        CHECK_FALSE(r.certificate.accept);
        CHECK(r.certificate.witness);
    }

    TEST_CASE("classify in floating point and kind names") {
        Rng rng(4);
        const gen::Monomial s = gen::signed_unimodular(rng, 6);
        const ClassificationReport r = classify(compose(s.sigma, to_double(s.weight)), floating());
        if ((to_double(s.weight).array() > 0).all()) CHECK(r.kind == Kind::algebra_iso);
        else CHECK(r.kind == Kind::isometry);
        CHECK(r.decomposition->sigma == s.sigma);
        CHECK(to_string(Kind::lattice_iso) == "lattice-iso");
        CHECK(to_string(Kind::order_iso_only) == "order-iso-only");
    }

    TEST_CASE("every accepting pipeline produces the same sigma") {
        Rng rng(5);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = rng.range(1, 10);
            gen::Monomial m = trial % 3 == 0 ? gen::permutation(rng, n)
                              : trial % 3 == 1 ? gen::signed_unimodular(rng, n)
                                               : gen::positive_monomial(rng, n);
            const ClassificationReport r = classify(compose(m.sigma, m.weight));
            CHECK(r.sigma_agreement);
            REQUIRE(r.decomposition);
            CHECK(r.decomposition->sigma == m.sigma);
            if (r.kind == Kind::algebra_iso) CHECK(r.decomposition->weight == Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
            if (r.kind == Kind::lattice_iso) CHECK(r.decomposition->weight.minCoeff() > 0);
            if (r.kind == Kind::isometry) CHECK(r.unimodular_sign->cwiseAbs() == Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
        }
    }
}
