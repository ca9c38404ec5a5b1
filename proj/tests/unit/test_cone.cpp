#include <doctest.h>

#include "helpers.hpp"
#include "oiso/cone.hpp"
#include "oiso/error.hpp"
#include "oiso/generators.hpp"

using namespace oiso;

namespace {

MatrixXq q(std::initializer_list<std::initializer_list<int>> rows) {
    MatrixXq m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (int v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

bool sorted_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= 1e-9;
}

/// Random exact family of `k` generators on `n` points containing the constants.
std::shared_ptr<const FunctionFamily> random_family(Rng& rng, std::size_t n, std::size_t k) {
    for (;;) {
        MatrixXq g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(0, j) = 1;
        for (Eigen::Index i = 1; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = static_cast<int>(rng.range(0, 8)) - 4;
        if (rank(g) == k) return std::make_shared<const FunctionFamily>(PointSpace::anonymous(n), g);
    }
}

} // namespace

TEST_SUITE("cone_geometry") {
    TEST_CASE("identity on three points is accepted exactly") {
        const OperatorModel op = OperatorModel::point(q({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
        const Certificate c = is_order_isomorphism(op);
        CHECK(c.accept);
        CHECK(c.arithmetic == Mode::exact);
        CHECK_FALSE(c.witness);
    }

    TEST_CASE("the shear is rejected through its inverse with witness e2") {
        const OperatorModel op = OperatorModel::point(q({{1, 1}, {0, 1}}));
        const Certificate c = is_order_isomorphism(op);
        CHECK_FALSE(c.accept);
        REQUIRE(c.witness);
        CHECK(c.witness->direction == Direction::inverse);
        CHECK(c.witness->function == Eigen::Vector2d(0, 1));
        CHECK(c.witness->image == Eigen::Vector2d(-1, 1));
        CHECK(c.witness->violated_point == 0u);
    }

    TEST_CASE("[[2,1],[1,2]] is rejected") {
        const Certificate c = is_order_isomorphism(OperatorModel::point(q({{2, 1}, {1, 2}})));
        CHECK_FALSE(c.accept);
        REQUIRE(c.witness);
        CHECK(c.witness->direction == Direction::inverse);
        CHECK(c.witness->image.minCoeff() < 0);
    }

    TEST_CASE("singular matrices are refused") {
        CHECK_THROWS_AS(OperatorModel::point(q({{1, 2}, {2, 4}})), SingularMatrix);
        CHECK_THROWS_AS(OperatorModel::point(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2))), SingularMatrix);
    }

    TEST_CASE("exact mode without rational data is unavailable") {
        const OperatorModel op = OperatorModel::point(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)));
        ConeOptions co;
        co.mode = Mode::exact;
        CHECK_THROWS_AS(is_order_isomorphism(op, co), ExactModeUnavailable);
    }

    TEST_CASE("full families: rays are the coordinate functions") {
        const auto fam = FunctionFamily::full(PointSpace::anonymous(4));
        const ConeRep rep = cone_rep(*fam);
        CHECK(rep.extreme_rays.rows() == 4);
        CHECK(sorted_equal(rep.extreme_rays.cwiseAbs(), rep.extreme_rays));
        CHECK(rep.facet_normals.rows() == 4);
    }

    TEST_CASE("{1, t} on a grid has two extreme rays") {
        const ConeRep rep = cone_rep(*test::exact_affine(5));
        REQUIRE(rep.extreme_rays.rows() == 2);
        Eigen::MatrixXd rays(2, 2);
        rays << 0, 1, 1, -1;
        CHECK(sorted_equal(rep.extreme_rays, rays));
        Eigen::MatrixXd facets(2, 2);
        facets << 1, 0, 1, 1;
        CHECK(sorted_equal(rep.facet_normals, facets));
        CHECK(rep.mode == Mode::exact);
    }

    TEST_CASE("the constants form a single ray") {
        MatrixXq g = MatrixXq::Ones(1, 3);
        const ConeRep rep = cone_rep(FunctionFamily(PointSpace::anonymous(3), g));
        REQUIRE(rep.extreme_rays.rows() == 1);
        CHECK(rep.extreme_rays(0, 0) == doctest::Approx(1.0));
    }

    TEST_CASE("enumeration above the cap falls back to LP mode") {
        Rng rng(5);
        const auto fam = random_family(rng, 10, 4);
        ConeOptions co;
        co.enumeration_cap = 3;
        CHECK(cone_rep(*fam, co).lp_only);
        co.enumeration_cap = 12;
        CHECK_FALSE(cone_rep(*fam, co).lp_only);
    }

    TEST_CASE("double description round trip") {
        Rng rng(21);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = rng.range(3, 9);
            const std::size_t k = rng.range(1, std::min<std::size_t>(n, 6));
            const auto fam = random_family(rng, n, k);
            const ConeRep rep = cone_rep(*fam);
            REQUIRE(rep.exact_rays);
            REQUIRE(rep.exact_facets);
            // Every ray satisfies every facet.
            const MatrixXq slack = *rep.exact_facets * rep.exact_rays->transpose();
            for (Eigen::Index i = 0; i < slack.rows(); ++i)
                for (Eigen::Index j = 0; j < slack.cols(); ++j) CHECK(slack(i, j) >= 0);
            // Rays regenerate the facets and the facets regenerate the rays.
            const MatrixXq constraints = fam->exact_generators()->transpose();
            CHECK(facets_from_rays(constraints, *rep.exact_rays) == *rep.exact_facets);
            CHECK(extreme_rays(*rep.exact_facets) == *rep.exact_rays);
            // Floating point agrees.
            const Eigen::MatrixXd fr = extreme_rays(Eigen::MatrixXd(fam->generators().transpose()));
            INFO(fr, "\n--\n", rep.extreme_rays);
            CHECK(sorted_equal(fr, rep.extreme_rays));
        }
    }

    TEST_CASE("full families: acceptance is the positive monomial form") {
        Rng rng(3);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = rng.range(1, 6);
            MatrixXq m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    m(i, j) = rng.coin(0.6) ? 0 : static_cast<int>(rng.range(0, 6)) - 1;
            if (rank(m) != n) continue;
            bool monomial = true;
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                int positive = 0, nonzero = 0;
                for (Eigen::Index j = 0; j < m.cols(); ++j) {
                    positive += m(i, j) > 0;
                    nonzero += m(i, j) != 0;
                }
                monomial = monomial && positive == 1 && nonzero == 1;
            }
            const OperatorModel op = OperatorModel::point(m);
            CHECK(is_order_isomorphism(op).accept == monomial);
        }
    }

    TEST_CASE("acceptance is symmetric under inversion and positive row scaling") {
        Rng rng(9);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = rng.range(2, 6);
            const Eigen::MatrixXd m = trial % 2 ? to_double(gen::positive_monomial(rng, n).matrix())
                                                : to_double(gen::nonnegative_non_monomial(rng, n));
            const OperatorModel op = OperatorModel::point(m);
            const bool accept = is_order_isomorphism(op).accept;
            CHECK(accept == (trial % 2 == 1));
            CHECK(is_order_isomorphism(op.inverse()).accept == accept);
            Eigen::VectorXd d(static_cast<Eigen::Index>(n));
            for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.log_uniform(-2, 2);
            CHECK(is_order_isomorphism(OperatorModel::point(Eigen::MatrixXd(d.asDiagonal() * m))).accept == accept);
        }
    }

    TEST_CASE("flip t -> 1 - t on {1, t} is accepted by enumeration and by LP") {
        const auto fam = test::exact_affine(5);
        const OperatorModel op = OperatorModel::generator(q({{1, 1}, {0, -1}}), fam, fam);
        const Certificate dd = is_order_isomorphism(op);
        CHECK(dd.accept);
        CHECK(dd.method == CertMethod::enumeration);
        ConeOptions co;
        co.force_lp = true;
        const Certificate lp = is_order_isomorphism(op, co);
        CHECK(lp.accept);
        CHECK(lp.method == CertMethod::lp);
    }

    TEST_CASE("a non-surjective cone map on {1, t} is rejected by both methods") {
        const auto fam = test::exact_affine(5);
        const OperatorModel op = OperatorModel::generator(q({{1, 0}, {0, 2}}), fam, fam);
        ConeOptions co;
        CHECK_FALSE(is_order_isomorphism(op, co).accept);
        co.force_lp = true;
        const Certificate lp = is_order_isomorphism(op, co);
        CHECK_FALSE(lp.accept);
        REQUIRE(lp.witness);
        CHECK(lp.witness->image.minCoeff() < 0);
    }

    TEST_CASE("LP and double description agree on random proper families") {
        Rng rng(77);
        int accepted = 0;
        for (int trial = 0; trial < 150; ++trial) {
            const std::size_t n = rng.range(3, 7);
            const std::size_t k = rng.range(2, n - 1);
            const auto fam = random_family(rng, n, k);
            // Half the operators permute the extreme rays of the cone with positive weights.
            MatrixXq m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
            if (trial % 2 == 0) {
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<int>(rng.range(0, 4)) - 2;
            } else {
                m = MatrixXq::Identity(m.rows(), m.cols());
                for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = static_cast<int>(rng.range(1, 3));
                m(0, 0) = 1;
            }
            if (rank(m) != k) continue;
            const OperatorModel op = OperatorModel::generator(m, fam, fam);
            ConeOptions dd;
            ConeOptions lp;
            lp.force_lp = true;
            const Certificate a = is_order_isomorphism(op, dd);
            const Certificate b = is_order_isomorphism(op, lp);
            CHECK(a.accept == b.accept);
            accepted += a.accept;
            for (const Certificate* c : {&a, &b})
                if (c->witness) CHECK(c->witness->image(static_cast<Eigen::Index>(c->witness->violated_point)) < 0);
        }
        CHECK(accepted > 0);
    }
}
