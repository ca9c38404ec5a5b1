#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "oiso/error.hpp"
#include "oiso/generators.hpp"
#include "oiso/recovery.hpp"

using namespace oiso;

namespace {

MatrixXq q2(int a, int b, int c, int d) {
    MatrixXq m(2, 2);
    m << Rational(a), Rational(b), Rational(c), Rational(d);
    return m;
}

std::vector<std::size_t> inverse_of(const std::vector<std::size_t>& s) {
    std::vector<std::size_t> out(s.size());
    for (std::size_t y = 0; y < s.size(); ++y) out[s[y]] = y;
    return out;
}

} // namespace

TEST_SUITE("recovery") {
    TEST_CASE("zero family of the identity on three points") {
        const OperatorModel op = OperatorModel::point(MatrixXq(MatrixXq::Identity(3, 3)));
        const ZeroSetFamily fam = zero_family(op, 0);
        REQUIRE(fam.members.size() == 2u);
        CHECK(fam.members[0].zeros.points() == std::vector<std::size_t>{0, 2});
        CHECK(fam.members[1].zeros.points() == std::vector<std::size_t>{0, 1});
        CHECK(fam.intersection().points() == std::vector<std::size_t>{0});
        for (const auto& m : fam.members) {
            CHECK(m.preimage.minCoeff() >= 0);
            CHECK(m.preimage(0) == 0);
        }
    }

    TEST_CASE("weighted swap: Z(T e2) = {y2}") {
        const OperatorModel op = OperatorModel::point(q2(0, 2, 3, 0));
        const ZeroSetFamily fam = zero_family(op, 0);
        REQUIRE(fam.members.size() == 1u);
        CHECK(fam.members[0].zeros.points() == std::vector<std::size_t>{1});
        CHECK(recover_point(op, 0) == 1u);
        CHECK(recover_point(op, 1) == 0u);
    }

    TEST_CASE("one-point spaces") {
        MatrixXq m(1, 1);
        m << Rational(5);
        const OperatorModel op = OperatorModel::point(m);
        const ZeroSetFamily fam = zero_family(op, 0);
        CHECK(fam.members.empty());
        CHECK(fam.intersection().points() == std::vector<std::size_t>{0});
        const Decomposition d = decompose(op);
        CHECK(d.sigma == std::vector<std::size_t>{0});
        CHECK((*d.exact_weight)(0) == 5);
    }

    TEST_CASE("identity decomposes to sigma = id, weight = 1") {
        const OperatorModel op = OperatorModel::point(MatrixXq(MatrixXq::Identity(4, 4)));
        const Decomposition d = decompose(op);
        CHECK(d.sigma == std::vector<std::size_t>{0, 1, 2, 3});
        CHECK(d.weight == Eigen::VectorXd::Ones(4));
        CHECK(d.residual == 0.0);
        CHECK(d.mode == Mode::exact);
    }

    TEST_CASE("[[0,2],[3,0]] against an exhaustive search over both bijections") {
        const OperatorModel op = OperatorModel::point(q2(0, 2, 3, 0));
        const Decomposition d = decompose(op);
        const Eigen::MatrixXd m = op.matrix();
        // Oracle: the bijection minimizing the residual with weight = T1.
        std::vector<std::size_t> best;
        double best_res = 1e300;
        std::vector<std::size_t> s{0, 1};
        do {
            double res = 0.0;
            for (Eigen::Index y = 0; y < 2; ++y)
                for (Eigen::Index x = 0; x < 2; ++x) {
                    const double want = static_cast<std::size_t>(x) == s[static_cast<std::size_t>(y)] ? m.row(y).sum() : 0.0;
                    res = std::max(res, std::abs(m(y, x) - want));
                }
            if (res < best_res) {
                best_res = res;
                best = s;
            }
        } while (std::next_permutation(s.begin(), s.end()));
        CHECK(d.sigma == best);
        CHECK(d.sigma == std::vector<std::size_t>{1, 0});
        CHECK(d.weight == Eigen::Vector2d(2, 3));
        CHECK(d.residual == 0.0);
    }

    TEST_CASE("rejected operators are not decomposed") {
        CHECK_THROWS_AS(decompose(OperatorModel::point(q2(1, 1, 0, 1))), NotOrderIsomorphism);
    }

    TEST_CASE("recover_point inverts sigma on a random 10 x 10 monomial") {
        Rng rng(12);
        const gen::Monomial m = gen::positive_monomial(rng, 10);
        const OperatorModel op = compose(m.sigma, m.weight);
        for (std::size_t y = 0; y < 10; ++y) CHECK(recover_point(op, m.sigma[y]) == y);
        RecoveryOptions fo;
        fo.mode = Mode::floating;
        for (std::size_t y = 0; y < 10; ++y) CHECK(recover_point(op, m.sigma[y], fo) == y);
    }

    TEST_CASE("round trips in both modes") {
        Rng rng(99);
        for (int trial = 0; trial < 100; ++trial) {
            const gen::Monomial m = gen::positive_monomial(rng, rng.range(1, 30));
            const Decomposition e = decompose(compose(m.sigma, m.weight));
            CHECK(e.sigma == m.sigma);
            CHECK(*e.exact_weight == m.weight);
            RecoveryOptions fo;
            fo.mode = Mode::floating;
            const OperatorModel fop = compose(m.sigma, to_double(m.weight));
            const Decomposition f = decompose(fop, fo);
            CHECK(f.sigma == m.sigma);
            CHECK(f.residual <= 1e-9);
            CHECK(verify_representation(fop, f) <= 1e-9);
        }
    }

    TEST_CASE("verify_representation detects a transposed sigma and a doubled weight") {
        Rng rng(4);
        const gen::Monomial m = gen::positive_monomial(rng, 8);
        const OperatorModel op = compose(m.sigma, m.weight);
        const Decomposition d = decompose(op);
        CHECK(verify_representation(op, d) <= 1e-9);
        Decomposition swapped = d;
        std::swap(swapped.sigma[0], swapped.sigma[1]);
        CHECK(verify_representation(op, swapped) >= 0.1 * d.weight.minCoeff());
        Decomposition doubled = d;
        doubled.weight *= 2.0;
        CHECK(verify_representation(op, doubled) >= d.weight.maxCoeff() * (1 - 1e-12));
    }

    TEST_CASE("T and T^-1 recover mutually inverse point maps with reciprocal weights") {
        Rng rng(31);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = rng.range(1, 12);
            const gen::Monomial m = gen::positive_monomial(rng, n);
            const OperatorModel op = compose(m.sigma, m.weight);
            const OperatorModel inv = op.inverse();
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    CHECK((recover_point(op, x) == y) == (recover_point(inv, y) == x));
            const Decomposition d = decompose(op);
            const Decomposition di = decompose(inv);
            CHECK(di.sigma == inverse_of(d.sigma));
            CHECK(d.weight.minCoeff() > 0);
            for (std::size_t y = 0; y < n; ++y) CHECK((*d.exact_weight)(y) * (*di.exact_weight)(d.sigma[y]) == 1);
        }
    }

    TEST_CASE("normalize: unital operators are fixed with u = 2") {
        Rng rng(8);
        const gen::Monomial p = gen::permutation(rng, 5);
        const OperatorModel op = compose(p.sigma, p.weight);
        const NormalizedOperator n = normalize(op);
        CHECK(n.u == 2.0 * Eigen::VectorXd::Ones(5));
        CHECK(*n.s.exact() == *op.exact());
        CHECK(*normalize(n.s).s.exact() == *n.s.exact());
    }

    TEST_CASE("normalize: diag(5) * permutation") {
        Rng rng(6);
        gen::Monomial p = gen::permutation(rng, 4);
        p.weight *= Rational(5);
        const OperatorModel op = compose(p.sigma, p.weight);
        const NormalizedOperator n = normalize(op);
        const MatrixXq s = *n.s.exact();
        for (Eigen::Index y = 0; y < s.rows(); ++y) CHECK(s.row(y).sum() == 1);
        CHECK(decompose(n.s).sigma == p.sigma);
        CHECK(n.u.minCoeff() >= 1.0);
        CHECK(n.tu.minCoeff() >= 1.0);
    }

    TEST_CASE("normalize: sigma and re-derived weight agree with the direct route") {
        Rng rng(15);
        for (int trial = 0; trial < 40; ++trial) {
            const gen::Monomial m = gen::positive_monomial(rng, rng.range(1, 15));
            const OperatorModel op = compose(m.sigma, m.weight);
            const NormalizedOperator n = normalize(op);
            const Decomposition ds = decompose(n.s);
            const Decomposition dt = decompose(op);
            CHECK(ds.sigma == dt.sigma);
            CHECK((rederived_weight(n, ds) - dt.weight).cwiseAbs().maxCoeff() <= 1e-12 * dt.weight.maxCoeff());
            CHECK(((*n.s.exact()) * VectorXq::Ones(n.s.exact()->cols()) - VectorXq::Ones(n.s.exact()->rows())).isZero());
        }
    }

    TEST_CASE("finite intersection property") {
        Rng rng(2);
        const gen::Monomial m = gen::positive_monomial(rng, 6);
        const OperatorModel op = compose(m.sigma, m.weight);
        for (std::size_t x = 0; x < 6; ++x) CHECK(fip_check(op, x, 1, 10, 1));
        const OperatorModel id = OperatorModel::point(MatrixXq(MatrixXq::Identity(5, 5)));
        CHECK(fip_check(id, 1, 4, 20, 3));
        CHECK(zero_family(id, 1).intersection().points() == std::vector<std::size_t>{1});
        // Negative control.
        CHECK_FALSE(fip_check(OperatorModel::point(q2(1, 1, 0, 1)), 0, 1, 5, 0));
    }

    TEST_CASE("near-monomial perturbations are rejected rather than masked") {
        Rng rng(44);
        for (int trial = 0; trial < 100; ++trial) {
            const gen::Monomial m = gen::positive_monomial(rng, rng.range(2, 8));
            const double eps = rng.log_uniform(-4, -1);
            const OperatorModel op = OperatorModel::point(gen::perturbed(m, eps, rng));
            RecoveryOptions fo;
            fo.mode = Mode::floating;
            CHECK_THROWS_AS(decompose(op, fo), NotOrderIsomorphism);
        }
    }

    TEST_CASE("compose validates its input") {
        CHECK_THROWS_AS(compose({0, 0}, FunctionVec(FunctionVec::Ones(2))), InvalidArgument);
        CHECK_THROWS_AS(compose({0, 1}, FunctionVec(FunctionVec::Ones(3))), InvalidArgument);
    }
}
