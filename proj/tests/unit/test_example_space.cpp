#include <doctest.h>

#include <cmath>

#include "oiso/error.hpp"
#include "oiso/example_space.hpp"
#include "oiso/generators.hpp"
#include "oiso/random.hpp"

using namespace oiso;

TEST_SUITE("example_space") {
    TEST_CASE("g and theta") {
        CHECK(example_g(-3.0) == 0.0);
        CHECK(example_g(0.0) == 0.0);
        CHECK(example_g(1.0) == 1.0);
        CHECK(example_g(7.0) == 1.0);
        CHECK(example_g(0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
        CHECK(theta(1.0) == doctest::Approx(1.0));
        CHECK(theta(-1.0) == doctest::Approx(-1.0));
        CHECK(theta(2.0) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("evaluation and levels") {
        const Expr f = Expr::parse("(clamp (lin (2) (t)))");
        CHECK(eval(f, 0.25) == doctest::Approx(std::sqrt(0.5)));
        CHECK(eval(f, 0.75) == 1.0);
        CHECK(f.level() == 2);
        CHECK(Expr::ident().level() == 1);
        CHECK(Expr::constant(3.0).level() == 1);
        const Expr nested = Expr::clamp(Expr::lin({1.0, 1.0}, {f, Expr::ident()}));
        CHECK(nested.level() == 3);
        CHECK(nested.has_clamp());
        CHECK_FALSE(nested.has_theta());
        CHECK(Expr::constant(2.0).is_constant());
        CHECK_FALSE(f.is_constant());
    }

    TEST_CASE("parse and print round trip") {
        for (const char* text : {"(clamp (lin (2) (t)))", "(theta (lin (0.5 -1) ((const 1) t)))", "t", "(const 0.1)",
                                 "(lin (1 -2 0.25) (t (clamp t) (clamp (clamp t))))"}) {
            const Expr e = Expr::parse(text);
            CHECK(e.to_sexpr() == text);
            CHECK(Expr::parse(e.to_sexpr()).to_sexpr() == e.to_sexpr());
        }
        CHECK(Expr::parse("3").kind() == Expr::Kind::constant);
        CHECK_THROWS_AS(Expr::parse("(clamp"), InvalidArgument);
        CHECK_THROWS_AS(Expr::parse("(lin (1 2) (t))"), InvalidArgument);
        CHECK_THROWS_AS(Expr::parse("(sqrt t)"), InvalidArgument);
    }

    TEST_CASE("clamp and theta never mix") {
        CHECK_THROWS_AS(Expr::clamp(Expr::theta(Expr::ident())), InvalidArgument);
        CHECK_THROWS_AS(Expr::lin({1.0, 1.0}, {Expr::clamp(Expr::ident()), Expr::theta(Expr::ident())}),
                        InvalidArgument);
        CHECK_THROWS_AS(Expr::parse("(theta (clamp t))"), InvalidArgument);
    }

    TEST_CASE("closure: clamp of a level-n member has level n + 1") {
        Rng rng(11);
        for (std::size_t n = 1; n <= 4; ++n) {
            const Expr f = gen::x_expression(rng, n);
            CHECK(f.level() == n);
            CHECK(Expr::clamp(f).level() == n + 1);
            // g o f agrees with the pointwise clamp of f.
            for (double t : {0.0, 0.3, 0.7, 1.0}) CHECK(eval(Expr::clamp(f), t) == example_g(eval(f, t)));
        }
    }

    TEST_CASE("interval enclosures are sound") {
        Rng rng(12);
        const IntervalBox ramp = interval_eval(Expr::parse("(lin (2 -1) (t (const 1)))"), {0.25, 0.5});
        CHECK(ramp.lo <= -0.5);
        CHECK(ramp.hi >= 0.0);
        CHECK(ramp.width() < 0.5 + 1e-12);
        for (int k = 0; k < 300; ++k) {
            const Expr f = rng.coin() ? gen::x_expression(rng, rng.range(1, 4)) : gen::sigma_expression(rng, rng.range(1, 4));
            const IntervalBox box = gen::subinterval(rng);
            const IntervalBox enclosure = interval_eval(f, box);
            for (int s = 0; s < 10; ++s) CHECK(enclosure.contains(eval(f, rng.uniform(box.lo, box.hi))));
        }
    }

    TEST_CASE("separation witness") {
        const Expr w = separation_witness(0.25, 0.75);
        CHECK(eval(w, 0.25) == 0.0);
        CHECK(eval(w, 0.75) == 1.0);
        CHECK(eval(w, 0.0) == 0.0);
        CHECK(eval(w, 1.0) == 1.0);
        CHECK(w.has_clamp());
        CHECK(eval(separation_witness(0.0, 1.0), 0.5) == doctest::Approx(std::sqrt(0.5)));
        Rng rng(13);
        for (int k = 0; k < 100; ++k) {
            double a = rng.uniform(), b = rng.uniform();
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            const Expr sep = separation_witness(a, b);
            CHECK(eval(sep, a) == 0.0);
            CHECK(eval(sep, b) == 1.0);
        }
        CHECK_THROWS_AS(separation_witness(0.5, 0.5), InvalidArgument);
        CHECK_THROWS_AS(separation_witness(-0.1, 0.5), InvalidArgument);
    }

    TEST_CASE("a difference of witnesses bumps between the points") {
        // clamp(up - down) rises after 0.2 and falls back by 0.8.
        const Expr up = separation_witness(0.2, 0.4);
        const Expr down = separation_witness(0.6, 0.8);
        const Expr bump = Expr::clamp(Expr::lin({1.0, -1.0}, {up, down}));
        CHECK(eval(bump, 0.2) == 0.0);
        CHECK(eval(bump, 0.5) == 1.0);
        CHECK(eval(bump, 0.8) == 0.0);
    }

    TEST_CASE("local forms") {
        SUBCASE("clamp(2t) on [0, 1]") {
            const LocalForm lf = local_form(Expr::parse("(clamp (lin (2) (t)))"), {0.0, 1.0});
            CHECK(lf.j.lo == 0.125);
            CHECK(lf.j.hi == 0.25);
            CHECK(lf.u.to_sexpr() == "(theta (lin (2) (t)))");
            CHECK(lf.bisections == 3);
            CHECK_FALSE(lf.u.has_clamp());
        }
        SUBCASE("clamp(t - 2) vanishes on I") {
            const LocalForm lf = local_form(Expr::parse("(clamp (lin (1 -2) (t (const 1))))"), {0.0, 1.0});
            CHECK(lf.u.to_sexpr() == "(const 0)");
            CHECK(lf.j.lo == 0.0);
            CHECK(lf.j.hi == 1.0);
        }
        SUBCASE("clamp-free input is returned unchanged") {
            const LocalForm lf = local_form(Expr::parse("(lin (3 2) ((const 1) t))"), {0.2, 0.4});
            CHECK(lf.u.to_sexpr() == "(lin (3 2) ((const 1) t))");
            CHECK(lf.bisections == 0);
        }
        SUBCASE("depth cap 0 is inconclusive when a bisection is needed") {
            LocalFormOptions o;
            o.depth_cap = 0;
            CHECK_THROWS_AS(local_form(Expr::parse("(clamp (lin (2) (t)))"), {0.0, 1.0}, o), Inconclusive);
        }
        SUBCASE("theta input is refused") {
            CHECK_THROWS_AS(local_form(Expr::parse("(theta t)"), {0.0, 1.0}), InvalidArgument);
        }
    }

    TEST_CASE("random local forms agree with f on J") {
        Rng rng(14);
        for (int k = 0; k < 100; ++k) {
            const Expr f = gen::x_expression(rng, rng.range(1, 4));
            const IntervalBox box = gen::subinterval(rng);
            const LocalForm lf = local_form(f, box);
            CHECK(lf.j.lo >= box.lo);
            CHECK(lf.j.hi <= box.hi);
            CHECK(lf.j.width() > 0.0);
            CHECK_FALSE(lf.u.has_clamp());
            for (int s = 0; s <= 8; ++s) {
                const double t = lf.j.lo + lf.j.width() * s / 8.0;
                CHECK(std::abs(eval(lf.u, t) - eval(f, t)) <= 1e-10);
            }
        }
    }

    TEST_CASE("decay") {
        const DecayResult c = decay_check(Expr::parse("(lin (5 1) ((const 1) (theta t)))"));
        CHECK(c.passed);
        CHECK(c.final_ratio <= 1e-6);
        CHECK(c.grid_points == 121);
        const DecayResult quad = decay_check(Expr::parse("(lin (1) (t))"));
        CHECK(quad.final_ratio == doctest::Approx(1e-6));
        CHECK_FALSE(decay_check(Expr::parse("(lin (1) (t))"), 1e4).passed);
        CHECK_THROWS_AS(decay_check(Expr::parse("(clamp t)")), InvalidArgument);
        Rng rng(15);
        for (int k = 0; k < 50; ++k) CHECK(decay_check(gen::sigma_expression(rng, rng.range(1, 4))).passed);
    }
}
