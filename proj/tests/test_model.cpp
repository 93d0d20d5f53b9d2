#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgq/game.hpp"
#include "mgq/model_zoo.hpp"
#include "mgq/quadrature.hpp"
#include "test_support.hpp"

using namespace mgq;

TEST_SUITE("geometry") {
    TEST_CASE("box invariants") {
        CHECK_THROWS_AS(Box(Point{1.0}, Point{0.0}), std::invalid_argument);
        CHECK_THROWS_AS(Box(Point{}, Point{}), std::invalid_argument);
        const Box b(Point{0.0, -1.0}, Point{2.0, 1.0});
        CHECK(b.volume() == doctest::Approx(4.0));
        CHECK(b.contains(Point{1.0, 0.0}));
        CHECK_FALSE(b.contains(Point{3.0, 0.0}));
    }

    TEST_CASE("chebyshev metric") {
        CHECK(chebyshev({0.0, 0.0}, {0.3, -0.5}) == doctest::Approx(0.5));
        CHECK(chebyshev({1.0}, {1.0}) == 0.0);
    }
}

TEST_SUITE("quadrature") {
    TEST_CASE("weights sum to the volume") {
        const Box b(Point{0.0, 0.0}, Point{2.0, 3.0});
        for (auto scheme : {QuadScheme::midpoint_grid, QuadScheme::gauss_legendre_tensor}) {
            const Quadrature q = make_quadrature(b, {scheme, 5});
            CHECK(q.total_weight() == doctest::Approx(6.0).epsilon(1e-12));
            for (const Point& p : q.nodes) CHECK(b.contains(p));
        }
    }

    TEST_CASE("gauss-legendre integrates polynomials exactly") {
        // Oracle: integral of x^5 over [0,1] is 1/6; a 3-point rule is exact to degree 5.
        const Quadrature q = make_quadrature(Box::interval(0.0, 1.0),
                                             {QuadScheme::gauss_legendre_tensor, 3});
        const Real val = q.integrate([](const Point& p) { return std::pow(p[0], 5); });
        CHECK(val == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    }

    TEST_CASE("midpoint converges on a smooth density") {
        auto f = [](const Point& p) {
            return norm_pdf((p[0] - 0.4) / 0.25) / 0.25;
        };
        const Real oracle =
            make_quadrature(Box::interval(0.0, 1.0), {QuadScheme::gauss_legendre_tensor, 64})
                .integrate(f);
        Real prev_err = std::numeric_limits<Real>::infinity();
        for (int r : {8, 16, 32}) {
            const Real v =
                make_quadrature(Box::interval(0.0, 1.0), {QuadScheme::midpoint_grid, r})
                    .integrate(f);
            const Real err = std::abs(v - oracle);
            CHECK(err < prev_err);
            prev_err = err;
        }
    }
}

TEST_SUITE("model") {
    TEST_CASE("eval_cost examples") {
        const ContinuousGame constant = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 1.0; },
            [](const Point&, const JointAction&) { return 1.0; });
        CHECK(eval_cost(constant, 0, {0.3}, {{0.0}, {1.0}}) == 1.0);

        const ContinuousGame quad = make_zoo_game("quad-2p-cont");
        CHECK(eval_cost(quad, 0, {0.5}, {{0.5}, {0.1}}) == 0.0);

        // Direct arithmetic: 0.5 * 0.2 * 0.4 computed independently.
        const ContinuousGame coupled = make_zoo_game("coupled-2p-cont");
        const Real expected = 0.5 * 0.2 * 0.4;
        CHECK(eval_cost(coupled, 0, {0.5}, {{0.2}, {0.4}}) == doctest::Approx(expected).epsilon(1e-15));
    }

    TEST_CASE("eval_cost domain errors") {
        const ContinuousGame quad = make_zoo_game("quad-2p-cont");
        CHECK_THROWS_AS(eval_cost(quad, 0, {1.5}, {{0.5}, {0.1}}), std::domain_error);
        CHECK_THROWS_AS(eval_cost(quad, 0, {0.5}, {{2.0}, {0.1}}), std::domain_error);
        CHECK_THROWS_AS(eval_cost(quad, 5, {0.5}, {{0.5}, {0.1}}), std::domain_error);
    }

    TEST_CASE("eval_kernel_mass normalization and sub-regions") {
        const ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 0.0; },
            [](const Point&, const JointAction&) { return 0.0; });
        const JointAction a{{0.0}, {1.0}};
        const Quadrature whole =
            make_quadrature(g.state_space, {QuadScheme::midpoint_grid, 64});
        CHECK(eval_kernel_mass(g, g.state_space, {0.5}, a, whole) ==
              doctest::Approx(1.0).epsilon(1e-12));

        const Box region = Box::interval(0.2, 0.5);
        const Quadrature rq = make_quadrature(region, {QuadScheme::midpoint_grid, 64});
        CHECK(eval_kernel_mass(g, region, {0.5}, a, rq) == doctest::Approx(0.3).epsilon(1e-12));

        // mass is monotone under region nesting
        const Box outer = Box::interval(0.1, 0.6);
        const Quadrature oq = make_quadrature(outer, {QuadScheme::midpoint_grid, 64});
        CHECK(eval_kernel_mass(g, region, {0.5}, a, rq) <=
              eval_kernel_mass(g, outer, {0.5}, a, oq) + 1e-12);

        CHECK_THROWS_AS(
            eval_kernel_mass(g, Box::interval(-0.5, 0.5), {0.5}, a, rq), std::domain_error);
    }

    TEST_CASE("truncated-gaussian mass matches a 10x-finer quadrature oracle") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const JointAction a{{1.0}, {0.0}};
        const Box left = Box::interval(0.0, 0.5);
        const Real coarse = eval_kernel_mass(g, left, {0.3}, a,
                                             make_quadrature(left, {QuadScheme::midpoint_grid, 32}));
        const Real oracle = eval_kernel_mass(g, left, {0.3}, a,
                                             make_quadrature(left, {QuadScheme::midpoint_grid, 320}));
        CHECK(std::abs(coarse - oracle) < 1e-4);
    }

    TEST_CASE("determinism: repeated evaluation is bit-identical") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const JointAction a{{1.0}, {1.0}};
        const Quadrature q = make_quadrature(g.state_space, {QuadScheme::midpoint_grid, 32});
        const Real m1 = eval_kernel_mass(g, g.state_space, {0.25}, a, q);
        const Real m2 = eval_kernel_mass(g, g.state_space, {0.25}, a, q);
        CHECK(m1 == m2);
        CHECK(eval_cost(g, 1, {0.25}, a) == eval_cost(g, 1, {0.25}, a));
    }
}

TEST_SUITE("validate") {
    TEST_CASE("uniform kernel validates cleanly") {
        const ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 1.0; },
            [](const Point&, const JointAction&) { return 1.0; });
        const Quadrature q =
            make_quadrature(g.state_space, {QuadScheme::gauss_legendre_tensor, 32});
        const ValidationReport rep = validate_game(g, q, 8);
        CHECK(rep.max_normalization_defect < 1e-8);
        CHECK_FALSE(rep.cost_bound_exceeded);
        CHECK(rep.tv_continuity_proxy == 0.0);
    }

    TEST_CASE("broken kernel is reported, not fatal") {
        ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 1.0; },
            [](const Point&, const JointAction&) { return 1.0; });
        g.kernel_density = [](const Point&, const Point&, const JointAction&) { return 1.1; };
        const Quadrature q =
            make_quadrature(g.state_space, {QuadScheme::gauss_legendre_tensor, 32});
        const ValidationReport rep = validate_game(g, q, 8);
        CHECK(rep.max_normalization_defect == doctest::Approx(0.1).epsilon(1e-9));
    }

    TEST_CASE("zoo models normalize below 1e-6 at the validation quadrature") {
        for (const char* id : {"tg-2p-smooth", "zs-2p-smooth", "team-2p-smooth", "pc-2p-lossless",
                               "zs-mp", "team-2p-const"}) {
            const ContinuousGame g = make_zoo_game(id);
            const Quadrature q =
                make_quadrature(g.state_space, {QuadScheme::gauss_legendre_tensor, 64});
            const ValidationReport rep = validate_game(g, q, 12);
            CAPTURE(id);
            CHECK(rep.max_normalization_defect < 1e-6);
            CHECK_FALSE(rep.cost_bound_exceeded);
        }
    }
}

TEST_SUITE("zoo") {
    TEST_CASE("registry rejects unknown ids and params") {
        CHECK_THROWS_AS(make_zoo_game("no-such-model"), std::invalid_argument);
        CHECK_THROWS_AS(make_zoo_game("tg-2p-smooth", {{"bogus", 1.0}}), std::invalid_argument);
    }

    TEST_CASE("gauss-drift exact masses agree with the density quadrature") {
        const ContinuousGame g = make_zoo_game("gauss-drift-2p");
        const Box cell = Box::interval(-0.5, 0.25);
        const JointAction a{{1.0}, {0.0}};
        const Real exact = g.kernel_cell_mass(cell, {0.7}, a);
        Real quad = 0.0;
        const Quadrature q = make_quadrature(cell, {QuadScheme::midpoint_grid, 400});
        for (std::size_t i = 0; i < q.size(); ++i)
            quad += q.weights[i] * g.kernel_density(q.nodes[i], {0.7}, a);
        CHECK(exact == doctest::Approx(quad).epsilon(1e-7));
    }
}
