#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgq/model_zoo.hpp"
#include "mgq/quantize.hpp"
#include "test_support.hpp"

using namespace mgq;

namespace {

int brute_force_nearest(const StateNet& net, const Point& x) {
    int arg = 0;
    Real best = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < net.size(); ++j) {
        const Real d = chebyshev(x, net.points[j]);
        if (d < best) {
            best = d;
            arg = j;
        }
    }
    return arg;
}

} // namespace

TEST_SUITE("state net") {
    TEST_CASE("interval at delta 0.25 gives two half cells") {
        const StateNet net = build_state_net(Box::interval(0.0, 1.0), 0.25);
        REQUIRE(net.size() == 2);
        CHECK(net.points[0][0] == doctest::Approx(0.25));
        CHECK(net.points[1][0] == doctest::Approx(0.75));
        CHECK(net.cells[0].lower[0] == 0.0);
        CHECK(net.cells[0].upper[0] == doctest::Approx(0.5));
        CHECK(net.cells[1].upper[0] == 1.0);
    }

    TEST_CASE("unit square at delta 0.5 collapses to one cell") {
        const StateNet net = build_state_net(Box(Point{0.0, 0.0}, Point{1.0, 1.0}), 0.5);
        REQUIRE(net.size() == 1);
        CHECK(net.points[0] == Point{0.5, 0.5});
    }

    TEST_CASE("net property holds on a fine sample") {
        const StateNet net = build_state_net(Box::interval(0.0, 1.0), 0.1);
        REQUIRE(net.size() == 5);
        for (int i = 0; i <= 2000; ++i) {
            const Point x{i / 2000.0};
            const int j = nearest_state(net, x);
            CHECK(chebyshev(x, net.points[j]) <= 0.1 + 1e-12);
        }
    }

    TEST_CASE("partition exactness: cell volumes sum to the box volume") {
        const StateNet net = build_state_net(Box(Point{0.0, -2.0}, Point{1.0, 1.0}), 0.17);
        Real total = 0.0;
        for (const Box& cell : net.cells) total += cell.volume();
        CHECK(total == doctest::Approx(3.0).epsilon(1e-12));
        for (const Quadrature& q : net.cell_quadrature) CHECK(q.total_weight() > 0.0);
    }

    TEST_CASE("resource cap produces a resource error naming the cap") {
        try {
            build_state_net(Box::interval(0.0, 1.0), 1e-9, QuadratureSpec{}, 1000);
            FAIL("expected ResourceError");
        } catch (const ResourceError& e) {
            CHECK(std::string(e.what()).find("1000") != std::string::npos);
        }
    }

    TEST_CASE("unbounded spaces are rejected") {
        const Real inf = std::numeric_limits<Real>::infinity();
        CHECK_THROWS_AS(build_state_net(Box::interval(-inf, inf), 0.5), std::invalid_argument);
    }
}

TEST_SUITE("nearest maps") {
    TEST_CASE("nearest_state picks the closest point, smallest index on ties") {
        const StateNet net = build_state_net(Box::interval(0.0, 1.0), 0.25);
        CHECK(nearest_state(net, {0.4}) == 0);
        CHECK(nearest_state(net, {0.5}) == 0); // equidistant tie
        CHECK(nearest_state(net, {0.9}) == 1);
        CHECK_THROWS_AS(nearest_state(net, {1.5}), std::domain_error);
    }

    TEST_CASE("nearest_state agrees with brute force on random points") {
        for (Real delta : {0.25, 0.11, 0.07}) {
            const StateNet net = build_state_net(Box(Point{0.0, -1.0}, Point{1.0, 2.0}), delta);
            Rng rng(0x6e65617265ULL);
            for (int s = 0; s < 1000; ++s) {
                const Point x = rng.uniform_point(net.space);
                CHECK(nearest_state(net, x) == brute_force_nearest(net, x));
            }
        }
    }

    TEST_CASE("multi-dimensional ties resolve to the smallest flattened index") {
        const StateNet net = build_state_net(Box(Point{0.0, 0.0}, Point{1.0, 1.0}), 0.25);
        REQUIRE(net.size() == 4); // centers (0.25,0.25), (0.25,0.75), (0.75,0.25), (0.75,0.75)
        for (const Point& x : {Point{0.5, 0.5}, Point{0.5, 0.3}, Point{0.3, 0.5}}) {
            CHECK(nearest_state(net, x) == brute_force_nearest(net, x));
        }
        CHECK(nearest_state(net, {0.5, 0.5}) == 0);
        CHECK(nearest_state(net, {0.5, 0.3}) == 0);
        CHECK(nearest_state(net, {0.3, 0.5}) == 0);
        CHECK(nearest_state(net, {0.8, 0.5}) == 2);
    }

    TEST_CASE("finite action spaces keep their points") {
        const std::vector<ActionSpace> spaces{ActionSpace::finite1d({0.0, 1.0}),
                                              ActionSpace::continuous(Box::interval(0.0, 1.0))};
        const ActionNet net = build_action_net(spaces, 0.25);
        CHECK(net.points[0].size() == 2);
        CHECK(net.points[0][0] == Point{0.0});
        CHECK(net.points[1].size() == 2); // grid {0.25, 0.75}
        CHECK(nearest_action(net, 0, {1.0}) == 1);
        CHECK(nearest_action(net, 1, {0.9}) == 1);
    }

    TEST_CASE("nearest_action agrees with brute force") {
        const std::vector<ActionSpace> spaces{ActionSpace::continuous(Box::interval(-1.0, 1.0))};
        const ActionNet net = build_action_net(spaces, 0.15);
        Rng rng(0x616374ULL);
        for (int s = 0; s < 500; ++s) {
            const Point a{rng.uniform(-1.0, 1.0)};
            int arg = 0;
            Real best = std::numeric_limits<Real>::infinity();
            for (std::size_t j = 0; j < net.points[0].size(); ++j) {
                const Real d = chebyshev(net.points[0][j], a);
                if (d < best) {
                    best = d;
                    arg = static_cast<int>(j);
                }
            }
            CHECK(nearest_action(net, 0, a) == arg);
        }
    }

    TEST_CASE("refined action nets contain the coarse points") {
        const std::vector<ActionSpace> spaces{ActionSpace::continuous(Box::interval(0.0, 1.0))};
        const ActionNet coarse = build_action_net(spaces, 0.25);
        const ActionNet fine = refine_action_net(coarse, spaces, 4);
        for (const Point& cp : coarse.points[0]) {
            const int idx = nearest_action(fine, 0, cp);
            CHECK(chebyshev(fine.points[0][idx], cp) <= 1e-12);
        }
        CHECK(fine.points[0].size() >= coarse.points[0].size());
    }
}

TEST_SUITE("finite game build") {
    TEST_CASE("constant costs average to the constant") {
        const ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 1.0; },
            [](const Point&, const JointAction&) { return 1.0; });
        const StateNet snet = build_state_net(g.state_space, 0.25);
        const ActionNet anet = build_action_net(g.action_spaces, 0.25);
        const FiniteGame fg = build_finite_game(g, snet, anet);
        for (int i = 0; i < 2; ++i)
            for (Real c : fg.costs[i]) CHECK(c == 1.0);
    }

    TEST_CASE("uniform kernel yields the cell-mass rows (0.5, 0.5)") {
        const ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 0.0; },
            [](const Point&, const JointAction&) { return 0.0; });
        const StateNet snet = build_state_net(g.state_space, 0.25);
        const ActionNet anet = build_action_net(g.action_spaces, 0.25);
        const FiniteGame fg = build_finite_game(g, snet, anet);
        for (int x = 0; x < fg.num_states; ++x)
            for (long a = 0; a < fg.joint_count(); ++a) {
                CHECK(fg.row(x, a)[0] == doctest::Approx(0.5).epsilon(1e-12));
                CHECK(fg.row(x, a)[1] == doctest::Approx(0.5).epsilon(1e-12));
            }
    }

    TEST_CASE("rows are exactly stochastic after normalization") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const StateNet snet = build_state_net(g.state_space, 0.1);
        const ActionNet anet = build_action_net(g.action_spaces, 0.1);
        const FiniteGame fg = build_finite_game(g, snet, anet);
        for (int x = 0; x < fg.num_states; ++x)
            for (long a = 0; a < fg.joint_count(); ++a) {
                Real sum = 0.0;
                for (int y = 0; y < fg.num_states; ++y) {
                    CHECK(fg.row(x, a)[y] >= 0.0);
                    sum += fg.row(x, a)[y];
                }
                CHECK(sum == 1.0);
            }
        CHECK(fg.provenance.max_row_defect < 1e-3);
    }

    TEST_CASE("transition entries match a 10x-finer quadrature oracle") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const StateNet coarse = build_state_net(g.state_space, 0.1, {QuadScheme::midpoint_grid, 6});
        const StateNet fine = build_state_net(g.state_space, 0.1, {QuadScheme::midpoint_grid, 60});
        const ActionNet anet = build_action_net(g.action_spaces, 0.1);
        const FiniteGame fg = build_finite_game(g, coarse, anet);
        const FiniteGame oracle = build_finite_game(g, fine, anet);
        for (int x = 0; x < fg.num_states; ++x)
            for (long a = 0; a < fg.joint_count(); ++a)
                for (int y = 0; y < fg.num_states; ++y)
                    CHECK(std::abs(fg.row(x, a)[y] - oracle.row(x, a)[y]) < 1e-3);
    }

    TEST_CASE("lossless on the aligned piecewise-constant model") {
        const ContinuousGame g = make_zoo_game("pc-2p-lossless");
        const StateNet snet = build_state_net(g.state_space, 0.25);
        const ActionNet anet = build_action_net(g.action_spaces, 0.25);
        const FiniteGame fg = build_finite_game(g, snet, anet);
        REQUIRE(fg.num_states == 2);
        for (int i = 0; i < 2; ++i)
            for (int x = 0; x < 2; ++x)
                for (long a = 0; a < 4; ++a) {
                    std::vector<int> idx;
                    JointIndexer jix(fg.action_counts);
                    jix.decode(a, idx);
                    const JointAction pts{anet.points[0][idx[0]], anet.points[1][idx[1]]};
                    CHECK(fg.cost(i, x, a) == g.cost_fns[i](snet.points[x], pts));
                }
        for (int x = 0; x < 2; ++x)
            for (long a = 0; a < 4; ++a) {
                std::vector<int> idx;
                JointIndexer jix(fg.action_counts);
                jix.decode(a, idx);
                const JointAction pts{anet.points[0][idx[0]], anet.points[1][idx[1]]};
                for (int y = 0; y < 2; ++y) {
                    const Real exact = g.kernel_cell_mass(snet.cells[y], snet.points[x], pts);
                    CHECK(std::abs(fg.row(x, a)[y] - exact) <= 1e-12);
                }
            }
    }

    TEST_CASE("refinement: finer quadrature moves entries less") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const ActionNet anet = build_action_net(g.action_spaces, 0.1);
        auto max_entry_gap = [&](int r1, int r2) {
            const FiniteGame a = build_finite_game(
                g, build_state_net(g.state_space, 0.1, {QuadScheme::midpoint_grid, r1}), anet);
            const FiniteGame b = build_finite_game(
                g, build_state_net(g.state_space, 0.1, {QuadScheme::midpoint_grid, r2}), anet);
            Real worst = 0.0;
            for (std::size_t e = 0; e < a.transitions.size(); ++e)
                worst = std::max(worst, std::abs(a.transitions[e] - b.transitions[e]));
            return worst;
        };
        CHECK(max_entry_gap(8, 16) > max_entry_gap(16, 32));
    }

    TEST_CASE("parallel build is bit-identical to serial") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const StateNet snet = build_state_net(g.state_space, 0.1);
        const ActionNet anet = build_action_net(g.action_spaces, 0.1);
        BuildOptions serial, parallel;
        parallel.threads = 4;
        const FiniteGame a = build_finite_game(g, snet, anet, serial);
        const FiniteGame b = build_finite_game(g, snet, anet, parallel);
        CHECK(a.transitions == b.transitions);
        CHECK(a.costs == b.costs);
    }

    TEST_CASE("tensor cap produces a resource error") {
        const ContinuousGame g = make_zoo_game("tg-2p-smooth");
        const StateNet snet = build_state_net(g.state_space, 0.05);
        const ActionNet anet = build_action_net(g.action_spaces, 0.05);
        BuildOptions opts;
        opts.max_tensor_entries = 10;
        CHECK_THROWS_AS(build_finite_game(g, snet, anet, opts), ResourceError);
    }
}

TEST_SUITE("tv modulus") {
    TEST_CASE("state-independent kernel has zero modulus") {
        const ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 0.0; },
            [](const Point&, const JointAction&) { return 0.0; });
        const StateNet snet = build_state_net(g.state_space, 0.25);
        CHECK(estimate_tv_modulus(g, snet, 0.2, 32, 42) == 0.0);
    }

    TEST_CASE("windowed kernel: estimate nonincreasing in the radius") {
        // Uniform density on a moving window centered at x (TV-continuous).
        ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 0.0; },
            [](const Point&, const JointAction&) { return 0.0; });
        const Real w = 0.5;
        g.kernel_density = [w](const Point& y, const Point& x, const JointAction&) {
            const Real c = std::min(std::max(x[0], w / 2), 1.0 - w / 2);
            return (std::abs(y[0] - c) <= w / 2) ? 1.0 / w : 0.0;
        };
        const StateNet snet = build_state_net(g.state_space, 0.05, {QuadScheme::midpoint_grid, 32});
        Real prev = std::numeric_limits<Real>::infinity();
        for (Real radius : {0.4, 0.2, 0.1}) {
            const Real est = estimate_tv_modulus(g, snet, radius, 48, 7);
            CHECK(est <= prev + 1e-12);
            prev = est;
        }
    }

    TEST_CASE("shifted-window analytic bound 2 r / w") {
        ContinuousGame g = test::uniform_kernel_game(
            [](const Point&, const JointAction&) { return 0.0; },
            [](const Point&, const JointAction&) { return 0.0; });
        const Real w = 0.5;
        g.kernel_density = [w](const Point& y, const Point& x, const JointAction&) {
            const Real c = std::min(std::max(x[0], w / 2), 1.0 - w / 2);
            return (std::abs(y[0] - c) <= w / 2) ? 1.0 / w : 0.0;
        };
        const StateNet snet = build_state_net(g.state_space, 0.05, {QuadScheme::midpoint_grid, 64});
        const Real radius = 0.1;
        const Real est = estimate_tv_modulus(g, snet, radius, 64, 11);
        CHECK(est <= 2.0 * radius / w + 0.05);
    }
}
