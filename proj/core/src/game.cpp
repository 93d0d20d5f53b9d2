#include "mgq/game.hpp"

#include <cmath>

#include "mgq/rng.hpp"

namespace mgq {

Real eval_cost(const ContinuousGame& game, int player, const Point& x, const JointAction& a) {
    if (player < 0 || player >= game.num_players)
        throw std::domain_error("eval_cost: player index out of range");
    game.check_state(x);
    game.check_joint_action(a);
    return game.cost_fns[player](x, a);
}

Real eval_kernel_mass(const ContinuousGame& game, const Box& region, const Point& x,
                      const JointAction& a, const Quadrature& quad) {
    if (!game.state_space.contains_box(region, 1e-9))
        throw std::domain_error("eval_kernel_mass: region is not contained in the state space");
    if (game.has_exact_cell_mass()) return game.kernel_cell_mass(region, x, a);
    Real mass = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q)
        mass += quad.weights[q] * game.kernel_density(quad.nodes[q], x, a);
    return mass;
}

namespace {

JointAction sample_joint_action(const ContinuousGame& game, Rng& rng) {
    JointAction a(game.num_players);
    for (int i = 0; i < game.num_players; ++i) {
        const ActionSpace& sp = game.action_spaces[i];
        if (sp.is_finite())
            a[i] = sp.points[rng.uniform_index(sp.points.size())];
        else
            a[i] = rng.uniform_point(sp.box);
    }
    return a;
}

} // namespace

ValidationReport validate_game(const ContinuousGame& game, const Quadrature& quad, int samples,
                               std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("validate_game: samples must be >= 1");
    if (!game.state_space.bounded())
        throw std::invalid_argument("validate_game: state space must be bounded");

    ValidationReport rep;
    rep.samples = samples;

    Real extent = 0.0;
    for (int d = 0; d < game.state_space.dimension(); ++d)
        extent = std::max(extent, game.state_space.upper[d] - game.state_space.lower[d]);
    rep.probe_radius = 0.01 * extent;

    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const Point x = rng.uniform_point(game.state_space);
        const JointAction a = sample_joint_action(game, rng);

        const Real mass = eval_kernel_mass(game, game.state_space, x, a, quad);
        rep.max_normalization_defect = std::max(rep.max_normalization_defect, std::abs(mass - 1.0));

        for (int i = 0; i < game.num_players; ++i) {
            const Real c = game.cost_fns[i](x, a);
            rep.max_abs_cost = std::max(rep.max_abs_cost, std::abs(c));
        }

        // TV proxy: L1 distance of the two densities at a nearby (y, b).
        Point y(x);
        for (std::size_t d = 0; d < y.size(); ++d)
            y[d] += rng.uniform(-rep.probe_radius, rep.probe_radius);
        y = game.state_space.clamp(std::move(y));
        JointAction b = a;
        for (int i = 0; i < game.num_players; ++i) {
            const ActionSpace& sp = game.action_spaces[i];
            if (!sp.is_finite()) {
                for (std::size_t d = 0; d < b[i].size(); ++d)
                    b[i][d] += rng.uniform(-rep.probe_radius, rep.probe_radius);
                b[i] = sp.box.clamp(std::move(b[i]));
            }
        }
        if (game.kernel_density) {
            Real tv = 0.0;
            for (std::size_t q = 0; q < quad.size(); ++q)
                tv += quad.weights[q] * std::abs(game.kernel_density(quad.nodes[q], x, a) -
                                                 game.kernel_density(quad.nodes[q], y, b));
            rep.tv_continuity_proxy = std::max(rep.tv_continuity_proxy, tv);
        }
    }
    rep.cost_bound_exceeded = rep.max_abs_cost > game.cost_bound + 1e-12;
    return rep;
}

} // namespace mgq
