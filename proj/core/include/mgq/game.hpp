#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mgq/common.hpp"
#include "mgq/geometry.hpp"
#include "mgq/quadrature.hpp"

namespace mgq {

/// One player's action space: either a box or an explicit finite point list.
struct ActionSpace {
    Box box;                   // valid when points is empty
    std::vector<Point> points; // nonempty => finite set, box ignored

    static ActionSpace continuous(Box b) {
        ActionSpace s;
        s.box = std::move(b);
        return s;
    }
    static ActionSpace finite(std::vector<Point> pts) {
        if (pts.empty()) throw std::invalid_argument("ActionSpace: empty point list");
        ActionSpace s;
        s.points = std::move(pts);
        return s;
    }
    /// Finite 1-d action set, the common case in the model zoo.
    static ActionSpace finite1d(std::initializer_list<Real> vals) {
        std::vector<Point> pts;
        for (Real v : vals) pts.push_back(Point{v});
        return finite(std::move(pts));
    }

    bool is_finite() const { return !points.empty(); }

    int dimension() const {
        return is_finite() ? static_cast<int>(points.front().size()) : box.dimension();
    }

    bool contains(const Point& a, Real tol = 1e-12) const {
        if (is_finite()) {
            for (const Point& p : points)
                if (chebyshev(p, a) <= tol) return true;
            return false;
        }
        return box.contains(a, tol);
    }
};

/// Joint action: one point per player.
using JointAction = std::vector<Point>;

using CostFn = std::function<Real(const Point& x, const JointAction& a)>;
/// Lebesgue density of the next state: (y, x, a) -> nonnegative real.
using DensityFn = std::function<Real(const Point& y, const Point& x, const JointAction& a)>;
/// Optional exact mass of a box region under the kernel: (region, x, a) -> [0,1].
using CellMassFn = std::function<Real(const Box& region, const Point& x, const JointAction& a)>;

struct HorizonSpec {
    enum class Kind { finite_horizon, discounted };
    Kind kind = Kind::discounted;
    int horizon = 1;  // finite-horizon T
    Real beta = 0.9;  // discounted beta in [0,1)

    static HorizonSpec finite(int T) {
        if (T < 1) throw std::invalid_argument("HorizonSpec: T must be >= 1");
        HorizonSpec h;
        h.kind = Kind::finite_horizon;
        h.horizon = T;
        return h;
    }
    static HorizonSpec discounted(Real beta) {
        if (!(beta >= 0.0 && beta < 1.0))
            throw std::invalid_argument("HorizonSpec: beta must be in [0,1)");
        HorizonSpec h;
        h.kind = Kind::discounted;
        h.beta = beta;
        return h;
    }
    bool is_discounted() const { return kind == Kind::discounted; }
};

/// N-player game on a continuous state space with bounded costs and a
/// density transition kernel. All callbacks must be pure.
struct ContinuousGame {
    std::string id;
    int num_players = 0;
    Box state_space;
    std::vector<ActionSpace> action_spaces;
    std::vector<CostFn> cost_fns;
    DensityFn kernel_density;
    CellMassFn kernel_cell_mass; // optional exact path; empty => quadrature of the density
    Real cost_bound = 1.0;
    HorizonSpec horizon;

    bool has_exact_cell_mass() const { return static_cast<bool>(kernel_cell_mass); }

    void check_state(const Point& x) const {
        if (!state_space.contains(x, 1e-9))
            throw std::domain_error("state outside the state space");
    }
    void check_joint_action(const JointAction& a) const {
        if (static_cast<int>(a.size()) != num_players)
            throw std::domain_error("joint action has wrong number of players");
        for (int i = 0; i < num_players; ++i)
            if (!action_spaces[i].contains(a[i], 1e-9))
                throw std::domain_error("action outside player " + std::to_string(i + 1) +
                                        "'s action space");
    }
};

Real eval_cost(const ContinuousGame& game, int player, const Point& x, const JointAction& a);

/// Quadrature approximation of p(region | x, a). `quad` must cover `region`;
/// an empty region yields 0. Uses the exact cell-mass callback when the model
/// provides one.
Real eval_kernel_mass(const ContinuousGame& game, const Box& region, const Point& x,
                      const JointAction& a, const Quadrature& quad);

struct ValidationReport {
    int samples = 0;
    Real max_normalization_defect = 0.0;
    Real max_abs_cost = 0.0;
    bool cost_bound_exceeded = false;
    Real tv_continuity_proxy = 0.0; // max TV distance of kernels at nearby sampled inputs
    Real probe_radius = 0.0;
};

/// Spot-checks boundedness, kernel normalization, and a setwise-continuity
/// proxy on seeded random (x, a) samples. Defects are reported, never fatal.
ValidationReport validate_game(const ContinuousGame& game, const Quadrature& quad, int samples,
                               std::uint64_t seed = 0x76616c6964ULL);

} // namespace mgq
