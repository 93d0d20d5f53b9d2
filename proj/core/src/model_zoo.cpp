#include "mgq/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "mgq/rng.hpp"

namespace mgq {

Real norm_cdf(Real t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

Real norm_pdf(Real t) {
    static const Real inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * t * t);
}

namespace {

Real get_param(const std::map<std::string, Real>& overrides, const ZooEntry& entry,
               const std::string& name) {
    auto it = overrides.find(name);
    if (it != overrides.end()) return it->second;
    for (const ZooParam& p : entry.params)
        if (p.name == name) return p.default_value;
    throw std::invalid_argument("zoo: unknown parameter " + name);
}

void check_params(const std::map<std::string, Real>& overrides, const ZooEntry& entry) {
    for (const auto& [name, value] : overrides) {
        (void)value;
        bool known = false;
        for (const ZooParam& p : entry.params) known = known || p.name == name;
        if (!known)
            throw std::invalid_argument("zoo: model " + entry.id + " has no parameter '" + name +
                                        "'");
    }
}

// Density of N(mean, sigma^2) conditioned on [lo, hi].
Real trunc_gauss_density(Real y, Real mean, Real sigma, Real lo, Real hi) {
    const Real z = norm_cdf((hi - mean) / sigma) - norm_cdf((lo - mean) / sigma);
    return norm_pdf((y - mean) / sigma) / (sigma * z);
}

// ---------------------------------------------------------------------------
// tg-2p-smooth: truncated-Gaussian kernel; matching-pennies interaction whose
// stake changes sign at flip_x, plus per-player action biases. The stage
// equilibria are unique (mixed where the stake dominates the bias, pure
// elsewhere), which keeps equilibrium selection stable across grids.
// ---------------------------------------------------------------------------
ContinuousGame make_tg_2p_smooth(const std::map<std::string, Real>& ov, const ZooEntry& e) {
    const Real sigma = get_param(ov, e, "sigma");
    const Real mu0 = get_param(ov, e, "mu0");
    const Real mux = get_param(ov, e, "mux");
    const Real drift = get_param(ov, e, "drift");
    const Real stake = get_param(ov, e, "stake");
    const Real flip_x = get_param(ov, e, "flip_x");
    const Real flip_width = get_param(ov, e, "flip_width");
    const Real bias1 = get_param(ov, e, "bias1");
    const Real bias2 = get_param(ov, e, "bias2");
    const Real quad = get_param(ov, e, "quad");

    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};

    auto match = [](const JointAction& a) { return a[0][0] == a[1][0] ? 1.0 : -1.0; };
    // Stake profile: saturating sign flip at flip_x (width 0 degrades to the
    // linear ramp).
    auto stake_at = [stake, flip_x, flip_width](Real x) {
        return flip_width > 0.0 ? stake * std::tanh((x - flip_x) / flip_width)
                                : stake * (x - flip_x);
    };
    g.cost_fns = {
        [stake_at, bias1, quad, match](const Point& x, const JointAction& a) {
            return stake_at(x[0]) * match(a) + bias1 * a[0][0] +
                   quad * (x[0] - 0.3) * (x[0] - 0.3);
        },
        [stake_at, bias2, quad, match](const Point& x, const JointAction& a) {
            return -stake_at(x[0]) * match(a) + bias2 * a[1][0] +
                   quad * (x[0] - 0.7) * (x[0] - 0.7);
        },
    };
    g.kernel_density = [sigma, mu0, mux, drift](const Point& y, const Point& x,
                                                const JointAction& a) {
        const Real mean = mu0 + mux * x[0] + drift * (a[0][0] - a[1][0]);
        return trunc_gauss_density(y[0], mean, sigma, 0.0, 1.0);
    };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// zs-2p-smooth: zero-sum, state-scaled matching-pennies stakes.
// ---------------------------------------------------------------------------
ContinuousGame make_zs_2p_smooth(const std::map<std::string, Real>& ov, const ZooEntry& e) {
    const Real sigma = get_param(ov, e, "sigma");

    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};

    auto c1 = [](const Point& x, const JointAction& a) {
        const Real match = (a[0][0] == a[1][0]) ? 1.0 : -1.0;
        return (0.3 + 0.4 * x[0]) * match + 0.2 * (x[0] - 0.5) * (x[0] - 0.5);
    };
    g.cost_fns = {c1, [c1](const Point& x, const JointAction& a) { return -c1(x, a); }};
    g.kernel_density = [sigma](const Point& y, const Point& x, const JointAction& a) {
        const Real mean = 0.2 + 0.5 * x[0] + 0.1 * (a[0][0] - a[1][0]);
        return trunc_gauss_density(y[0], mean, sigma, 0.0, 1.0);
    };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// zs-mp: matching pennies with a dummy continuous state; kernel independent
// of (x, a), so the game value is 0 at every state.
// ---------------------------------------------------------------------------
ContinuousGame make_zs_mp(const std::map<std::string, Real>&, const ZooEntry& e) {
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};
    auto c1 = [](const Point&, const JointAction& a) {
        return (a[0][0] == a[1][0]) ? 1.0 : -1.0;
    };
    g.cost_fns = {c1, [c1](const Point& x, const JointAction& a) { return -c1(x, a); }};
    g.kernel_density = [](const Point&, const Point&, const JointAction&) { return 1.0; };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// pc-2p-lossless: costs and kernel are constant on every grid cell of an
// aligned partition; probabilities are dyadic so quantization is bit-exact.
// ---------------------------------------------------------------------------
ContinuousGame make_pc_2p_lossless(const std::map<std::string, Real>& ov, const ZooEntry& e) {
    const int cells = static_cast<int>(get_param(ov, e, "cells"));
    if (cells < 1 || cells > 64)
        throw std::invalid_argument("pc-2p-lossless: cells must be in [1, 64]");

    const int num_joint = 4; // 2 actions x 2 actions
    // Deterministic dyadic tables: costs in {0, 1/64, ..., 1}, transition rows
    // with entries n/64 summing to exactly 64/64.
    Rng rng(0x70632d32ULL);
    auto costs = std::make_shared<std::vector<Real>>();   // [player][cell][joint]
    auto trans = std::make_shared<std::vector<Real>>();   // [cell][joint][cell']
    costs->resize(2 * cells * num_joint);
    trans->resize(cells * num_joint * cells);
    for (int i = 0; i < 2 * cells * num_joint; ++i)
        (*costs)[i] = static_cast<Real>(rng.next_u64() % 65) / 64.0;
    for (int row = 0; row < cells * num_joint; ++row) {
        // cells-1 sorted cut points in {0..64} turn into dyadic probabilities.
        std::vector<int> cuts{0, 64};
        for (int c = 0; c < cells - 1; ++c) cuts.push_back(static_cast<int>(rng.next_u64() % 65));
        std::sort(cuts.begin(), cuts.end());
        for (int l = 0; l < cells; ++l)
            (*trans)[row * cells + l] = static_cast<Real>(cuts[l + 1] - cuts[l]) / 64.0;
    }

    const Real cell_width = 1.0 / cells;
    auto cell_of = [cells, cell_width](Real x) {
        int c = static_cast<int>(std::floor(x / cell_width));
        return std::min(std::max(c, 0), cells - 1);
    };
    auto joint_of = [](const JointAction& a) {
        return 2 * static_cast<int>(a[0][0]) + static_cast<int>(a[1][0]);
    };

    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};
    for (int i = 0; i < 2; ++i)
        g.cost_fns.push_back([costs, cell_of, joint_of, cells, i](const Point& x,
                                                                  const JointAction& a) {
            return (*costs)[(i * cells + cell_of(x[0])) * 4 + joint_of(a)];
        });
    g.kernel_density = [trans, cell_of, joint_of, cells, cell_width](const Point& y, const Point& x,
                                                                     const JointAction& a) {
        const int row = cell_of(x[0]) * 4 + joint_of(a);
        return (*trans)[row * cells + cell_of(y[0])] / cell_width;
    };
    g.kernel_cell_mass = [trans, cell_of, joint_of, cells, cell_width](
                             const Box& region, const Point& x, const JointAction& a) {
        const int row = cell_of(x[0]) * 4 + joint_of(a);
        Real mass = 0.0;
        for (int l = 0; l < cells; ++l) {
            const Real lo = std::max(region.lower[0], l * cell_width);
            const Real hi = std::min(region.upper[0], (l + 1) * cell_width);
            if (hi > lo) mass += (*trans)[row * cells + l] * ((hi - lo) / cell_width);
        }
        return mass;
    };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// team-2p-const / team-2p-smooth: common-cost games.
// ---------------------------------------------------------------------------
ContinuousGame make_team_2p_const(const std::map<std::string, Real>&, const ZooEntry& e) {
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};
    auto c = [](const Point&, const JointAction&) { return 1.0; };
    g.cost_fns = {c, c};
    g.kernel_density = [](const Point&, const Point&, const JointAction&) { return 1.0; };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

ContinuousGame make_team_2p_smooth(const std::map<std::string, Real>& ov, const ZooEntry& e) {
    const Real sigma = get_param(ov, e, "sigma");
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};
    auto c = [](const Point& x, const JointAction& a) {
        const Real s = a[0][0] + a[1][0];
        return (x[0] - 0.5) * (x[0] - 0.5) + 0.2 * (s - 1.0) * (s - 1.0);
    };
    g.cost_fns = {c, c};
    g.kernel_density = [sigma](const Point& y, const Point& x, const JointAction& a) {
        const Real mean = 0.3 + 0.4 * x[0] + 0.1 * (a[0][0] + a[1][0] - 1.0);
        return trunc_gauss_density(y[0], mean, sigma, 0.0, 1.0);
    };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// quad-2p-cont / coupled-2p-cont: continuous action boxes.
// ---------------------------------------------------------------------------
ContinuousGame make_quad_2p_cont(const std::map<std::string, Real>&, const ZooEntry& e) {
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::continuous(Box::interval(0.0, 1.0)),
                       ActionSpace::continuous(Box::interval(0.0, 1.0))};
    g.cost_fns = {
        [](const Point& x, const JointAction& a) {
            return (x[0] - a[0][0]) * (x[0] - a[0][0]);
        },
        [](const Point& x, const JointAction& a) {
            return (x[0] - a[1][0]) * (x[0] - a[1][0]);
        },
    };
    g.kernel_density = [](const Point&, const Point&, const JointAction&) { return 1.0; };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

ContinuousGame make_coupled_2p_cont(const std::map<std::string, Real>&, const ZooEntry& e) {
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(0.0, 1.0);
    g.action_spaces = {ActionSpace::continuous(Box::interval(0.0, 1.0)),
                       ActionSpace::continuous(Box::interval(0.0, 1.0))};
    g.cost_fns = {
        [](const Point& x, const JointAction& a) { return x[0] * a[0][0] * a[1][0]; },
        [](const Point& x, const JointAction& a) {
            return (1.0 - x[0]) * (1.0 - a[0][0]) * (1.0 - a[1][0]);
        },
    };
    g.kernel_density = [](const Point&, const Point&, const JointAction&) { return 1.0; };
    g.cost_bound = 1.0;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

// ---------------------------------------------------------------------------
// gauss-drift-2p: unbounded state space (the truncation ladder target).
// Exact Gaussian cell masses so leakage bookkeeping is quadrature-free.
// ---------------------------------------------------------------------------
ContinuousGame make_gauss_drift_2p(const std::map<std::string, Real>& ov, const ZooEntry& e) {
    const Real rho = get_param(ov, e, "rho");
    const Real sigma = get_param(ov, e, "sigma");
    const Real drift = get_param(ov, e, "drift");

    const Real inf = std::numeric_limits<Real>::infinity();
    ContinuousGame g;
    g.id = e.id;
    g.num_players = 2;
    g.state_space = Box::interval(-inf, inf);
    g.action_spaces = {ActionSpace::finite1d({0.0, 1.0}), ActionSpace::finite1d({0.0, 1.0})};
    g.cost_fns = {
        [](const Point& x, const JointAction& a) {
            const Real d = x[0] - 0.3;
            return 1.0 - std::exp(-d * d) + 0.2 * a[0][0] * (1.0 - a[1][0]);
        },
        [](const Point& x, const JointAction& a) {
            const Real d = x[0] + 0.3;
            return 1.0 - std::exp(-d * d) + 0.2 * a[1][0] * (1.0 - a[0][0]);
        },
    };
    auto mean_of = [rho, drift](const Point& x, const JointAction& a) {
        return rho * x[0] + drift * (a[0][0] - a[1][0]);
    };
    g.kernel_density = [sigma, mean_of](const Point& y, const Point& x, const JointAction& a) {
        return norm_pdf((y[0] - mean_of(x, a)) / sigma) / sigma;
    };
    g.kernel_cell_mass = [sigma, mean_of](const Box& region, const Point& x,
                                          const JointAction& a) {
        const Real m = mean_of(x, a);
        return norm_cdf((region.upper[0] - m) / sigma) - norm_cdf((region.lower[0] - m) / sigma);
    };
    g.cost_bound = 1.5;
    g.horizon = HorizonSpec::discounted(0.9);
    return g;
}

std::vector<ZooEntry> build_entries() {
    return {
        {"tg-2p-smooth",
         "2-player nonzero-sum game on X=[0,1], |A^i|=2, truncated-Gaussian kernel, "
         "state-scaled matching-pennies interaction with per-player action biases",
         {{"sigma", 0.3, "kernel std deviation"},
          {"mu0", 0.25, "kernel mean offset"},
          {"mux", 0.4, "kernel mean slope in x"},
          {"drift", 0.1, "kernel mean action drift"},
          {"stake", 0.65, "pennies stake scale"},
          {"flip_x", 0.5, "stake sign-flip location"},
          {"flip_width", 0.08, "flip softness; 0 gives a linear ramp"},
          {"bias1", 0.2, "player 1 action bias"},
          {"bias2", -0.15, "player 2 action bias"},
          {"quad", 0.1, "private quadratic cost weight"}}},
        {"pc-2p-lossless",
         "2-player game whose costs and kernel are constant on an aligned cell partition; "
         "quantization at matching delta is exact",
         {{"cells", 2, "number of aligned cells on [0,1]"}}},
        {"zs-mp",
         "zero-sum matching pennies with a dummy continuous state; value 0 everywhere",
         {}},
        {"zs-2p-smooth",
         "zero-sum game with state-scaled matching-pennies stakes and truncated-Gaussian kernel",
         {{"sigma", 0.25, "kernel std deviation"}}},
        {"team-2p-const", "common-cost team game with constant cost 1", {}},
        {"team-2p-smooth",
         "common-cost team game with quadratic state cost and coordination term",
         {{"sigma", 0.25, "kernel std deviation"}}},
        {"quad-2p-cont",
         "2-player game with continuous action boxes, each player tracks the state",
         {}},
        {"coupled-2p-cont",
         "2-player game with continuous actions and multiplicative cost coupling",
         {}},
        {"gauss-drift-2p",
         "2-player game on X=R with linear Gaussian drift kernel; use with the truncation ladder",
         {{"rho", 0.5, "state feedback gain"},
          {"sigma", 0.5, "kernel std deviation"},
          {"drift", 0.2, "action drift"}}},
    };
}

} // namespace

const std::vector<ZooEntry>& zoo_entries() {
    static const std::vector<ZooEntry> entries = build_entries();
    return entries;
}

ContinuousGame make_zoo_game(const std::string& id, const std::map<std::string, Real>& params) {
    for (const ZooEntry& e : zoo_entries()) {
        if (e.id != id) continue;
        check_params(params, e);
        if (id == "tg-2p-smooth") return make_tg_2p_smooth(params, e);
        if (id == "pc-2p-lossless") return make_pc_2p_lossless(params, e);
        if (id == "zs-mp") return make_zs_mp(params, e);
        if (id == "zs-2p-smooth") return make_zs_2p_smooth(params, e);
        if (id == "team-2p-const") return make_team_2p_const(params, e);
        if (id == "team-2p-smooth") return make_team_2p_smooth(params, e);
        if (id == "quad-2p-cont") return make_quad_2p_cont(params, e);
        if (id == "coupled-2p-cont") return make_coupled_2p_cont(params, e);
        if (id == "gauss-drift-2p") return make_gauss_drift_2p(params, e);
    }
    throw std::invalid_argument("zoo: unknown model id '" + id + "'");
}

std::string zoo_listing() {
    std::ostringstream os;
    os << "mgq model zoo (version " << kVersion << ")\n";
    for (const ZooEntry& e : zoo_entries()) {
        os << "  " << e.id << "\n    " << e.description << "\n";
        for (const ZooParam& p : e.params)
            os << "      " << p.name << " = " << p.default_value << "  (" << p.doc << ")\n";
    }
    return os.str();
}

} // namespace mgq
