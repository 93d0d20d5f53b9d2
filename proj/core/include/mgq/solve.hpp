#pragma once

#include "mgq/quantize.hpp"
#include "mgq/stage_nash.hpp"

namespace mgq {

/// Time-invariant state-feedback profile: one MixedProfile per state.
struct StationaryPolicyProfile {
    std::vector<MixedProfile> states;

    bool operator==(const StationaryPolicyProfile&) const = default;
};

/// Time-indexed profile for finite-horizon games, t = 0..T-1.
struct MarkovPolicyProfile {
    std::vector<StationaryPolicyProfile> times;

    bool operator==(const MarkovPolicyProfile&) const = default;
};

struct ValueTable {
    std::vector<std::vector<Real>> values;               // [player][state]; t=0 slice for finite horizon
    std::vector<std::vector<std::vector<Real>>> by_time; // [t][player][state]; empty when stationary
};

struct SolveReport {
    bool finite_horizon = false;
    StationaryPolicyProfile stationary;
    MarkovPolicyProfile markov;
    ValueTable values; // recomputed post-hoc by exact policy evaluation
    std::vector<std::vector<Real>> stage_gaps;           // [player][state]
    std::vector<std::vector<Real>> dynamic_gap_by_state; // [player][state], exact BR certificate
    std::vector<Real> dynamic_gaps;                      // [player] = max over states (and times)
    int iterations = 0;
    Real residual = 0.0;
    std::vector<Real> residual_history;
    bool converged = false;
    std::string method;

    Real max_dynamic_gap() const {
        Real g = 0.0;
        for (Real v : dynamic_gaps) g = std::max(g, v);
        return g;
    }
};

/// Stage game at a state: u^i(a) = c^i(x,a) + disc * sum_y J^i(y) p(y|x,a).
NormalFormGame stage_game_at(const FiniteGame& g, int state,
                             const std::vector<std::vector<Real>>& continuation, Real disc);

// --- solvers -------------------------------------------------------------

/// Rieder backward induction: per-state stage Nash with the continuation
/// values folded into the payoffs, terminal values fixed to zero.
SolveReport backward_induction_nash(const FiniteGame& g, int T, Real tol, std::uint64_t seed);

/// Damped Nash value iteration with continuity-biased equilibrium selection
/// and exact post-hoc gap certification.
SolveReport nash_value_iteration(const FiniteGame& g, Real beta, Real tol, int max_iter,
                                 Real damping, std::uint64_t seed);

/// Seeded multi-start local search over stationary profiles minimizing the
/// exact dynamic-game best-response gap; only ever improves its incumbent.
SolveReport stationary_regret_search(const FiniteGame& g, Real beta, Real tol, int budget,
                                     std::uint64_t seed,
                                     const StationaryPolicyProfile* warm = nullptr);

/// Zero-sum value iteration on the Shapley operator; input must satisfy
/// c^2 = -c^1 entrywise.
SolveReport shapley_iteration(const FiniteGame& g, Real beta, Real tol);

/// Common-cost game as a joint-action MDP; value iteration over joint actions.
SolveReport team_value_iteration(const FiniteGame& g, Real beta, Real tol);

// --- exact single-agent machinery ----------------------------------------

struct BestResponse {
    std::vector<Real> values;                        // [state] (t=0 slice for finite horizon)
    std::vector<int> actions;                        // [state] greedy pure best response
    std::vector<std::vector<Real>> values_by_time;   // [t][state]
    std::vector<std::vector<int>> actions_by_time;   // [t][state]
};

/// Exact best-response MDP solve for one player against fixed others
/// (policy iteration with exact policy evaluation).
BestResponse best_response_dp(const FiniteGame& g, int player,
                              const StationaryPolicyProfile& others, Real beta);

/// Finite-horizon analog by exact backward induction.
BestResponse best_response_dp_finite(const FiniteGame& g, int player,
                                     const MarkovPolicyProfile& others, int T);

/// J = c_pi + beta P_pi J per player, solved exactly. Returns [player][state].
std::vector<std::vector<Real>> policy_evaluation(const FiniteGame& g,
                                                 const StationaryPolicyProfile& profile,
                                                 Real beta);

/// Finite-horizon policy evaluation; returns [t][player][state], t = 0..T-1.
std::vector<std::vector<std::vector<Real>>> policy_evaluation_finite(
    const FiniteGame& g, const MarkovPolicyProfile& profile, int T);

// --- one-step operators (exposed for the contraction checks) --------------

std::vector<Real> shapley_operator(const FiniteGame& g, Real beta, const std::vector<Real>& J);

std::vector<Real> best_response_operator(const FiniteGame& g, int player,
                                         const StationaryPolicyProfile& others, Real beta,
                                         const std::vector<Real>& J);

std::vector<Real> team_operator(const FiniteGame& g, Real beta, const std::vector<Real>& J);

// --- shared helpers --------------------------------------------------------

/// Marginal one-step model of `player` at `state` against the others' mixes:
/// per own action b, the expected cost and the transition row.
void marginal_model(const FiniteGame& g, int player, int state, const MixedProfile& others_at_state,
                    std::vector<Real>& cost_b, std::vector<std::vector<Real>>& trans_b);

StationaryPolicyProfile uniform_profile(const FiniteGame& g);

/// Exact dynamic-game gaps of a profile: policy evaluation minus best response.
void certify_dynamic_gaps(const FiniteGame& g, Real beta, SolveReport& report);
void certify_dynamic_gaps_finite(const FiniteGame& g, int T, SolveReport& report);

} // namespace mgq
