#pragma once

#include "mgq/solve.hpp"

namespace mgq {

/// Piecewise-constant lift of a finite-model profile back to the state space:
/// pi_hat(x) = pi_delta(x_{nearest_state(x)}).
struct ExtendedPolicyProfile {
    StateNet net;
    bool is_markov = false;
    StationaryPolicyProfile stationary;
    MarkovPolicyProfile markov;

    const MixedProfile& at(const Point& x) const {
        return stationary.states[nearest_state(net, x)];
    }
    const MixedProfile& at(int t, const Point& x) const {
        return markov.times[t].states[nearest_state(net, x)];
    }
};

/// Piecewise-constant lift of a per-state value table.
struct ExtendedValue {
    const StateNet* net = nullptr;
    std::vector<Real> cell_values;

    Real at(const Point& x) const { return cell_values[nearest_state(*net, x)]; }
};

struct EpsCertificate {
    Real delta = 0.0;
    int refine = 0;
    std::vector<Real> eps;       // per player: max over refined states of J^i(pi_hat) - BR value
    Real operator_residual = 0.0;
    Real omega_hat = 0.0;        // sampled lower bound on omega_delta(2 delta)
    int refined_states = 0;
    Real quad_defect = 0.0;      // worst transition row defect of the refined build
    Real build_seconds = 0.0;
    Real certify_seconds = 0.0;
    std::string note;

    Real max_eps() const {
        Real m = 0.0;
        for (Real e : eps) m = std::max(m, e);
        return m;
    }
};

ExtendedPolicyProfile extend_policy(const StationaryPolicyProfile& profile, const StateNet& net);
ExtendedPolicyProfile extend_policy(const MarkovPolicyProfile& profile, const StateNet& net);

/// One application of the extended stationary operator T_hat for `player`:
/// per cell, minimum over the player's net actions of the cell-averaged
/// quadrature of c^i + beta * integral of the lifted J against the kernel,
/// with the other players following the extended profile. Matches
/// build_finite_game + one finite Bellman step up to roundoff.
std::vector<Real> apply_extended_operator(const ContinuousGame& game, const StateNet& snet,
                                          const ActionNet& anet,
                                          const ExtendedPolicyProfile& profile,
                                          const std::vector<Real>& J_cells, int player, Real beta);

/// Finite-horizon analog at time t (no discount, profile taken at time t).
std::vector<Real> apply_extended_operator_t(const ContinuousGame& game, const StateNet& snet,
                                            const ActionNet& anet,
                                            const ExtendedPolicyProfile& profile,
                                            const std::vector<Real>& J_next_cells, int player,
                                            int t);

/// max over players and cells of |T_hat(J_hat) - J_hat| for a converged
/// discounted solve; small values certify the extended optimality equation.
Real fixed_point_residual(const ContinuousGame& game, const StateNet& snet, const ActionNet& anet,
                          const SolveReport& report, Real beta);

struct CertifyOptions {
    int omega_samples = 64;
    std::uint64_t seed = 0x657073ULL;
    long max_tensor_entries = kDefaultTensorCap;
    int threads = 1;
};

/// Certifies the lifted profile as an eps-Nash candidate by exact policy
/// evaluation and best-response DP on a refined model (state delta / refine,
/// refined action nets containing the coarse ones).
EpsCertificate certify_epsilon(const ContinuousGame& game, const StateNet& snet,
                               const ActionNet& anet, const ExtendedPolicyProfile& profile,
                               int refine, Real tol, const CertifyOptions& opts = CertifyOptions{});

/// Lifts a coarse per-state profile onto a finer net over the same space.
StationaryPolicyProfile lift_profile_to_net(const StationaryPolicyProfile& profile,
                                            const StateNet& coarse, const ActionNet& coarse_a,
                                            const StateNet& fine, const ActionNet& fine_a);

} // namespace mgq
