#pragma once

#include "mgq/verify.hpp"

namespace mgq {

/// Ladder of nested compact boxes K_n = center +- (radius0 + growth * n).
struct LadderConfig {
    Point center;                 // empty => origin at the game's dimension
    Real radius0 = 0.0;
    Real growth = 1.0;
    QuadratureSpec annulus_quad = {QuadScheme::midpoint_grid, 16};
};

/// Compact truncation K_n with the pseudo-state weighting measure nu_n,
/// realized as a probability quadrature over the annulus K_{n+1} \ K_n.
struct Truncation {
    int n = 0;
    Box K;
    Box outer; // K_{n+1}
    Quadrature nu;
};

Truncation build_truncation(const ContinuousGame& game, int n, const LadderConfig& cfg);

/// Compact-state surrogate: K_n plus the absorbing-aggregate pseudo-state.
/// Costs on K_n are those of the base game; at the pseudo-state they are the
/// nu_n-averages; out-of-K_n transition mass is routed to the pseudo-state.
struct TruncatedGame {
    ContinuousGame base;
    Truncation trunc;
};

TruncatedGame build_truncated_game(const ContinuousGame& game, const Truncation& trunc);

/// Finite model over the K_n net plus one reserved trailing index for the
/// pseudo-state (never subdivided).
FiniteGame build_truncated_finite_game(const TruncatedGame& tg, const StateNet& snet,
                                       const ActionNet& anet,
                                       const BuildOptions& opts = BuildOptions{});

/// Largest single-row transition mass into the pseudo-state; the leakage
/// diagnostic of a truncated finite model.
Real max_pseudo_state_mass(const FiniteGame& fg);

/// Values and policies on the full domain: cell lookup on K_n, the
/// pseudo-state entry everywhere else.
struct TruncatedLift {
    StateNet snet;
    Box K;
    std::vector<std::vector<Real>> values; // [player][cell..., pseudo]
    StationaryPolicyProfile profile;       // cells..., pseudo

    Real value_at(int player, const Point& x) const {
        if (K.contains(x, 1e-12)) return values[player][nearest_state(snet, x)];
        return values[player].back();
    }
    const MixedProfile& profile_at(const Point& x) const {
        if (K.contains(x, 1e-12)) return profile.states[nearest_state(snet, x)];
        return profile.states.back();
    }
};

TruncatedLift lift_from_truncation(const SolveReport& report, const TruncatedGame& tg,
                                   const StateNet& snet);

/// Sampled TV-modulus lower bound for the truncated pushforward kernel
/// (rows over K_n cells plus the pseudo-state).
Real estimate_tv_modulus_truncated(const TruncatedGame& tg, const StateNet& snet, Real radius,
                                   int samples, std::uint64_t seed);

/// certify_epsilon for truncated models; the pseudo-state is excluded from
/// refinement but kept as a destination and deviation start.
EpsCertificate certify_epsilon_truncated(const TruncatedGame& tg, const StateNet& snet,
                                         const ActionNet& anet,
                                         const StationaryPolicyProfile& profile, int refine,
                                         Real tol, const CertifyOptions& opts = CertifyOptions{});

} // namespace mgq
