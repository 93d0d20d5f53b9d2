#pragma once

#include "mgq/common.hpp"
#include "mgq/linalg.hpp"

namespace mgq {

/// One-shot N-player game; every player minimizes their own cost tensor.
/// Tensors are flat, row-major over joint actions with player 0 most significant.
struct NormalFormGame {
    int num_players = 0;
    std::vector<int> action_counts;
    std::vector<std::vector<Real>> costs; // [player][joint]

    long joint_count() const {
        long j = 1;
        for (int m : action_counts) j *= m;
        return j;
    }
};

struct MixedProfile {
    std::vector<std::vector<Real>> probs; // [player][action]

    bool operator==(const MixedProfile&) const = default;
};

enum class StageMethod { pure_enum, support_enum, lp_minimax, regret_search };

const char* stage_method_name(StageMethod m);

struct StageSolution {
    MixedProfile profile;
    std::vector<Real> values; // per-player expected cost under profile
    std::vector<Real> gaps;   // per-player best-response gap, >= 0
    StageMethod method = StageMethod::pure_enum;

    Real max_gap() const {
        Real g = 0.0;
        for (Real v : gaps) g = std::max(g, v);
        return g;
    }
};

struct MatrixGameSolution {
    Real value = 0.0;
    std::vector<Real> row_mix;
    std::vector<Real> col_mix;
};

/// Exact value of the zero-sum matrix game where the row player minimizes and
/// the column player maximizes, via the standard LP with Bland pivoting.
MatrixGameSolution matrix_game_value(const Matrix& M);

/// Mixed Nash of a two-player cost game by support enumeration in increasing
/// total support size; the first valid support pair in lexicographic order wins.
StageSolution bimatrix_nash(const Matrix& A, const Matrix& B, Real tol);

/// General stage solver: pure enumeration, then bimatrix support enumeration
/// (N=2), then seeded multi-start projected-gradient regret search. Always
/// returns the best profile found with exactly recomputed gaps.
StageSolution nplayer_nash(const NormalFormGame& g, Real tol, std::uint64_t seed, int budget);

/// gap_i = E_profile[u^i] - min over player-i pure deviations; exact contraction.
std::vector<Real> best_response_gap(const NormalFormGame& g, const MixedProfile& profile);

std::vector<Real> expected_costs(const NormalFormGame& g, const MixedProfile& profile);

/// All pure equilibria plus (for N=2) every valid support-enumeration solution,
/// in deterministic order. Used for continuity-biased equilibrium selection.
std::vector<StageSolution> enumerate_stage_equilibria(const NormalFormGame& g, Real tol,
                                                      std::size_t max_count);

/// Projected-gradient descent on the summed best-response gap over the product
/// of simplices; `warm` seeds the first restart.
StageSolution stage_regret_search(const NormalFormGame& g, Real tol, std::uint64_t seed,
                                  int restarts, const MixedProfile* warm = nullptr);

} // namespace mgq
