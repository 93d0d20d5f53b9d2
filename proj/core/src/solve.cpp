#include "mgq/solve.hpp"

#include <algorithm>
#include <cmath>

#include "mgq/rng.hpp"

namespace mgq {

namespace {

constexpr int kStageBudget = 32;
constexpr Real kStageTol = 1e-9;

Real profile_distance(const MixedProfile& a, const MixedProfile& b) {
    Real d = 0.0;
    for (std::size_t i = 0; i < a.probs.size(); ++i)
        for (std::size_t j = 0; j < a.probs[i].size(); ++j)
            d += std::abs(a.probs[i][j] - b.probs[i][j]);
    return d;
}

} // namespace

NormalFormGame stage_game_at(const FiniteGame& g, int state,
                             const std::vector<std::vector<Real>>& continuation, Real disc) {
    const int N = g.num_players();
    const long J = g.joint_count();
    const int k = g.num_states;
    NormalFormGame nfg;
    nfg.num_players = N;
    nfg.action_counts = g.action_counts;
    nfg.costs.assign(N, std::vector<Real>(J, 0.0));
    for (long joint = 0; joint < J; ++joint) {
        const Real* row = g.row(state, joint);
        for (int i = 0; i < N; ++i) {
            Real u = g.cost(i, state, joint);
            if (!continuation.empty() && disc != 0.0) {
                Real cont = 0.0;
                for (int y = 0; y < k; ++y) cont += row[y] * continuation[i][y];
                u += disc * cont;
            }
            nfg.costs[i][joint] = u;
        }
    }
    return nfg;
}

void marginal_model(const FiniteGame& g, int player, int state, const MixedProfile& others,
                    std::vector<Real>& cost_b, std::vector<std::vector<Real>>& trans_b) {
    const int k = g.num_states;
    const int mb = g.action_counts[player];
    cost_b.assign(mb, 0.0);
    trans_b.assign(mb, std::vector<Real>(k, 0.0));

    JointIndexer jix(g.action_counts);
    std::vector<int> idx;
    for (long joint = 0; joint < jix.total; ++joint) {
        jix.decode(joint, idx);
        Real w = 1.0;
        for (int p = 0; p < g.num_players(); ++p)
            if (p != player) w *= others.probs[p][idx[p]];
        if (w == 0.0) continue;
        const int b = idx[player];
        cost_b[b] += w * g.cost(player, state, joint);
        const Real* row = g.row(state, joint);
        for (int y = 0; y < k; ++y) trans_b[b][y] += w * row[y];
    }
}

StationaryPolicyProfile uniform_profile(const FiniteGame& g) {
    StationaryPolicyProfile prof;
    prof.states.resize(g.num_states);
    for (int x = 0; x < g.num_states; ++x) {
        prof.states[x].probs.resize(g.num_players());
        for (int i = 0; i < g.num_players(); ++i)
            prof.states[x].probs[i].assign(g.action_counts[i],
                                           1.0 / static_cast<Real>(g.action_counts[i]));
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Policy evaluation and best responses
// ---------------------------------------------------------------------------

namespace {

/// Kernel and cost under a full joint profile: P_pi (k x k) and c_pi [player][k].
void profile_dynamics(const FiniteGame& g, const StationaryPolicyProfile& prof, Matrix& P,
                      std::vector<std::vector<Real>>& c) {
    const int k = g.num_states;
    const int N = g.num_players();
    P = Matrix(k, k, 0.0);
    c.assign(N, std::vector<Real>(k, 0.0));
    JointIndexer jix(g.action_counts);
    std::vector<int> idx;
    for (int x = 0; x < k; ++x) {
        for (long joint = 0; joint < jix.total; ++joint) {
            jix.decode(joint, idx);
            Real w = 1.0;
            for (int p = 0; p < N; ++p) w *= prof.states[x].probs[p][idx[p]];
            if (w == 0.0) continue;
            for (int i = 0; i < N; ++i) c[i][x] += w * g.cost(i, x, joint);
            const Real* row = g.row(x, joint);
            for (int y = 0; y < k; ++y) P.at(x, y) += w * row[y];
        }
    }
}

std::vector<Real> solve_discounted_evaluation(const Matrix& P, const std::vector<Real>& c,
                                              Real beta) {
    const int k = P.rows;
    Matrix A(k, k, 0.0);
    for (int x = 0; x < k; ++x) {
        for (int y = 0; y < k; ++y) A.at(x, y) = -beta * P.at(x, y);
        A.at(x, x) += 1.0;
    }
    // I - beta P is strictly row diagonally dominant for beta < 1, so the
    // fixed-order elimination is safe.
    std::vector<Real> J;
    if (!solve_linear_system_dominant(A, c, J))
        throw std::runtime_error("policy evaluation: singular system (beta too close to 1?)");
    return J;
}

} // namespace

std::vector<std::vector<Real>> policy_evaluation(const FiniteGame& g,
                                                 const StationaryPolicyProfile& prof, Real beta) {
    Matrix P;
    std::vector<std::vector<Real>> c;
    profile_dynamics(g, prof, P, c);
    std::vector<std::vector<Real>> J(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) J[i] = solve_discounted_evaluation(P, c[i], beta);
    return J;
}

std::vector<std::vector<std::vector<Real>>> policy_evaluation_finite(
    const FiniteGame& g, const MarkovPolicyProfile& prof, int T) {
    const int k = g.num_states;
    const int N = g.num_players();
    std::vector<std::vector<std::vector<Real>>> J(T);
    std::vector<std::vector<Real>> next(N, std::vector<Real>(k, 0.0));
    for (int t = T - 1; t >= 0; --t) {
        Matrix P;
        std::vector<std::vector<Real>> c;
        profile_dynamics(g, prof.times[t], P, c);
        std::vector<std::vector<Real>> cur(N, std::vector<Real>(k, 0.0));
        for (int i = 0; i < N; ++i)
            for (int x = 0; x < k; ++x) {
                Real cont = 0.0;
                for (int y = 0; y < k; ++y) cont += P.at(x, y) * next[i][y];
                cur[i][x] = c[i][x] + cont;
            }
        J[t] = cur;
        next = std::move(cur);
    }
    return J;
}

BestResponse best_response_dp(const FiniteGame& g, int player,
                              const StationaryPolicyProfile& others, Real beta) {
    if (player < 0 || player >= g.num_players())
        throw std::domain_error("best_response_dp: player index out of range");
    const int k = g.num_states;
    const int mb = g.action_counts[player];

    // Marginal MDP of the player, others folded in.
    std::vector<std::vector<Real>> cost(k);          // [state][own action]
    std::vector<std::vector<std::vector<Real>>> trans(k); // [state][own action][next]
    for (int x = 0; x < k; ++x) marginal_model(g, player, x, others.states[x], cost[x], trans[x]);

    // Howard policy iteration with exact evaluation; switches only on strict
    // improvement, so it terminates at the exact optimum.
    std::vector<int> policy(k, 0);
    for (int x = 0; x < k; ++x) {
        for (int b = 1; b < mb; ++b)
            if (cost[x][b] < cost[x][policy[x]]) policy[x] = b;
    }
    std::vector<Real> J(k, 0.0);
    for (int iter = 0; iter < 1000; ++iter) {
        Matrix P(k, k, 0.0);
        std::vector<Real> c(k, 0.0);
        for (int x = 0; x < k; ++x) {
            c[x] = cost[x][policy[x]];
            for (int y = 0; y < k; ++y) P.at(x, y) = trans[x][policy[x]][y];
        }
        J = solve_discounted_evaluation(P, c, beta);

        bool changed = false;
        for (int x = 0; x < k; ++x) {
            Real qcur = 0.0;
            int best = policy[x];
            Real qbest = 0.0;
            for (int b = 0; b < mb; ++b) {
                Real q = cost[x][b];
                for (int y = 0; y < k; ++y) q += beta * trans[x][b][y] * J[y];
                if (b == policy[x]) qcur = q;
                if (b == 0 || q < qbest) {
                    qbest = q;
                    best = b;
                }
            }
            if (best != policy[x] && qbest < qcur - 1e-13 * (1.0 + std::abs(qcur))) {
                policy[x] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    BestResponse br;
    br.values = std::move(J);
    br.actions = std::move(policy);
    return br;
}

BestResponse best_response_dp_finite(const FiniteGame& g, int player,
                                     const MarkovPolicyProfile& others, int T) {
    if (player < 0 || player >= g.num_players())
        throw std::domain_error("best_response_dp_finite: player index out of range");
    const int k = g.num_states;
    const int mb = g.action_counts[player];

    BestResponse br;
    br.values_by_time.assign(T, std::vector<Real>(k, 0.0));
    br.actions_by_time.assign(T, std::vector<int>(k, 0));
    std::vector<Real> next(k, 0.0);
    std::vector<Real> cost_b;
    std::vector<std::vector<Real>> trans_b;
    for (int t = T - 1; t >= 0; --t) {
        for (int x = 0; x < k; ++x) {
            marginal_model(g, player, x, others.times[t].states[x], cost_b, trans_b);
            Real best = std::numeric_limits<Real>::infinity();
            int arg = 0;
            for (int b = 0; b < mb; ++b) {
                Real q = cost_b[b];
                for (int y = 0; y < k; ++y) q += trans_b[b][y] * next[y];
                if (q < best) {
                    best = q;
                    arg = b;
                }
            }
            br.values_by_time[t][x] = best;
            br.actions_by_time[t][x] = arg;
        }
        next = br.values_by_time[t];
    }
    br.values = br.values_by_time[0];
    br.actions = br.actions_by_time[0];
    return br;
}

// ---------------------------------------------------------------------------
// One-step operators
// ---------------------------------------------------------------------------

std::vector<Real> shapley_operator(const FiniteGame& g, Real beta, const std::vector<Real>& J) {
    if (g.num_players() != 2) throw std::domain_error("shapley_operator: need exactly 2 players");
    const int k = g.num_states;
    const int m1 = g.action_counts[0], m2 = g.action_counts[1];
    std::vector<Real> out(k, 0.0);
    for (int x = 0; x < k; ++x) {
        Matrix M(m1, m2);
        for (int b1 = 0; b1 < m1; ++b1)
            for (int b2 = 0; b2 < m2; ++b2) {
                const long joint = static_cast<long>(b1) * m2 + b2;
                Real u = g.cost(0, x, joint);
                const Real* row = g.row(x, joint);
                for (int y = 0; y < k; ++y) u += beta * row[y] * J[y];
                M.at(b1, b2) = u;
            }
        out[x] = matrix_game_value(M).value;
    }
    return out;
}

std::vector<Real> best_response_operator(const FiniteGame& g, int player,
                                         const StationaryPolicyProfile& others, Real beta,
                                         const std::vector<Real>& J) {
    const int k = g.num_states;
    std::vector<Real> out(k, 0.0);
    std::vector<Real> cost_b;
    std::vector<std::vector<Real>> trans_b;
    for (int x = 0; x < k; ++x) {
        marginal_model(g, player, x, others.states[x], cost_b, trans_b);
        Real best = std::numeric_limits<Real>::infinity();
        for (std::size_t b = 0; b < cost_b.size(); ++b) {
            Real q = cost_b[b];
            for (int y = 0; y < k; ++y) q += beta * trans_b[b][y] * J[y];
            best = std::min(best, q);
        }
        out[x] = best;
    }
    return out;
}

std::vector<Real> team_operator(const FiniteGame& g, Real beta, const std::vector<Real>& J) {
    const int k = g.num_states;
    const long Jn = g.joint_count();
    std::vector<Real> out(k, 0.0);
    for (int x = 0; x < k; ++x) {
        Real best = std::numeric_limits<Real>::infinity();
        for (long joint = 0; joint < Jn; ++joint) {
            Real q = g.cost(0, x, joint);
            const Real* row = g.row(x, joint);
            for (int y = 0; y < k; ++y) q += beta * row[y] * J[y];
            best = std::min(best, q);
        }
        out[x] = best;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gap certification
// ---------------------------------------------------------------------------

void certify_dynamic_gaps(const FiniteGame& g, Real beta, SolveReport& report) {
    const int N = g.num_players();
    const int k = g.num_states;
    report.values.values = policy_evaluation(g, report.stationary, beta);
    report.values.by_time.clear();
    report.dynamic_gap_by_state.assign(N, std::vector<Real>(k, 0.0));
    report.dynamic_gaps.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const BestResponse br = best_response_dp(g, i, report.stationary, beta);
        for (int x = 0; x < k; ++x) {
            const Real gap = report.values.values[i][x] - br.values[x];
            report.dynamic_gap_by_state[i][x] = gap;
            report.dynamic_gaps[i] = std::max(report.dynamic_gaps[i], gap);
        }
    }
}

void certify_dynamic_gaps_finite(const FiniteGame& g, int T, SolveReport& report) {
    const int N = g.num_players();
    const int k = g.num_states;
    const auto by_time = policy_evaluation_finite(g, report.markov, T);
    report.values.by_time = by_time;
    report.values.values = by_time.empty() ? std::vector<std::vector<Real>>()
                                           : by_time.front();
    report.dynamic_gap_by_state.assign(N, std::vector<Real>(k, 0.0));
    report.dynamic_gaps.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const BestResponse br = best_response_dp_finite(g, i, report.markov, T);
        for (int t = 0; t < T; ++t)
            for (int x = 0; x < k; ++x) {
                const Real gap = by_time[t][i][x] - br.values_by_time[t][x];
                if (t == 0) report.dynamic_gap_by_state[i][x] = gap;
                report.dynamic_gaps[i] = std::max(report.dynamic_gaps[i], gap);
            }
    }
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

SolveReport backward_induction_nash(const FiniteGame& g, int T, Real tol, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("backward_induction_nash: T must be >= 1");
    const int N = g.num_players();
    const int k = g.num_states;

    SolveReport report;
    report.finite_horizon = true;
    report.method = "backward-induction";
    report.markov.times.assign(T, StationaryPolicyProfile{});
    report.stage_gaps.assign(N, std::vector<Real>(k, 0.0));

    std::vector<std::vector<Real>> J(N, std::vector<Real>(k, 0.0)); // J_T = 0
    for (int t = T - 1; t >= 0; --t) {
        report.markov.times[t].states.resize(k);
        std::vector<std::vector<Real>> Jt(N, std::vector<Real>(k, 0.0));
        for (int x = 0; x < k; ++x) {
            const NormalFormGame nfg = stage_game_at(g, x, J, 1.0);
            const StageSolution sol =
                nplayer_nash(nfg, tol, mix_seed(seed, static_cast<std::uint64_t>(t) * k + x),
                             kStageBudget);
            report.markov.times[t].states[x] = sol.profile;
            for (int i = 0; i < N; ++i) {
                Jt[i][x] = sol.values[i];
                report.stage_gaps[i][x] = std::max(report.stage_gaps[i][x], sol.gaps[i]);
            }
        }
        J = std::move(Jt);
    }
    report.iterations = T;
    Real worst_stage_gap = 0.0;
    for (const auto& row : report.stage_gaps)
        for (Real gp : row) worst_stage_gap = std::max(worst_stage_gap, gp);
    report.converged = worst_stage_gap <= tol + 1e-12; // flagged otherwise
    certify_dynamic_gaps_finite(g, T, report);
    return report;
}

SolveReport nash_value_iteration(const FiniteGame& g, Real beta, Real tol, int max_iter,
                                 Real damping, std::uint64_t seed) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("nash_value_iteration: beta must be in [0,1)");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("nash_value_iteration: damping must be in (0,1]");
    const int N = g.num_players();
    const int k = g.num_states;

    SolveReport report;
    report.method = "nash-value-iteration";
    report.stage_gaps.assign(N, std::vector<Real>(k, 0.0));

    std::vector<std::vector<Real>> J(N, std::vector<Real>(k, 0.0));
    StationaryPolicyProfile prof = uniform_profile(g);
    const Real threshold = tol * (1.0 - beta);

    int iter = 0;
    bool used_regret = false;
    for (; iter < max_iter; ++iter) {
        std::vector<std::vector<Real>> Jn(N, std::vector<Real>(k, 0.0));
        for (int x = 0; x < k; ++x) {
            const NormalFormGame nfg = stage_game_at(g, x, J, beta);
            std::vector<StageSolution> candidates = enumerate_stage_equilibria(nfg, kStageTol, 64);
            if (candidates.empty()) {
                used_regret = true;
                candidates.push_back(stage_regret_search(
                    nfg, kStageTol, mix_seed(seed, static_cast<std::uint64_t>(iter) * k + x), 8,
                    &prof.states[x]));
            }
            // Selection continuity: stay close to the previous iterate's profile.
            std::size_t pick = 0;
            Real best_d = std::numeric_limits<Real>::infinity();
            for (std::size_t cnd = 0; cnd < candidates.size(); ++cnd) {
                const Real d = profile_distance(candidates[cnd].profile, prof.states[x]);
                if (d < best_d - 1e-15) {
                    best_d = d;
                    pick = cnd;
                }
            }
            const StageSolution& sol = candidates[pick];
            prof.states[x] = sol.profile;
            for (int i = 0; i < N; ++i) {
                Jn[i][x] = (1.0 - damping) * J[i][x] + damping * sol.values[i];
                report.stage_gaps[i][x] = sol.gaps[i];
            }
        }
        Real res = 0.0;
        for (int i = 0; i < N; ++i)
            for (int x = 0; x < k; ++x) res = std::max(res, std::abs(Jn[i][x] - J[i][x]));
        J = std::move(Jn);
        report.residual_history.push_back(res);
        report.residual = res;
        if (res <= threshold) {
            ++iter;
            report.converged = true;
            break;
        }
    }
    report.iterations = iter;
    report.stationary = std::move(prof);
    if (used_regret) report.method += "+regret-stage";
    certify_dynamic_gaps(g, beta, report);
    return report;
}

SolveReport stationary_regret_search(const FiniteGame& g, Real beta, Real tol, int budget,
                                     std::uint64_t seed, const StationaryPolicyProfile* warm) {
    const int N = g.num_players();
    const int k = g.num_states;

    auto objective = [&](const StationaryPolicyProfile& p) {
        const auto vals = policy_evaluation(g, p, beta);
        Real worst = 0.0;
        for (int i = 0; i < N; ++i) {
            const BestResponse br = best_response_dp(g, i, p, beta);
            for (int x = 0; x < k; ++x) worst = std::max(worst, vals[i][x] - br.values[x]);
        }
        return worst;
    };

    Rng rng(seed);
    auto random_profile = [&]() {
        StationaryPolicyProfile p;
        p.states.resize(k);
        for (int x = 0; x < k; ++x) {
            p.states[x].probs.resize(N);
            for (int i = 0; i < N; ++i) {
                p.states[x].probs[i].resize(g.action_counts[i]);
                Real s = 0.0;
                for (Real& v : p.states[x].probs[i]) s += (v = -std::log(1.0 - rng.uniform()));
                for (Real& v : p.states[x].probs[i]) v /= s;
            }
        }
        return p;
    };

    StationaryPolicyProfile best = warm ? *warm : uniform_profile(g);
    Real best_obj = objective(best);

    const Real etas[] = {1.0, 0.5, 0.25, 0.125, 0.0625};
    for (int r = 0; r < std::max(1, budget) && best_obj > tol; ++r) {
        StationaryPolicyProfile cur =
            (r == 0) ? best : random_profile();
        Real cur_obj = objective(cur);
        for (int step = 0; step < 50 && cur_obj > tol; ++step) {
            // Move each player toward its exact best response.
            std::vector<BestResponse> brs;
            brs.reserve(N);
            for (int i = 0; i < N; ++i) brs.push_back(best_response_dp(g, i, cur, beta));
            bool improved = false;
            for (Real eta : etas) {
                StationaryPolicyProfile cand = cur;
                for (int x = 0; x < k; ++x)
                    for (int i = 0; i < N; ++i) {
                        auto& pv = cand.states[x].probs[i];
                        for (Real& v : pv) v *= (1.0 - eta);
                        pv[brs[i].actions[x]] += eta;
                    }
                const Real cobj = objective(cand);
                if (cobj < cur_obj - 1e-14) {
                    cur = std::move(cand);
                    cur_obj = cobj;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (cur_obj < best_obj) {
            best = std::move(cur);
            best_obj = cur_obj;
        }
    }

    SolveReport report;
    report.method = "stationary-regret-search";
    report.stationary = std::move(best);
    report.converged = best_obj <= tol;
    report.iterations = budget;
    report.stage_gaps.assign(N, std::vector<Real>(k, 0.0));
    certify_dynamic_gaps(g, beta, report);
    return report;
}

SolveReport shapley_iteration(const FiniteGame& g, Real beta, Real tol) {
    if (g.num_players() != 2) throw std::domain_error("shapley_iteration: need exactly 2 players");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::domain_error("shapley_iteration: beta must be in [0,1)");
    const long J = g.joint_count();
    for (int x = 0; x < g.num_states; ++x)
        for (long joint = 0; joint < J; ++joint)
            if (std::abs(g.cost(0, x, joint) + g.cost(1, x, joint)) > 1e-12)
                throw std::domain_error("shapley_iteration: game is not zero-sum");

    const int k = g.num_states;
    SolveReport report;
    report.method = "shapley";

    const Real threshold = (beta > 0.0) ? tol * (1.0 - beta) / (2.0 * beta)
                                        : std::numeric_limits<Real>::infinity();
    std::vector<Real> v(k, 0.0);
    int iter = 0;
    for (; iter < 200000; ++iter) {
        std::vector<Real> vn = shapley_operator(g, beta, v);
        Real res = 0.0;
        for (int x = 0; x < k; ++x) res = std::max(res, std::abs(vn[x] - v[x]));
        v = std::move(vn);
        report.residual_history.push_back(res);
        report.residual = res;
        if (res <= threshold) {
            ++iter;
            report.converged = true;
            break;
        }
    }
    report.iterations = iter;

    // Saddle-point profile from the final per-state matrix games.
    report.stationary.states.resize(k);
    const int m1 = g.action_counts[0], m2 = g.action_counts[1];
    for (int x = 0; x < k; ++x) {
        Matrix M(m1, m2);
        for (int b1 = 0; b1 < m1; ++b1)
            for (int b2 = 0; b2 < m2; ++b2) {
                const long joint = static_cast<long>(b1) * m2 + b2;
                Real u = g.cost(0, x, joint);
                const Real* row = g.row(x, joint);
                for (int y = 0; y < k; ++y) u += beta * row[y] * v[y];
                M.at(b1, b2) = u;
            }
        const MatrixGameSolution mg = matrix_game_value(M);
        report.stationary.states[x].probs = {mg.row_mix, mg.col_mix};
        const NormalFormGame nfg = stage_game_at(
            g, x, std::vector<std::vector<Real>>{v, [&] {
                      std::vector<Real> neg(v.size());
                      for (std::size_t y = 0; y < v.size(); ++y) neg[y] = -v[y];
                      return neg;
                  }()},
            beta);
        const auto gaps = best_response_gap(nfg, report.stationary.states[x]);
        if (report.stage_gaps.empty())
            report.stage_gaps.assign(2, std::vector<Real>(k, 0.0));
        report.stage_gaps[0][x] = gaps[0];
        report.stage_gaps[1][x] = gaps[1];
    }
    certify_dynamic_gaps(g, beta, report);
    return report;
}

SolveReport team_value_iteration(const FiniteGame& g, Real beta, Real tol) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::domain_error("team_value_iteration: beta must be in [0,1)");
    const long Jn = g.joint_count();
    for (int i = 1; i < g.num_players(); ++i)
        for (int x = 0; x < g.num_states; ++x)
            for (long joint = 0; joint < Jn; ++joint)
                if (std::abs(g.cost(i, x, joint) - g.cost(0, x, joint)) > 1e-12)
                    throw std::domain_error("team_value_iteration: costs are not common");

    const int k = g.num_states;
    SolveReport report;
    report.method = "team-vi";

    const Real threshold = (beta > 0.0) ? tol * (1.0 - beta) / (2.0 * beta)
                                        : std::numeric_limits<Real>::infinity();
    std::vector<Real> v(k, 0.0);
    int iter = 0;
    for (; iter < 200000; ++iter) {
        std::vector<Real> vn = team_operator(g, beta, v);
        Real res = 0.0;
        for (int x = 0; x < k; ++x) res = std::max(res, std::abs(vn[x] - v[x]));
        v = std::move(vn);
        report.residual_history.push_back(res);
        report.residual = res;
        if (res <= threshold) {
            ++iter;
            report.converged = true;
            break;
        }
    }
    report.iterations = iter;

    // Greedy deterministic joint policy, smallest joint index on ties.
    report.stationary.states.resize(k);
    JointIndexer jix(g.action_counts);
    std::vector<int> idx;
    for (int x = 0; x < k; ++x) {
        long best_joint = 0;
        Real best_q = std::numeric_limits<Real>::infinity();
        for (long joint = 0; joint < Jn; ++joint) {
            Real q = g.cost(0, x, joint);
            const Real* row = g.row(x, joint);
            for (int y = 0; y < k; ++y) q += beta * row[y] * v[y];
            if (q < best_q) {
                best_q = q;
                best_joint = joint;
            }
        }
        jix.decode(best_joint, idx);
        report.stationary.states[x].probs.resize(g.num_players());
        for (int i = 0; i < g.num_players(); ++i) {
            report.stationary.states[x].probs[i].assign(g.action_counts[i], 0.0);
            report.stationary.states[x].probs[i][idx[i]] = 1.0;
        }
    }
    report.stage_gaps.assign(g.num_players(), std::vector<Real>(k, 0.0));
    certify_dynamic_gaps(g, beta, report);
    return report;
}

} // namespace mgq
