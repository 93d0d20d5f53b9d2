#include "mgq/stage_nash.hpp"

#include <algorithm>
#include <cmath>

#include "mgq/rng.hpp"

namespace mgq {

const char* stage_method_name(StageMethod m) {
    switch (m) {
        case StageMethod::pure_enum: return "pure-enum";
        case StageMethod::support_enum: return "support-enum";
        case StageMethod::lp_minimax: return "lp-minimax";
        case StageMethod::regret_search: return "regret-search";
    }
    return "?";
}

namespace {

void decode_joint(const std::vector<int>& counts, long joint, std::vector<int>& idx) {
    idx.resize(counts.size());
    for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(joint % counts[i]);
        joint /= counts[i];
    }
}

void check_profile(const NormalFormGame& g, const MixedProfile& profile) {
    if (static_cast<int>(profile.probs.size()) != g.num_players)
        throw std::domain_error("profile has wrong number of players");
    for (int i = 0; i < g.num_players; ++i)
        if (static_cast<int>(profile.probs[i].size()) != g.action_counts[i])
            throw std::domain_error("profile has wrong number of actions for player " +
                                    std::to_string(i + 1));
}

/// s[i][b] = E[u^i | player i plays b, everyone else follows the profile].
std::vector<std::vector<Real>> conditional_values(const NormalFormGame& g,
                                                  const MixedProfile& profile) {
    std::vector<std::vector<Real>> s(g.num_players);
    for (int i = 0; i < g.num_players; ++i) s[i].assign(g.action_counts[i], 0.0);

    const long J = g.joint_count();
    std::vector<int> idx;
    for (long joint = 0; joint < J; ++joint) {
        decode_joint(g.action_counts, joint, idx);
        for (int i = 0; i < g.num_players; ++i) {
            Real w = 1.0;
            for (int p = 0; p < g.num_players; ++p)
                if (p != i) w *= profile.probs[p][idx[p]];
            if (w != 0.0) s[i][idx[i]] += w * g.costs[i][joint];
        }
    }
    return s;
}

MixedProfile pure_profile(const NormalFormGame& g, const std::vector<int>& idx) {
    MixedProfile p;
    p.probs.resize(g.num_players);
    for (int i = 0; i < g.num_players; ++i) {
        p.probs[i].assign(g.action_counts[i], 0.0);
        p.probs[i][idx[i]] = 1.0;
    }
    return p;
}

StageSolution finish_solution(const NormalFormGame& g, MixedProfile profile, StageMethod method) {
    StageSolution sol;
    sol.profile = std::move(profile);
    sol.values = expected_costs(g, sol.profile);
    sol.gaps = best_response_gap(g, sol.profile);
    sol.method = method;
    return sol;
}

bool lexicographic_less(const MixedProfile& a, const MixedProfile& b) {
    for (std::size_t i = 0; i < a.probs.size(); ++i) {
        for (std::size_t j = 0; j < a.probs[i].size(); ++j) {
            if (a.probs[i][j] != b.probs[i][j]) return a.probs[i][j] < b.probs[i][j];
        }
    }
    return false;
}

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::vector<Real>& v) {
    std::vector<Real> u = v;
    std::sort(u.begin(), u.end(), std::greater<Real>());
    Real css = 0.0, theta = 0.0;
    int rho = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        css += u[j];
        const Real t = (css - 1.0) / static_cast<Real>(j + 1);
        if (u[j] - t > 0.0) {
            rho = static_cast<int>(j + 1);
            theta = t;
        }
    }
    (void)rho;
    Real sum = 0.0;
    for (Real& x : v) {
        x = std::max(x - theta, 0.0);
        sum += x;
    }
    for (Real& x : v) x /= sum;
}

std::vector<int> first_combination(int size) {
    std::vector<int> c(size);
    for (int i = 0; i < size; ++i) c[i] = i;
    return c;
}

bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - (k - i)) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Complementarity linear system for a support pair: indifference on each
// support, both mixes summing to one. Returns false on singular systems.
bool solve_support_pair(const Matrix& A, const Matrix& B, const std::vector<int>& sr,
                        const std::vector<int>& sc, std::vector<Real>& x, std::vector<Real>& y) {
    const int kr = static_cast<int>(sr.size());
    const int kc = static_cast<int>(sc.size());
    const int n = kr + kc + 2; // x..., y..., alpha, beta
    Matrix S(n, n, 0.0);
    std::vector<Real> rhs(n, 0.0);
    int row = 0;
    for (int i = 0; i < kr; ++i, ++row) { // sum_j A[sr_i][sc_j] y_j - alpha = 0
        for (int j = 0; j < kc; ++j) S.at(row, kr + j) = A.at(sr[i], sc[j]);
        S.at(row, kr + kc) = -1.0;
    }
    for (int j = 0; j < kc; ++j, ++row) { // sum_i B[sr_i][sc_j] x_i - beta = 0
        for (int i = 0; i < kr; ++i) S.at(row, i) = B.at(sr[i], sc[j]);
        S.at(row, kr + kc + 1) = -1.0;
    }
    for (int i = 0; i < kr; ++i) S.at(row, i) = 1.0;
    rhs[row++] = 1.0;
    for (int j = 0; j < kc; ++j) S.at(row, kr + j) = 1.0;
    rhs[row++] = 1.0;

    std::vector<Real> sol;
    if (!solve_linear_system(S, rhs, sol)) return false;
    x.assign(A.rows, 0.0);
    y.assign(A.cols, 0.0);
    for (int i = 0; i < kr; ++i) {
        if (sol[i] < -1e-9) return false;
        x[sr[i]] = std::max(sol[i], 0.0);
    }
    for (int j = 0; j < kc; ++j) {
        if (sol[kr + j] < -1e-9) return false;
        y[sc[j]] = std::max(sol[kr + j], 0.0);
    }
    auto renorm = [](std::vector<Real>& v) {
        Real s = 0.0;
        for (Real t : v) s += t;
        if (!(s > 0.0)) return false;
        for (Real& t : v) t /= s;
        return true;
    };
    return renorm(x) && renorm(y);
}

NormalFormGame bimatrix_as_nfg(const Matrix& A, const Matrix& B) {
    NormalFormGame g;
    g.num_players = 2;
    g.action_counts = {A.rows, A.cols};
    g.costs.assign(2, std::vector<Real>(static_cast<std::size_t>(A.rows) * A.cols));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) {
            g.costs[0][static_cast<std::size_t>(i) * A.cols + j] = A.at(i, j);
            g.costs[1][static_cast<std::size_t>(i) * A.cols + j] = B.at(i, j);
        }
    return g;
}

} // namespace

std::vector<Real> expected_costs(const NormalFormGame& g, const MixedProfile& profile) {
    check_profile(g, profile);
    std::vector<Real> values(g.num_players, 0.0);
    const long J = g.joint_count();
    std::vector<int> idx;
    for (long joint = 0; joint < J; ++joint) {
        decode_joint(g.action_counts, joint, idx);
        Real w = 1.0;
        for (int p = 0; p < g.num_players; ++p) w *= profile.probs[p][idx[p]];
        if (w == 0.0) continue;
        for (int i = 0; i < g.num_players; ++i) values[i] += w * g.costs[i][joint];
    }
    return values;
}

std::vector<Real> best_response_gap(const NormalFormGame& g, const MixedProfile& profile) {
    check_profile(g, profile);
    const auto s = conditional_values(g, profile);
    std::vector<Real> gaps(g.num_players, 0.0);
    for (int i = 0; i < g.num_players; ++i) {
        Real expected = 0.0, best = std::numeric_limits<Real>::infinity();
        for (int b = 0; b < g.action_counts[i]; ++b) {
            expected += profile.probs[i][b] * s[i][b];
            best = std::min(best, s[i][b]);
        }
        gaps[i] = expected - best;
    }
    return gaps;
}

MatrixGameSolution matrix_game_value(const Matrix& M) {
    if (M.rows < 1 || M.cols < 1) throw std::domain_error("matrix_game_value: empty matrix");
    Real lo = std::numeric_limits<Real>::infinity();
    for (Real v : M.data) {
        if (!std::isfinite(v)) throw std::domain_error("matrix_game_value: non-finite entry");
        lo = std::min(lo, v);
    }
    const Real shift = 1.0 - lo; // all shifted entries >= 1, so the value is positive

    // Row player minimizes: with x = mu / v, minimizing v is
    //   maximize sum(x) s.t. M'^T x <= 1, x >= 0.
    Matrix At(M.cols, M.rows);
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) At.at(j, i) = M.at(i, j) + shift;
    const std::vector<Real> ones_obj(M.rows, 1.0);
    const std::vector<Real> ones_rhs(M.cols, 1.0);
    LpResult lp = simplex_maximize(ones_obj, At, ones_rhs);
    if (!lp.optimal || !(lp.objective > 0.0))
        throw std::domain_error("matrix_game_value: LP failed");

    const Real v_shifted = 1.0 / lp.objective;
    MatrixGameSolution sol;
    sol.value = v_shifted - shift;
    sol.row_mix.assign(M.rows, 0.0);
    sol.col_mix.assign(M.cols, 0.0);
    Real sr = 0.0, sc = 0.0;
    for (int i = 0; i < M.rows; ++i) sr += (sol.row_mix[i] = std::max(lp.x[i] * v_shifted, 0.0));
    for (int j = 0; j < M.cols; ++j) sc += (sol.col_mix[j] = std::max(lp.dual[j] * v_shifted, 0.0));
    for (Real& p : sol.row_mix) p /= sr;
    for (Real& p : sol.col_mix) p /= sc;
    return sol;
}

StageSolution bimatrix_nash(const Matrix& A, const Matrix& B, Real tol) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::domain_error("bimatrix_nash: shape mismatch");
    const NormalFormGame g = bimatrix_as_nfg(A, B);

    bool have_fallback = false;
    StageSolution fallback;
    std::vector<Real> x, y;
    for (int total = 2; total <= A.rows + A.cols; ++total) {
        for (int kr = std::max(1, total - A.cols); kr <= std::min(A.rows, total - 1); ++kr) {
            const int kc = total - kr;
            std::vector<int> sr = first_combination(kr);
            do {
                std::vector<int> sc = first_combination(kc);
                do {
                    if (!solve_support_pair(A, B, sr, sc, x, y)) continue;
                    StageSolution cand =
                        finish_solution(g, MixedProfile{{x, y}}, StageMethod::support_enum);
                    if (cand.max_gap() <= tol) return cand;
                    if (!have_fallback || cand.max_gap() < fallback.max_gap()) {
                        fallback = cand;
                        have_fallback = true;
                    }
                } while (next_combination(sc, A.cols));
            } while (next_combination(sr, A.rows));
        }
    }
    // A finite game always has an equilibrium; reaching this point means every
    // support system was numerically degenerate. Return the best candidate
    // with its honest gaps rather than hiding the failure.
    if (have_fallback) return fallback;
    return finish_solution(g, pure_profile(g, {0, 0}), StageMethod::support_enum);
}

namespace {

StageSolution regret_descent(const NormalFormGame& g, MixedProfile start, Real tol,
                             int max_steps) {
    const int N = g.num_players;
    MixedProfile cur = std::move(start);
    auto objective = [&](const MixedProfile& p) {
        Real f = 0.0;
        for (Real gap : best_response_gap(g, p)) f += gap;
        return f;
    };
    Real f = objective(cur);
    Real step = 0.1;

    std::vector<int> idx;
    for (int it = 0; it < max_steps && f > tol * 0.1; ++it) {
        // Subgradient of sum_i gap_i over the product of simplices.
        const auto s = conditional_values(g, cur);
        std::vector<int> argmin(N, 0);
        for (int i = 0; i < N; ++i)
            for (int b = 1; b < g.action_counts[i]; ++b)
                if (s[i][b] < s[i][argmin[i]]) argmin[i] = b;

        std::vector<std::vector<Real>> grad(N);
        for (int i = 0; i < N; ++i) grad[i].assign(g.action_counts[i], 0.0);
        for (int i = 0; i < N; ++i)
            for (int b = 0; b < g.action_counts[i]; ++b) grad[i][b] += s[i][b];
        // Cross terms: d gap_j / d pi_i(b) for j != i.
        const long J = g.joint_count();
        for (long joint = 0; joint < J; ++joint) {
            decode_joint(g.action_counts, joint, idx);
            for (int j = 0; j < N; ++j) {
                for (int i = 0; i < N; ++i) {
                    if (i == j) continue;
                    Real w = 1.0;
                    for (int p = 0; p < N; ++p)
                        if (p != i && p != j) w *= cur.probs[p][idx[p]];
                    if (w == 0.0) continue;
                    // E-part with j following the profile, minus the deviation part
                    // where j is pinned at its current best response.
                    grad[i][idx[i]] += w * g.costs[j][joint] * cur.probs[j][idx[j]];
                    if (idx[j] == argmin[j]) grad[i][idx[i]] -= w * g.costs[j][joint];
                }
            }
        }

        bool improved = false;
        while (step > 1e-6) {
            MixedProfile cand = cur;
            for (int i = 0; i < N; ++i) {
                for (int b = 0; b < g.action_counts[i]; ++b)
                    cand.probs[i][b] -= step * grad[i][b];
                project_simplex(cand.probs[i]);
            }
            const Real fc = objective(cand);
            if (fc < f - 1e-14) {
                cur = std::move(cand);
                f = fc;
                step = std::min(step * 1.5, 0.5);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return finish_solution(g, std::move(cur), StageMethod::regret_search);
}

} // namespace

StageSolution stage_regret_search(const NormalFormGame& g, Real tol, std::uint64_t seed,
                                  int restarts, const MixedProfile* warm) {
    Rng rng(seed);
    StageSolution best;
    bool have = false;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        MixedProfile start;
        start.probs.resize(g.num_players);
        if (r == 0 && warm) {
            start = *warm;
        } else {
            for (int i = 0; i < g.num_players; ++i) {
                start.probs[i].resize(g.action_counts[i]);
                Real s = 0.0;
                for (Real& p : start.probs[i]) s += (p = -std::log(1.0 - rng.uniform()));
                for (Real& p : start.probs[i]) p /= s;
            }
        }
        StageSolution sol = regret_descent(g, std::move(start), tol, 200);
        const bool better =
            !have || sol.max_gap() < best.max_gap() - 1e-15 ||
            (std::abs(sol.max_gap() - best.max_gap()) <= 1e-15 &&
             lexicographic_less(sol.profile, best.profile));
        if (better) {
            best = std::move(sol);
            have = true;
        }
        if (best.max_gap() <= tol) break;
    }
    return best;
}

std::vector<StageSolution> enumerate_stage_equilibria(const NormalFormGame& g, Real tol,
                                                      std::size_t max_count) {
    std::vector<StageSolution> out;
    const long J = g.joint_count();
    std::vector<int> idx;
    for (long joint = 0; joint < J && out.size() < max_count; ++joint) {
        decode_joint(g.action_counts, joint, idx);
        MixedProfile p = pure_profile(g, idx);
        StageSolution sol = finish_solution(g, std::move(p), StageMethod::pure_enum);
        if (sol.max_gap() <= std::max(tol, 1e-12)) out.push_back(std::move(sol));
    }
    if (g.num_players == 2) {
        Matrix A(g.action_counts[0], g.action_counts[1]);
        Matrix B(g.action_counts[0], g.action_counts[1]);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) {
                A.at(i, j) = g.costs[0][static_cast<std::size_t>(i) * A.cols + j];
                B.at(i, j) = g.costs[1][static_cast<std::size_t>(i) * A.cols + j];
            }
        std::vector<Real> x, y;
        for (int total = 3; total <= A.rows + A.cols && out.size() < max_count; ++total) {
            for (int kr = std::max(1, total - A.cols); kr <= std::min(A.rows, total - 1); ++kr) {
                const int kc = total - kr;
                std::vector<int> sr = first_combination(kr);
                do {
                    std::vector<int> sc = first_combination(kc);
                    do {
                        if (out.size() >= max_count) break;
                        if (!solve_support_pair(A, B, sr, sc, x, y)) continue;
                        StageSolution cand =
                            finish_solution(g, MixedProfile{{x, y}}, StageMethod::support_enum);
                        if (cand.max_gap() <= std::max(tol, 1e-10)) out.push_back(std::move(cand));
                    } while (next_combination(sc, A.cols));
                } while (next_combination(sr, A.rows));
            }
        }
    }
    return out;
}

StageSolution nplayer_nash(const NormalFormGame& g, Real tol, std::uint64_t seed, int budget) {
    if (g.num_players < 1) throw std::domain_error("nplayer_nash: need at least one player");
    for (int i = 0; i < g.num_players; ++i)
        for (Real v : g.costs[i])
            if (!std::isfinite(v)) throw std::domain_error("nplayer_nash: non-finite cost entry");

    // (1) exhaustive pure enumeration, lexicographic over joint actions.
    const long J = g.joint_count();
    std::vector<int> idx;
    for (long joint = 0; joint < J; ++joint) {
        decode_joint(g.action_counts, joint, idx);
        MixedProfile p = pure_profile(g, idx);
        const auto gaps = best_response_gap(g, p);
        Real worst = 0.0;
        for (Real gp : gaps) worst = std::max(worst, gp);
        if (worst <= std::max(tol, 1e-12)) {
            StageSolution sol = finish_solution(g, std::move(p), StageMethod::pure_enum);
            return sol;
        }
    }

    // (2) two-player support enumeration.
    if (g.num_players == 2) {
        Matrix A(g.action_counts[0], g.action_counts[1]);
        Matrix B(g.action_counts[0], g.action_counts[1]);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) {
                A.at(i, j) = g.costs[0][static_cast<std::size_t>(i) * A.cols + j];
                B.at(i, j) = g.costs[1][static_cast<std::size_t>(i) * A.cols + j];
            }
        StageSolution sol = bimatrix_nash(A, B, tol);
        if (sol.max_gap() <= tol) return sol;
    }

    // (3) regret search; the result carries honest gaps even when above tol.
    return stage_regret_search(g, tol, seed, budget, nullptr);
}

} // namespace mgq
