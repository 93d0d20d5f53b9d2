#include "mgq/verify.hpp"

#include <chrono>
#include <cmath>

namespace mgq {

namespace {

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
    return std::chrono::duration<Real>(Clock::now() - t0).count();
}

/// Cell-averaged stage value of one joint action from cell j:
/// avg(c_player) + disc * sum_l J_l * normalized avg pushforward mass.
Real quantized_stage_value(const ContinuousGame& game, const StateNet& snet, int j,
                           const JointAction& a, const std::vector<Real>& J_cells, int player,
                           Real disc) {
    const Quadrature& quad = snet.cell_quadrature[j];
    const std::size_t nq = quad.size();
    const int k = snet.size();

    std::vector<Real> node_costs(nq);
    for (std::size_t q = 0; q < nq; ++q) node_costs[q] = game.cost_fns[player](quad.nodes[q], a);
    Real value = detail::anchored_average(node_costs, quad);

    if (disc != 0.0 && !J_cells.empty()) {
        std::vector<Real> row0(k), rowq(k), acc(k, 0.0);
        detail::pushforward_row(game, snet, quad.nodes[0], a, row0);
        Real total_w = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            total_w += quad.weights[q];
            if (q == 0) continue;
            detail::pushforward_row(game, snet, quad.nodes[q], a, rowq);
            for (int l = 0; l < k; ++l) acc[l] += quad.weights[q] * (rowq[l] - row0[l]);
        }
        std::vector<Real> row(k);
        for (int l = 0; l < k; ++l) row[l] = std::max(row0[l] + acc[l] / total_w, 0.0);
        normalize_row(row);
        Real cont = 0.0;
        for (int l = 0; l < k; ++l) cont += row[l] * J_cells[l];
        value += disc * cont;
    }
    return value;
}

std::vector<Real> extended_operator_impl(const ContinuousGame& game, const StateNet& snet,
                                         const ActionNet& anet, const StationaryPolicyProfile& prof,
                                         const std::vector<Real>& J_cells, int player, Real disc) {
    if (static_cast<int>(prof.states.size()) != snet.size())
        throw std::domain_error("apply_extended_operator: profile does not match the net");
    const int k = snet.size();
    const int N = game.num_players;
    std::vector<int> other_players;
    for (int p = 0; p < N; ++p)
        if (p != player) other_players.push_back(p);

    std::vector<Real> out(k, 0.0);
    std::vector<int> oidx(other_players.size(), 0);
    JointAction a(N);
    for (int j = 0; j < k; ++j) {
        const MixedProfile& mix = prof.states[j];
        Real best = std::numeric_limits<Real>::infinity();
        for (std::size_t bi = 0; bi < anet.points[player].size(); ++bi) {
            a[player] = anet.points[player][bi];
            Real v = 0.0;
            // Mixed-radix sweep over the other players' net actions.
            std::fill(oidx.begin(), oidx.end(), 0);
            bool done = other_players.empty();
            if (done) {
                v = quantized_stage_value(game, snet, j, a, J_cells, player, disc);
            }
            while (!done) {
                Real w = 1.0;
                for (std::size_t o = 0; o < other_players.size(); ++o)
                    w *= mix.probs[other_players[o]][oidx[o]];
                if (w != 0.0) {
                    for (std::size_t o = 0; o < other_players.size(); ++o)
                        a[other_players[o]] = anet.points[other_players[o]][oidx[o]];
                    v += w * quantized_stage_value(game, snet, j, a, J_cells, player, disc);
                }
                int o = static_cast<int>(other_players.size()) - 1;
                for (; o >= 0; --o) {
                    if (++oidx[o] < static_cast<int>(anet.points[other_players[o]].size())) break;
                    oidx[o] = 0;
                }
                done = o < 0;
            }
            best = std::min(best, v);
        }
        out[j] = best;
    }
    return out;
}

} // namespace

ExtendedPolicyProfile extend_policy(const StationaryPolicyProfile& profile, const StateNet& net) {
    if (static_cast<int>(profile.states.size()) != net.size())
        throw std::domain_error("extend_policy: profile defined on a different net");
    ExtendedPolicyProfile ext;
    ext.net = net;
    ext.stationary = profile;
    return ext;
}

ExtendedPolicyProfile extend_policy(const MarkovPolicyProfile& profile, const StateNet& net) {
    for (const auto& slice : profile.times)
        if (static_cast<int>(slice.states.size()) != net.size())
            throw std::domain_error("extend_policy: profile defined on a different net");
    ExtendedPolicyProfile ext;
    ext.net = net;
    ext.is_markov = true;
    ext.markov = profile;
    return ext;
}

std::vector<Real> apply_extended_operator(const ContinuousGame& game, const StateNet& snet,
                                          const ActionNet& anet,
                                          const ExtendedPolicyProfile& profile,
                                          const std::vector<Real>& J_cells, int player,
                                          Real beta) {
    return extended_operator_impl(game, snet, anet, profile.stationary, J_cells, player, beta);
}

std::vector<Real> apply_extended_operator_t(const ContinuousGame& game, const StateNet& snet,
                                            const ActionNet& anet,
                                            const ExtendedPolicyProfile& profile,
                                            const std::vector<Real>& J_next_cells, int player,
                                            int t) {
    return extended_operator_impl(game, snet, anet, profile.markov.times[t], J_next_cells, player,
                                  1.0);
}

Real fixed_point_residual(const ContinuousGame& game, const StateNet& snet, const ActionNet& anet,
                          const SolveReport& report, Real beta) {
    const ExtendedPolicyProfile ext = extend_policy(report.stationary, snet);
    Real residual = 0.0;
    for (int i = 0; i < game.num_players; ++i) {
        const std::vector<Real>& J = report.values.values[i];
        const std::vector<Real> TJ = apply_extended_operator(game, snet, anet, ext, J, i, beta);
        for (int j = 0; j < snet.size(); ++j)
            residual = std::max(residual, std::abs(TJ[j] - J[j]));
    }
    return residual;
}

StationaryPolicyProfile lift_profile_to_net(const StationaryPolicyProfile& profile,
                                            const StateNet& coarse, const ActionNet& coarse_a,
                                            const StateNet& fine, const ActionNet& fine_a) {
    StationaryPolicyProfile lifted;
    lifted.states.resize(fine.size());
    const int N = static_cast<int>(coarse_a.points.size());
    for (int jf = 0; jf < fine.size(); ++jf) {
        const int jc = nearest_state(coarse, fine.points[jf]);
        const MixedProfile& src = profile.states[jc];
        MixedProfile dst;
        dst.probs.resize(N);
        for (int i = 0; i < N; ++i) {
            dst.probs[i].assign(fine_a.points[i].size(), 0.0);
            for (std::size_t ac = 0; ac < coarse_a.points[i].size(); ++ac) {
                const Real p = src.probs[i][ac];
                if (p == 0.0) continue;
                dst.probs[i][nearest_action(fine_a, i, coarse_a.points[i][ac])] += p;
            }
        }
        lifted.states[jf] = std::move(dst);
    }
    return lifted;
}

EpsCertificate certify_epsilon(const ContinuousGame& game, const StateNet& snet,
                               const ActionNet& anet, const ExtendedPolicyProfile& profile,
                               int refine, Real tol, const CertifyOptions& opts) {
    if (refine < 2) throw std::invalid_argument("certify_epsilon: refine must be >= 2");
    (void)tol;
    const auto t0 = Clock::now();

    EpsCertificate cert;
    cert.delta = snet.delta;
    cert.refine = refine;
    cert.note = "eps certified against the refined finite model, not the continuous best "
                "response; sup-norms taken over refined-grid representatives";

    const StateNet fine = build_state_net(snet.space, snet.delta / refine, snet.quad_spec);
    const ActionNet fine_a = refine_action_net(anet, game.action_spaces, refine);
    cert.refined_states = fine.size();

    BuildOptions bopts;
    bopts.max_tensor_entries = opts.max_tensor_entries;
    bopts.threads = opts.threads;
    FiniteGame gfine;
    try {
        gfine = build_finite_game(game, fine, fine_a, bopts);
    } catch (const ResourceError& e) {
        throw ResourceError(std::string(e.what()) + "; try a smaller refine");
    }
    cert.quad_defect = gfine.provenance.max_row_defect;
    cert.build_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    const int N = game.num_players;
    cert.eps.assign(N, 0.0);

    if (!profile.is_markov) {
        const Real beta = game.horizon.beta;
        const StationaryPolicyProfile lifted =
            lift_profile_to_net(profile.stationary, snet, anet, fine, fine_a);
        const auto vals = policy_evaluation(gfine, lifted, beta);
        for (int i = 0; i < N; ++i) {
            const BestResponse br = best_response_dp(gfine, i, lifted, beta);
            Real eps = -std::numeric_limits<Real>::infinity();
            for (int x = 0; x < fine.size(); ++x) eps = std::max(eps, vals[i][x] - br.values[x]);
            cert.eps[i] = eps;
        }
        // Extended-operator residual of the lifted equilibrium values on the
        // coarse model.
        const FiniteGame gcoarse = build_finite_game(game, snet, anet, bopts);
        const auto coarse_vals = policy_evaluation(gcoarse, profile.stationary, beta);
        Real residual = 0.0;
        for (int i = 0; i < N; ++i) {
            const std::vector<Real> TJ =
                apply_extended_operator(game, snet, anet, profile, coarse_vals[i], i, beta);
            for (int j = 0; j < snet.size(); ++j)
                residual = std::max(residual, std::abs(TJ[j] - coarse_vals[i][j]));
        }
        cert.operator_residual = residual;
    } else {
        const int T = static_cast<int>(profile.markov.times.size());
        MarkovPolicyProfile lifted;
        lifted.times.resize(T);
        for (int t = 0; t < T; ++t)
            lifted.times[t] =
                lift_profile_to_net(profile.markov.times[t], snet, anet, fine, fine_a);
        const auto vals = policy_evaluation_finite(gfine, lifted, T);
        for (int i = 0; i < N; ++i) {
            const BestResponse br = best_response_dp_finite(gfine, i, lifted, T);
            Real eps = -std::numeric_limits<Real>::infinity();
            for (int t = 0; t < T; ++t)
                for (int x = 0; x < fine.size(); ++x)
                    eps = std::max(eps, vals[t][i][x] - br.values_by_time[t][x]);
            cert.eps[i] = eps;
        }
        const FiniteGame gcoarse = build_finite_game(game, snet, anet, bopts);
        const auto coarse_vals = policy_evaluation_finite(gcoarse, profile.markov, T);
        Real residual = 0.0;
        for (int i = 0; i < N; ++i) {
            std::vector<Real> next(snet.size(), 0.0);
            for (int t = T - 1; t >= 0; --t) {
                const std::vector<Real> TJ =
                    apply_extended_operator_t(game, snet, anet, profile, next, i, t);
                for (int j = 0; j < snet.size(); ++j)
                    residual = std::max(residual, std::abs(TJ[j] - coarse_vals[t][i][j]));
                next = coarse_vals[t][i];
            }
        }
        cert.operator_residual = residual;
    }

    cert.omega_hat =
        estimate_tv_modulus(game, snet, 2.0 * snet.delta, opts.omega_samples, opts.seed);
    cert.certify_seconds = seconds_since(t1);
    return cert;
}

} // namespace mgq
