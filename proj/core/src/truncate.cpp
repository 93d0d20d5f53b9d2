#include "mgq/truncate.hpp"

#include <chrono>
#include <cmath>

#include "mgq/rng.hpp"

namespace mgq {

namespace {

Box ladder_box(const ContinuousGame& game, const LadderConfig& cfg, int n) {
    const int dim = game.state_space.dimension();
    Point center = cfg.center;
    if (center.empty()) center.assign(dim, 0.0);
    if (static_cast<int>(center.size()) != dim)
        throw std::invalid_argument("build_truncation: center dimension mismatch");
    const Real r = cfg.radius0 + cfg.growth * n;
    Point lo(dim), hi(dim);
    for (int d = 0; d < dim; ++d) {
        lo[d] = std::max(center[d] - r, game.state_space.lower[d]);
        hi[d] = std::min(center[d] + r, game.state_space.upper[d]);
        if (!(lo[d] < hi[d]))
            throw std::invalid_argument("build_truncation: degenerate K_n box");
    }
    return Box(std::move(lo), std::move(hi));
}

/// Disjoint boxes covering outer \ inner, peeling one dimension at a time.
std::vector<Box> annulus_boxes(const Box& inner, const Box& outer) {
    const int dim = inner.dimension();
    std::vector<Box> out;
    for (int d = 0; d < dim; ++d) {
        for (int side = 0; side < 2; ++side) {
            Point lo(dim), hi(dim);
            bool degenerate = false;
            for (int e = 0; e < dim; ++e) {
                if (e < d) {
                    lo[e] = inner.lower[e];
                    hi[e] = inner.upper[e];
                } else if (e > d) {
                    lo[e] = outer.lower[e];
                    hi[e] = outer.upper[e];
                } else if (side == 0) {
                    lo[e] = outer.lower[e];
                    hi[e] = inner.lower[e];
                } else {
                    lo[e] = inner.upper[e];
                    hi[e] = outer.upper[e];
                }
                if (!(lo[e] < hi[e])) degenerate = true;
            }
            if (!degenerate) out.emplace_back(std::move(lo), std::move(hi));
        }
    }
    return out;
}

} // namespace

Truncation build_truncation(const ContinuousGame& game, int n, const LadderConfig& cfg) {
    if (n < 1) throw std::invalid_argument("build_truncation: n must be >= 1");
    if (!(cfg.growth > 0.0))
        throw std::invalid_argument("build_truncation: ladder growth must be > 0");

    Truncation t;
    t.n = n;
    t.K = ladder_box(game, cfg, n);
    t.outer = ladder_box(game, cfg, n + 1);
    if (!t.outer.contains_in_interior(t.K))
        throw std::invalid_argument("build_truncation: K_n is not interior to K_{n+1}");

    Real total = 0.0;
    for (const Box& piece : annulus_boxes(t.K, t.outer)) {
        const Quadrature q = make_quadrature(piece, cfg.annulus_quad);
        for (std::size_t i = 0; i < q.size(); ++i) {
            t.nu.nodes.push_back(q.nodes[i]);
            t.nu.weights.push_back(q.weights[i]);
            total += q.weights[i];
        }
    }
    if (t.nu.nodes.empty())
        throw std::invalid_argument("build_truncation: empty annulus (state space too small?)");
    for (Real& w : t.nu.weights) w /= total; // nu_n is a probability measure
    t.nu.scheme = cfg.annulus_quad.scheme;
    t.nu.resolution = cfg.annulus_quad.resolution;
    return t;
}

TruncatedGame build_truncated_game(const ContinuousGame& game, const Truncation& trunc) {
    if (trunc.K.dimension() != game.state_space.dimension())
        throw std::invalid_argument("build_truncated_game: truncation does not match the game");
    return TruncatedGame{game, trunc};
}

namespace {

/// Raw masses into the K_n cells from one source point (pseudo-state mass is
/// the exact complement).
void truncated_masses(const TruncatedGame& tg, const StateNet& snet, const Point& x,
                      const JointAction& a, std::vector<Real>& out) {
    detail::pushforward_row(tg.base, snet, x, a, out);
}

void build_truncated_row(const TruncatedGame& tg, const StateNet& snet, const ActionNet& anet,
                         const JointIndexer& jix, int state, FiniteGame& fg) {
    const int k = snet.size();
    const int ks = k + 1;
    const long J = jix.total;
    const bool pseudo = state == k;
    const Quadrature& quad = pseudo ? tg.trunc.nu : snet.cell_quadrature[state];
    const std::size_t nq = quad.size();

    std::vector<int> aidx;
    std::vector<Real> node_costs(nq);
    std::vector<Real> row0(k), rowq(k), acc(k);
    for (long joint = 0; joint < J; ++joint) {
        jix.decode(joint, aidx);
        const JointAction a = detail::joint_action_points(anet, aidx);

        for (int i = 0; i < tg.base.num_players; ++i) {
            for (std::size_t q = 0; q < nq; ++q)
                node_costs[q] = tg.base.cost_fns[i](quad.nodes[q], a);
            Real c = detail::anchored_average(node_costs, quad);
            c = std::min(std::max(c, -tg.base.cost_bound), tg.base.cost_bound);
            fg.costs[i][static_cast<long>(state) * J + joint] = c;
        }

        truncated_masses(tg, snet, quad.nodes[0], a, row0);
        std::fill(acc.begin(), acc.end(), 0.0);
        Real total_w = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            total_w += quad.weights[q];
            if (q == 0) continue;
            truncated_masses(tg, snet, quad.nodes[q], a, rowq);
            for (int l = 0; l < k; ++l) acc[l] += quad.weights[q] * (rowq[l] - row0[l]);
        }
        std::vector<Real> row(ks, 0.0);
        Real in_mass = 0.0;
        for (int l = 0; l < k; ++l) {
            row[l] = std::max(row0[l] + acc[l] / total_w, 0.0);
            in_mass += row[l];
        }
        row[k] = std::max(1.0 - in_mass, 0.0); // mass routed to the pseudo-state
        normalize_row(row);
        std::copy(row.begin(), row.end(),
                  fg.transitions.begin() + (static_cast<long>(state) * J + joint) * ks);
    }
}

} // namespace

FiniteGame build_truncated_finite_game(const TruncatedGame& tg, const StateNet& snet,
                                       const ActionNet& anet, const BuildOptions& opts) {
    if (chebyshev(snet.space.lower, tg.trunc.K.lower) > 1e-12 ||
        chebyshev(snet.space.upper, tg.trunc.K.upper) > 1e-12)
        throw std::domain_error("build_truncated_finite_game: net does not cover K_n");

    std::vector<int> counts;
    for (const auto& pts : anet.points) counts.push_back(static_cast<int>(pts.size()));
    JointIndexer jix(std::move(counts));
    const int ks = snet.size() + 1;
    const long entries = static_cast<long>(ks) * jix.total * ks;
    if (entries > opts.max_tensor_entries)
        throw ResourceError("build_truncated_finite_game: transition tensor needs " +
                            std::to_string(entries) + " entries, above the cap of " +
                            std::to_string(opts.max_tensor_entries));

    FiniteGame fg;
    fg.num_states = ks;
    fg.action_counts = jix.counts;
    fg.costs.assign(tg.base.num_players, std::vector<Real>(static_cast<long>(ks) * jix.total, 0.0));
    fg.transitions.assign(entries, 0.0);
    fg.horizon = tg.base.horizon;
    fg.provenance.source_game = tg.base.id + "+K" + std::to_string(tg.trunc.n);
    fg.provenance.delta = snet.delta;
    fg.provenance.action_delta = anet.delta.empty() ? 0.0 : anet.delta.front();
    fg.provenance.quad_resolution = snet.quad_spec.resolution;

    for (int s = 0; s < ks; ++s) build_truncated_row(tg, snet, anet, jix, s, fg);
    fg.provenance.max_row_defect = 0.0; // rows sum to 1 by complement construction
    return fg;
}

Real max_pseudo_state_mass(const FiniteGame& fg) {
    const int k = fg.num_states;
    const long J = fg.joint_count();
    Real worst = 0.0;
    for (int x = 0; x < k; ++x)
        for (long joint = 0; joint < J; ++joint)
            worst = std::max(worst, fg.row(x, joint)[k - 1]);
    return worst;
}

TruncatedLift lift_from_truncation(const SolveReport& report, const TruncatedGame& tg,
                                   const StateNet& snet) {
    if (static_cast<int>(report.stationary.states.size()) != snet.size() + 1)
        throw std::domain_error("lift_from_truncation: report is not for this truncated model");
    TruncatedLift lift;
    lift.snet = snet;
    lift.K = tg.trunc.K;
    lift.values = report.values.values;
    lift.profile = report.stationary;
    return lift;
}

Real estimate_tv_modulus_truncated(const TruncatedGame& tg, const StateNet& snet, Real radius,
                                   int samples, std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("estimate_tv_modulus_truncated: radius > 0");
    Rng rng(seed);
    const ContinuousGame& game = tg.base;
    Real worst = 0.0;
    std::vector<Real> m1, m2;
    for (int s = 0; s < samples; ++s) {
        const Point x = rng.uniform_point(snet.space);
        JointAction a(game.num_players);
        for (int i = 0; i < game.num_players; ++i) {
            const ActionSpace& sp = game.action_spaces[i];
            a[i] = sp.is_finite() ? sp.points[rng.uniform_index(sp.points.size())]
                                  : rng.uniform_point(sp.box);
        }
        const Real rx = rng.uniform(0.0, radius);
        Point y(x);
        for (std::size_t d = 0; d < y.size(); ++d) y[d] += rng.uniform(-rx, rx);
        y = snet.space.clamp(std::move(y));
        JointAction b = a; // finite zoo actions; spacing exceeds typical radii

        auto full_row = [&](const Point& px, const JointAction& pa, std::vector<Real>& row) {
            detail::pushforward_row(game, snet, px, pa, row);
            Real in = 0.0;
            for (Real v : row) in += v;
            row.push_back(std::max(1.0 - in, 0.0));
            normalize_row(row);
        };
        full_row(x, a, m1);
        full_row(y, b, m2);
        Real tv = 0.0;
        for (std::size_t l = 0; l < m1.size(); ++l) tv += std::abs(m1[l] - m2[l]);
        worst = std::max(worst, tv);
    }
    return worst;
}

EpsCertificate certify_epsilon_truncated(const TruncatedGame& tg, const StateNet& snet,
                                         const ActionNet& anet,
                                         const StationaryPolicyProfile& profile, int refine,
                                         Real tol, const CertifyOptions& opts) {
    if (refine < 2) throw std::invalid_argument("certify_epsilon_truncated: refine must be >= 2");
    (void)tol;
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    EpsCertificate cert;
    cert.delta = snet.delta;
    cert.refine = refine;
    cert.note = "truncated model: pseudo-state kept unrefined; eps certified against the "
                "refined finite model";

    const StateNet fine = build_state_net(snet.space, snet.delta / refine, snet.quad_spec);
    const ActionNet fine_a = refine_action_net(anet, tg.base.action_spaces, refine);
    cert.refined_states = fine.size() + 1;

    BuildOptions bopts;
    bopts.max_tensor_entries = opts.max_tensor_entries;
    bopts.threads = opts.threads;
    const FiniteGame gfine = build_truncated_finite_game(tg, fine, fine_a, bopts);
    cert.build_seconds = std::chrono::duration<Real>(Clock::now() - t0).count();

    // Lift: refined cells inherit their coarse cell's mixes; pseudo-state maps
    // to the coarse pseudo-state entry.
    const auto t1 = Clock::now();
    const int N = tg.base.num_players;
    StationaryPolicyProfile coarse_cells;
    coarse_cells.states.assign(profile.states.begin(), profile.states.end() - 1);
    StationaryPolicyProfile lifted =
        lift_profile_to_net(coarse_cells, snet, anet, fine, fine_a);
    {
        MixedProfile pseudo;
        pseudo.probs.resize(N);
        const MixedProfile& src = profile.states.back();
        for (int i = 0; i < N; ++i) {
            pseudo.probs[i].assign(fine_a.points[i].size(), 0.0);
            for (std::size_t ac = 0; ac < anet.points[i].size(); ++ac) {
                const Real p = src.probs[i][ac];
                if (p == 0.0) continue;
                pseudo.probs[i][nearest_action(fine_a, i, anet.points[i][ac])] += p;
            }
        }
        lifted.states.push_back(std::move(pseudo));
    }

    const Real beta = tg.base.horizon.beta;
    const auto vals = policy_evaluation(gfine, lifted, beta);
    cert.eps.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const BestResponse br = best_response_dp(gfine, i, lifted, beta);
        Real eps = -std::numeric_limits<Real>::infinity();
        for (int x = 0; x < gfine.num_states; ++x) eps = std::max(eps, vals[i][x] - br.values[x]);
        cert.eps[i] = eps;
    }

    // Optimality-equation residual on the coarse truncated model.
    const FiniteGame gcoarse = build_truncated_finite_game(tg, snet, anet, bopts);
    const auto coarse_vals = policy_evaluation(gcoarse, profile, beta);
    Real residual = 0.0;
    for (int i = 0; i < N; ++i) {
        const std::vector<Real> TJ =
            best_response_operator(gcoarse, i, profile, beta, coarse_vals[i]);
        for (int x = 0; x < gcoarse.num_states; ++x)
            residual = std::max(residual, std::abs(TJ[x] - coarse_vals[i][x]));
    }
    cert.operator_residual = residual;
    cert.omega_hat =
        estimate_tv_modulus_truncated(tg, snet, 2.0 * snet.delta, opts.omega_samples, opts.seed);
    cert.certify_seconds = std::chrono::duration<Real>(Clock::now() - t1).count();
    return cert;
}

} // namespace mgq
