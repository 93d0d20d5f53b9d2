#include "mgq/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mgq/rng.hpp"

namespace mgq {

StateNet build_state_net(const Box& space, Real delta, const QuadratureSpec& quad,
                         long max_states) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_state_net: delta must be > 0");
    if (!space.bounded())
        throw std::invalid_argument("build_state_net: state space must be bounded");

    const int dim = space.dimension();
    StateNet net;
    net.delta = delta;
    net.space = space;
    net.quad_spec = quad;
    net.cells_per_dim.resize(dim);
    net.side.resize(dim);

    long k = 1;
    for (int d = 0; d < dim; ++d) {
        const Real len = space.upper[d] - space.lower[d];
        const int n = std::max(1, static_cast<int>(std::ceil(len / (2.0 * delta) - 1e-12)));
        net.cells_per_dim[d] = n;
        net.side[d] = len / n;
        k *= n;
        if (k > max_states)
            throw ResourceError("build_state_net: " + std::to_string(k) +
                                "+ states exceeds the configured cap of " +
                                std::to_string(max_states));
    }

    net.points.reserve(k);
    net.cells.reserve(k);
    net.cell_quadrature.reserve(k);
    std::vector<int> idx(dim, 0);
    for (long flat = 0; flat < k; ++flat) {
        Point center(dim), lo(dim), hi(dim);
        for (int d = 0; d < dim; ++d) {
            lo[d] = space.lower[d] + idx[d] * net.side[d];
            hi[d] = (idx[d] + 1 == net.cells_per_dim[d]) ? space.upper[d]
                                                         : space.lower[d] + (idx[d] + 1) * net.side[d];
            center[d] = space.lower[d] + (idx[d] + 0.5) * net.side[d];
        }
        Box cell(std::move(lo), std::move(hi));
        net.cell_quadrature.push_back(make_quadrature(cell, quad));
        net.cells.push_back(std::move(cell));
        net.points.push_back(std::move(center));
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < net.cells_per_dim[d]) break;
            idx[d] = 0;
        }
    }
    return net;
}

int nearest_state(const StateNet& net, const Point& x) {
    if (!net.space.contains(x, 1e-9)) throw std::domain_error("nearest_state: point outside net");
    const int dim = net.space.dimension();

    // Chebyshev distance to the grid factorizes: the minimum equals
    // max_d (per-dim nearest distance), and the smallest flattened argmin is
    // the lexicographically smallest per-dim index within that distance.
    Real m = 0.0;
    std::vector<int> base(dim);
    for (int d = 0; d < dim; ++d) {
        const int n = net.cells_per_dim[d];
        int i0 = static_cast<int>(std::floor((x[d] - net.space.lower[d]) / net.side[d]));
        i0 = std::min(std::max(i0, 0), n - 1);
        base[d] = i0;
        Real md = std::numeric_limits<Real>::infinity();
        for (int j = std::max(0, i0 - 1); j <= std::min(n - 1, i0 + 1); ++j) {
            const Real c = net.space.lower[d] + (j + 0.5) * net.side[d];
            md = std::min(md, std::abs(x[d] - c));
        }
        m = std::max(m, md);
    }

    long flat = 0;
    for (int d = 0; d < dim; ++d) {
        const int n = net.cells_per_dim[d];
        const int reach = static_cast<int>(std::ceil(m / net.side[d])) + 1;
        int chosen = -1;
        for (int j = std::max(0, base[d] - reach); j <= std::min(n - 1, base[d] + reach); ++j) {
            const Real c = net.space.lower[d] + (j + 0.5) * net.side[d];
            if (std::abs(x[d] - c) <= m) {
                chosen = j;
                break;
            }
        }
        flat = flat * n + chosen;
    }
    return static_cast<int>(flat);
}

ActionNet build_action_net(const std::vector<ActionSpace>& spaces, Real delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_action_net: delta must be > 0");
    ActionNet net;
    for (const ActionSpace& sp : spaces) {
        if (sp.is_finite()) {
            net.delta.push_back(delta);
            net.points.push_back(sp.points);
            continue;
        }
        const Box& box = sp.box;
        const int dim = box.dimension();
        std::vector<int> counts(dim);
        std::vector<Real> side(dim);
        long total = 1;
        for (int d = 0; d < dim; ++d) {
            const Real len = box.upper[d] - box.lower[d];
            counts[d] = std::max(1, static_cast<int>(std::ceil(len / (2.0 * delta) - 1e-12)));
            side[d] = len / counts[d];
            total *= counts[d];
        }
        std::vector<Point> pts;
        pts.reserve(total);
        std::vector<int> idx(dim, 0);
        for (long flat = 0; flat < total; ++flat) {
            Point p(dim);
            for (int d = 0; d < dim; ++d) p[d] = box.lower[d] + (idx[d] + 0.5) * side[d];
            pts.push_back(std::move(p));
            for (int d = dim - 1; d >= 0; --d) {
                if (++idx[d] < counts[d]) break;
                idx[d] = 0;
            }
        }
        net.delta.push_back(delta);
        net.points.push_back(std::move(pts));
    }
    return net;
}

ActionNet refine_action_net(const ActionNet& coarse, const std::vector<ActionSpace>& spaces,
                            int refine) {
    if (refine < 1) throw std::invalid_argument("refine_action_net: refine must be >= 1");
    ActionNet fine;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (spaces[i].is_finite()) {
            fine.delta.push_back(coarse.delta[i]);
            fine.points.push_back(coarse.points[i]);
            continue;
        }
        const Real d = coarse.delta[i] / refine;
        ActionNet grid = build_action_net({spaces[i]}, d);
        std::vector<Point> pts = std::move(grid.points[0]);
        for (const Point& cp : coarse.points[i]) {
            bool present = false;
            for (const Point& p : pts) present = present || chebyshev(p, cp) <= 1e-12;
            if (!present) pts.push_back(cp);
        }
        fine.delta.push_back(d);
        fine.points.push_back(std::move(pts));
    }
    return fine;
}

int nearest_action(const ActionNet& net, int player, const Point& a) {
    if (player < 0 || player >= static_cast<int>(net.points.size()))
        throw std::domain_error("nearest_action: player index out of range");
    const std::vector<Point>& pts = net.points[player];
    int arg = 0;
    Real best = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const Real d = chebyshev(pts[j], a);
        if (d < best) {
            best = d;
            arg = static_cast<int>(j);
        }
    }
    return arg;
}

Real normalize_row(std::vector<Real>& row) {
    Real sum = 0.0;
    for (Real v : row) sum += v;
    if (!(sum > 0.0)) throw QuadratureError("normalize_row: row has no mass");
    for (Real& v : row) v /= sum;

    Real t = 0.0;
    for (Real v : row) t += v;
    if (t == 1.0) return sum;

    // Exact-sum repair: replace a trailing entry by the complement of its
    // prefix sum, so the sequential total lands on 1.0 bit-exactly. Walking
    // backwards keeps every entry nonnegative; displaced entries are within a
    // few ulp of zero.
    for (int last = static_cast<int>(row.size()) - 1; last >= 0; --last) {
        Real prefix = 0.0;
        for (int i = 0; i < last; ++i) prefix += row[i];
        const Real cand = 1.0 - prefix;
        if (cand >= 0.0) {
            row[last] = cand;
            break;
        }
        row[last] = 0.0;
    }
    return sum;
}

namespace detail {

Real anchored_average(const std::vector<Real>& values, const Quadrature& quad) {
    const Real v0 = values[0];
    Real acc = 0.0, total = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
        acc += quad.weights[q] * (values[q] - v0);
        total += quad.weights[q];
    }
    return v0 + acc / total;
}

void pushforward_row(const ContinuousGame& game, const StateNet& snet, const Point& x,
                     const JointAction& a, std::vector<Real>& out) {
    const int k = snet.size();
    out.assign(k, 0.0);
    for (int l = 0; l < k; ++l) {
        const Real m = eval_kernel_mass(game, snet.cells[l], x, a, snet.cell_quadrature[l]);
        out[l] = std::max(m, 0.0);
    }
}

JointAction joint_action_points(const ActionNet& anet, const std::vector<int>& idx) {
    JointAction a(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) a[i] = anet.points[i][idx[i]];
    return a;
}

} // namespace detail

namespace {

// One state row of the finite model: cell-averaged costs and the
// renormalized cell-averaged pushforward kernel.
void build_state_row(const ContinuousGame& game, const StateNet& snet, const ActionNet& anet,
                     const JointIndexer& jix, int j, FiniteGame& fg, Real& max_defect) {
    const int k = snet.size();
    const long J = jix.total;
    const Quadrature& quad = snet.cell_quadrature[j];
    const std::size_t nq = quad.size();

    std::vector<int> aidx;
    std::vector<Real> node_costs(nq);
    std::vector<Real> row0(k), rowq(k), acc(k);

    for (long joint = 0; joint < J; ++joint) {
        jix.decode(joint, aidx);
        const JointAction a = detail::joint_action_points(anet, aidx);

        for (int i = 0; i < game.num_players; ++i) {
            for (std::size_t q = 0; q < nq; ++q)
                node_costs[q] = game.cost_fns[i](quad.nodes[q], a);
            Real c = detail::anchored_average(node_costs, quad);
            c = std::min(std::max(c, -game.cost_bound), game.cost_bound);
            fg.costs[i][j * J + joint] = c;
        }

        detail::pushforward_row(game, snet, quad.nodes[0], a, row0);
        std::fill(acc.begin(), acc.end(), 0.0);
        Real total_w = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            total_w += quad.weights[q];
            if (q == 0) continue;
            detail::pushforward_row(game, snet, quad.nodes[q], a, rowq);
            for (int l = 0; l < k; ++l) acc[l] += quad.weights[q] * (rowq[l] - row0[l]);
        }
        std::vector<Real> row(k);
        for (int l = 0; l < k; ++l) row[l] = std::max(row0[l] + acc[l] / total_w, 0.0);

        Real pre = 0.0;
        for (Real v : row) pre += v;
        if (pre < 0.5)
            throw QuadratureError("build_finite_game: transition row from state " +
                                  std::to_string(j) + " retains mass " + std::to_string(pre) +
                                  " < 0.5; quadrature resolution is too coarse");
        normalize_row(row);
        max_defect = std::max(max_defect, std::abs(pre - 1.0));
        std::copy(row.begin(), row.end(),
                  fg.transitions.begin() + (static_cast<long>(j) * J + joint) * k);
    }
}

} // namespace

FiniteGame build_finite_game(const ContinuousGame& game, const StateNet& snet,
                             const ActionNet& anet, const BuildOptions& opts) {
    if (static_cast<int>(anet.points.size()) != game.num_players)
        throw std::invalid_argument("build_finite_game: action net does not match the game");

    const int k = snet.size();
    JointIndexer jix(std::vector<int>{});
    {
        std::vector<int> counts;
        for (const auto& pts : anet.points) counts.push_back(static_cast<int>(pts.size()));
        jix = JointIndexer(std::move(counts));
    }
    const long J = jix.total;
    const long entries = static_cast<long>(k) * J * k;
    if (entries > opts.max_tensor_entries)
        throw ResourceError("build_finite_game: transition tensor needs " +
                            std::to_string(entries) + " entries, above the cap of " +
                            std::to_string(opts.max_tensor_entries));

    FiniteGame fg;
    fg.num_states = k;
    fg.action_counts = jix.counts;
    fg.costs.assign(game.num_players, std::vector<Real>(static_cast<long>(k) * J, 0.0));
    fg.transitions.assign(entries, 0.0);
    fg.horizon = game.horizon;
    fg.provenance.source_game = game.id;
    fg.provenance.delta = snet.delta;
    fg.provenance.action_delta = anet.delta.empty() ? 0.0 : anet.delta.front();
    fg.provenance.quad_resolution =
        snet.cell_quadrature.empty() ? 0 : snet.cell_quadrature.front().resolution;

    const int threads = std::max(1, opts.threads);
    if (threads == 1 || k == 1) {
        Real defect = 0.0;
        for (int j = 0; j < k; ++j) build_state_row(game, snet, anet, jix, j, fg, defect);
        fg.provenance.max_row_defect = defect;
        return fg;
    }

    // Rows are independent; each worker owns a stripe, so the result is
    // bit-identical to the serial build.
    std::vector<Real> defects(threads, 0.0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int j = t; j < k; j += threads)
                    build_state_row(game, snet, anet, jix, j, fg, defects[t]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    fg.provenance.max_row_defect = *std::max_element(defects.begin(), defects.end());
    return fg;
}

Real estimate_tv_modulus(const ContinuousGame& game, const StateNet& snet, Real radius,
                         int samples, std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("estimate_tv_modulus: radius must be > 0");
    if (samples < 1) throw std::invalid_argument("estimate_tv_modulus: samples must be >= 1");

    Rng rng(seed);
    Real worst = 0.0;
    std::vector<Real> row1, row2;
    for (int s = 0; s < samples; ++s) {
        const Point x = rng.uniform_point(snet.space);
        JointAction a(game.num_players);
        for (int i = 0; i < game.num_players; ++i) {
            const ActionSpace& sp = game.action_spaces[i];
            a[i] = sp.is_finite() ? sp.points[rng.uniform_index(sp.points.size())]
                                  : rng.uniform_point(sp.box);
        }

        const Real rx = rng.uniform(0.0, radius);
        const Real ra = radius - rx;
        Point y(x);
        for (std::size_t d = 0; d < y.size(); ++d) y[d] += rng.uniform(-rx, rx);
        y = snet.space.clamp(std::move(y));
        JointAction b = a;
        for (int i = 0; i < game.num_players; ++i) {
            const ActionSpace& sp = game.action_spaces[i];
            if (sp.is_finite()) {
                std::vector<int> near;
                for (std::size_t p = 0; p < sp.points.size(); ++p)
                    if (chebyshev(sp.points[p], a[i]) <= ra) near.push_back(static_cast<int>(p));
                b[i] = sp.points[near[rng.uniform_index(near.size())]];
            } else {
                for (std::size_t d = 0; d < b[i].size(); ++d)
                    b[i][d] += rng.uniform(-ra, ra);
                b[i] = sp.box.clamp(std::move(b[i]));
            }
        }

        detail::pushforward_row(game, snet, x, a, row1);
        detail::pushforward_row(game, snet, y, b, row2);
        normalize_row(row1);
        normalize_row(row2);
        Real tv = 0.0;
        for (std::size_t l = 0; l < row1.size(); ++l) tv += std::abs(row1[l] - row2[l]);
        worst = std::max(worst, tv);
    }
    return worst;
}

} // namespace mgq
