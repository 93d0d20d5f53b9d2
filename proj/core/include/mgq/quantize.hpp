#pragma once

#include "mgq/game.hpp"
#include "mgq/quadrature.hpp"

namespace mgq {

inline constexpr long kDefaultStateCap = 200000;
inline constexpr long kDefaultTensorCap = 2000000;

/// Uniform grid delta-net over a box: cell side <= 2*delta, representatives at
/// cell centers, per-cell quadrature realizing the weighting measure on the cell.
struct StateNet {
    Real delta = 0.0;
    Box space;
    QuadratureSpec quad_spec;
    std::vector<int> cells_per_dim;
    std::vector<Real> side;
    std::vector<Point> points;              // k cell centers, row-major over dims
    std::vector<Box> cells;                 // matching cell boxes
    std::vector<Quadrature> cell_quadrature;

    int size() const { return static_cast<int>(points.size()); }
};

StateNet build_state_net(const Box& space, Real delta,
                         const QuadratureSpec& quad = QuadratureSpec{},
                         long max_states = kDefaultStateCap);

/// Index of the nearest net point in the Chebyshev metric; ties broken toward
/// the smallest index. For the uniform grid this is the cell-membership map.
int nearest_state(const StateNet& net, const Point& x);

/// Per-player action nets: finite spaces keep their point lists, boxes get a
/// uniform grid net.
struct ActionNet {
    std::vector<Real> delta;
    std::vector<std::vector<Point>> points;

    int count(int player) const { return static_cast<int>(points[player].size()); }
};

ActionNet build_action_net(const std::vector<ActionSpace>& spaces, Real delta);

/// Net at delta/refine whose point set contains every coarse net point, so a
/// coarse profile lifts exactly while deviations range over a strictly richer
/// action set. Finite spaces are returned unchanged.
ActionNet refine_action_net(const ActionNet& coarse, const std::vector<ActionSpace>& spaces,
                            int refine);

int nearest_action(const ActionNet& net, int player, const Point& a);

/// Mixed-radix indexer over per-player action counts (row-major, player 0
/// most significant).
struct JointIndexer {
    std::vector<int> counts;
    long total = 1;

    explicit JointIndexer(std::vector<int> c) : counts(std::move(c)) {
        for (int m : counts) total *= m;
    }
    void decode(long joint, std::vector<int>& out) const {
        out.resize(counts.size());
        for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
            out[i] = static_cast<int>(joint % counts[i]);
            joint /= counts[i];
        }
    }
    long encode(const std::vector<int>& idx) const {
        long j = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) j = j * counts[i] + idx[i];
        return j;
    }
};

struct Provenance {
    std::string source_game;
    Real delta = 0.0;
    Real action_delta = 0.0;
    int quad_resolution = 0;
    Real max_row_defect = 0.0; // worst |row sum - 1| before renormalization
};

/// Finite game over net indices: cost tensors and a row-stochastic transition
/// tensor, both row-major.
struct FiniteGame {
    int num_states = 0;
    std::vector<int> action_counts;
    std::vector<std::vector<Real>> costs; // [player][state * J + joint]
    std::vector<Real> transitions;        // [state * J * k + joint * k + next]
    HorizonSpec horizon;
    Provenance provenance;

    int num_players() const { return static_cast<int>(action_counts.size()); }
    long joint_count() const {
        long j = 1;
        for (int m : action_counts) j *= m;
        return j;
    }
    Real cost(int player, int state, long joint) const {
        return costs[player][state * joint_count() + joint];
    }
    const Real* row(int state, long joint) const {
        return transitions.data() + (static_cast<long>(state) * joint_count() + joint) * num_states;
    }
};

/// Normalizes a nonnegative row in place so it sums to exactly 1.0; returns
/// the pre-normalization sum. Shared by the quantizer and the extended
/// operators so the two routes stay bit-compatible.
Real normalize_row(std::vector<Real>& row);

struct BuildOptions {
    long max_tensor_entries = kDefaultTensorCap;
    int threads = 1;
};

FiniteGame build_finite_game(const ContinuousGame& game, const StateNet& snet,
                             const ActionNet& anet, const BuildOptions& opts = BuildOptions{});

/// Sampled lower bound on the total-variation modulus of the quantized kernel
/// at the given input radius. Diagnostic only.
Real estimate_tv_modulus(const ContinuousGame& game, const StateNet& snet, Real radius,
                         int samples, std::uint64_t seed);

// Internals shared with the verify and truncate modules.
namespace detail {

/// Cell-averaged value with an anchored correction: exact (bitwise) when all
/// node values are equal, which keeps aligned piecewise-constant models lossless.
Real anchored_average(const std::vector<Real>& values, const Quadrature& quad);

/// Raw (unnormalized) quantized transition row from a single source point.
void pushforward_row(const ContinuousGame& game, const StateNet& snet, const Point& x,
                     const JointAction& a, std::vector<Real>& out);

JointAction joint_action_points(const ActionNet& anet, const std::vector<int>& idx);

} // namespace detail

} // namespace mgq
