#pragma once

#include <functional>

#include "mgq/common.hpp"
#include "mgq/geometry.hpp"

namespace mgq {

enum class QuadScheme {
    midpoint_grid,        ///< tensor grid of subcell midpoints, weight = subcell volume
    gauss_legendre_tensor ///< tensor Gauss-Legendre, mapped per dimension
};

struct QuadratureSpec {
    QuadScheme scheme = QuadScheme::midpoint_grid;
    int resolution = 8; ///< points per dimension

    bool operator==(const QuadratureSpec&) const = default;
};

/// Nodes and nonnegative weights over a box region; weights sum to its volume.
struct Quadrature {
    std::vector<Point> nodes;
    std::vector<Real> weights;
    QuadScheme scheme = QuadScheme::midpoint_grid;
    int resolution = 0;

    std::size_t size() const { return nodes.size(); }

    Real total_weight() const {
        Real s = 0.0;
        for (Real w : weights) s += w;
        return s;
    }

    Real integrate(const std::function<Real(const Point&)>& f) const {
        Real s = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
        return s;
    }
};

Quadrature make_quadrature(const Box& region, const QuadratureSpec& spec);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre_rule(int n, std::vector<Real>& nodes, std::vector<Real>& weights);

} // namespace mgq
