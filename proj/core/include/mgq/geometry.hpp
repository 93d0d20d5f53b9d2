#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgq/common.hpp"

namespace mgq {

/// Axis-aligned box [lower_1,upper_1] x ... x [lower_d,upper_d].
/// Distances on boxes are always the max-coordinate (Chebyshev) metric,
/// so a uniform grid with cell side 2*delta is exactly a delta-net.
struct Box {
    Point lower;
    Point upper;

    Box() = default;
    Box(Point lo, Point up) : lower(std::move(lo)), upper(std::move(up)) {
        if (lower.size() != upper.size() || lower.empty())
            throw std::invalid_argument("Box: dimension mismatch or empty");
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (!(lower[d] < upper[d]))
                throw std::invalid_argument("Box: lower must be < upper in every dimension");
    }

    static Box interval(Real lo, Real hi) { return Box(Point{lo}, Point{hi}); }

    int dimension() const { return static_cast<int>(lower.size()); }

    bool bounded() const {
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) return false;
        return true;
    }

    Real volume() const {
        Real v = 1.0;
        for (std::size_t d = 0; d < lower.size(); ++d) v *= upper[d] - lower[d];
        return v;
    }

    bool contains(const Point& x, Real tol = 0.0) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (x[d] < lower[d] - tol || x[d] > upper[d] + tol) return false;
        return true;
    }

    bool contains_box(const Box& inner, Real tol = 1e-12) const {
        if (inner.dimension() != dimension()) return false;
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (inner.lower[d] < lower[d] - tol || inner.upper[d] > upper[d] + tol) return false;
        return true;
    }

    /// Strict containment in the interior (used for truncation ladders).
    bool contains_in_interior(const Box& inner) const {
        if (inner.dimension() != dimension()) return false;
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (!(lower[d] < inner.lower[d] && inner.upper[d] < upper[d])) return false;
        return true;
    }

    Point center() const {
        Point c(lower.size());
        for (std::size_t d = 0; d < lower.size(); ++d) c[d] = 0.5 * (lower[d] + upper[d]);
        return c;
    }

    Point clamp(Point x) const {
        for (std::size_t d = 0; d < lower.size(); ++d)
            x[d] = std::min(upper[d], std::max(lower[d], x[d]));
        return x;
    }
};

/// Chebyshev (max-coordinate) distance.
inline Real chebyshev(const Point& a, const Point& b) {
    Real m = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) m = std::max(m, std::abs(a[d] - b[d]));
    return m;
}

} // namespace mgq
