#include "mgq/quadrature.hpp"

#include <cmath>

namespace mgq {

void gauss_legendre_rule(int n, std::vector<Real>& nodes, std::vector<Real>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const Real pi = 3.14159265358979323846;
    // Newton iteration from the Chebyshev initial guess; symmetric pairs filled together.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real x = std::cos(pi * (i + 0.75) / (n + 0.5));
        Real dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        Real w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

namespace {

void tensor_product(const Box& region, const std::vector<std::vector<Real>>& pts_1d,
                    const std::vector<std::vector<Real>>& wts_1d, Quadrature& out) {
    const int dim = region.dimension();
    std::vector<int> idx(dim, 0);
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= pts_1d[d].size();
    out.nodes.reserve(total);
    out.weights.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p(dim);
        Real w = 1.0;
        for (int d = 0; d < dim; ++d) {
            p[d] = pts_1d[d][idx[d]];
            w *= wts_1d[d][idx[d]];
        }
        out.nodes.push_back(std::move(p));
        out.weights.push_back(w);
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < static_cast<int>(pts_1d[d].size())) break;
            idx[d] = 0;
        }
    }
}

} // namespace

Quadrature make_quadrature(const Box& region, const QuadratureSpec& spec) {
    if (!region.bounded())
        throw std::invalid_argument("make_quadrature: region must be bounded");
    if (spec.resolution < 1)
        throw std::invalid_argument("make_quadrature: resolution must be >= 1");

    const int dim = region.dimension();
    std::vector<std::vector<Real>> pts(dim), wts(dim);

    if (spec.scheme == QuadScheme::midpoint_grid) {
        for (int d = 0; d < dim; ++d) {
            const Real lo = region.lower[d], hi = region.upper[d];
            const Real h = (hi - lo) / spec.resolution;
            pts[d].resize(spec.resolution);
            wts[d].assign(spec.resolution, h);
            for (int i = 0; i < spec.resolution; ++i) pts[d][i] = lo + (i + 0.5) * h;
        }
    } else {
        std::vector<Real> gx, gw;
        gauss_legendre_rule(spec.resolution, gx, gw);
        for (int d = 0; d < dim; ++d) {
            const Real lo = region.lower[d], hi = region.upper[d];
            const Real half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            pts[d].resize(spec.resolution);
            wts[d].resize(spec.resolution);
            for (int i = 0; i < spec.resolution; ++i) {
                pts[d][i] = mid + half * gx[i];
                wts[d][i] = half * gw[i];
            }
        }
    }

    Quadrature out;
    out.scheme = spec.scheme;
    out.resolution = spec.resolution;
    tensor_product(region, pts, wts, out);
    return out;
}

} // namespace mgq
