#include "mgq/linalg.hpp"

#include <cmath>

namespace mgq {

bool solve_linear_system(Matrix A, std::vector<Real> b, std::vector<Real>& x, Real pivot_tol) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_linear_system: shape mismatch");

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A.at(r, col)) > std::abs(A.at(pivot, col))) pivot = r;
        if (std::abs(A.at(pivot, col)) < pivot_tol) return false;
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(A.at(pivot, c), A.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        const Real inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Real f = A.at(r, col) * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A.at(r, c) -= f * A.at(col, c);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        Real s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A.at(r, c) * x[c];
        x[r] = s / A.at(r, r);
    }
    return true;
}

bool solve_linear_system_dominant(Matrix A, std::vector<Real> b, std::vector<Real>& x) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_linear_system_dominant: shape mismatch");
    for (int col = 0; col < n; ++col) {
        const Real pivot = A.at(col, col);
        if (std::abs(pivot) < 1e-13) return false;
        const Real inv = 1.0 / pivot;
        for (int r = col + 1; r < n; ++r) {
            const Real f = A.at(r, col) * inv;
            if (f == 0.0) continue;
            for (int c2 = col; c2 < n; ++c2) A.at(r, c2) -= f * A.at(col, c2);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        Real s = b[r];
        for (int c2 = r + 1; c2 < n; ++c2) s -= A.at(r, c2) * x[c2];
        x[r] = s / A.at(r, r);
    }
    return true;
}

LpResult simplex_maximize(const std::vector<Real>& c, const Matrix& A,
                          const std::vector<Real>& b) {
    const int m = A.rows;
    const int n = A.cols;
    if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != m)
        throw std::invalid_argument("simplex_maximize: shape mismatch");
    for (Real bi : b)
        if (bi < 0.0) throw std::invalid_argument("simplex_maximize: b must be >= 0");

    // Tableau: m rows of [A | I | b], plus the objective row [-c | 0 | 0].
    const int width = n + m + 1;
    std::vector<Real> tab(static_cast<std::size_t>(m + 1) * width, 0.0);
    auto at = [&](int r, int col) -> Real& { return tab[static_cast<std::size_t>(r) * width + col]; };
    for (int r = 0; r < m; ++r) {
        for (int col = 0; col < n; ++col) at(r, col) = A.at(r, col);
        at(r, n + r) = 1.0;
        at(r, n + m) = b[r];
    }
    for (int col = 0; col < n; ++col) at(m, col) = -c[col];

    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = n + r;

    const Real eps = 1e-11;
    const long max_pivots = 2000L * (m + n) * (m + n) + 10000;
    LpResult res;
    for (long iter = 0; iter < max_pivots; ++iter) {
        // Bland: entering = smallest column index with negative objective coefficient.
        int enter = -1;
        for (int col = 0; col < n + m; ++col)
            if (at(m, col) < -eps) {
                enter = col;
                break;
            }
        if (enter < 0) break; // optimal

        // Ratio test; ties resolved toward the smallest basis variable (Bland).
        int leave = -1;
        Real best_ratio = 0.0;
        for (int r = 0; r < m; ++r) {
            const Real a = at(r, enter);
            if (a <= eps) continue;
            const Real ratio = at(r, n + m) / a;
            if (leave < 0 || ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return res; // unbounded; res.optimal stays false

        const Real pivot = at(leave, enter);
        for (int col = 0; col <= n + m; ++col) at(leave, col) /= pivot;
        for (int r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const Real f = at(r, enter);
            if (f == 0.0) continue;
            for (int col = 0; col <= n + m; ++col) at(r, col) -= f * at(leave, col);
        }
        basis[leave] = enter;
    }

    res.optimal = true;
    res.objective = at(m, n + m);
    res.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (basis[r] < n) res.x[basis[r]] = at(r, n + m);
    res.dual.assign(m, 0.0);
    for (int r = 0; r < m; ++r) res.dual[r] = at(m, n + r);
    return res;
}

} // namespace mgq
