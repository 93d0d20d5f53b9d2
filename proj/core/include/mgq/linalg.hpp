#pragma once

#include "mgq/common.hpp"

namespace mgq {

/// Dense row-major matrix, just enough for the solvers in this library.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Real> data;

    Matrix() = default;
    Matrix(int r, int c, Real fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}
    Real& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    Real at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns false if a pivot falls below `pivot_tol` (singular system).
bool solve_linear_system(Matrix A, std::vector<Real> b, std::vector<Real>& x,
                         Real pivot_tol = 1e-11);

/// Gaussian elimination without pivoting, stable for strictly row diagonally
/// dominant systems such as I - beta * P with P substochastic. Keeping the
/// elimination order fixed makes solutions of block-extended systems agree
/// bitwise on the unreachable-extension block.
bool solve_linear_system_dominant(Matrix A, std::vector<Real> b, std::vector<Real>& x);

/// Result of the primal simplex on: maximize c^T x s.t. A x <= b, x >= 0,
/// with b >= 0 (slack basis start). `dual` holds the optimal dual values,
/// one per constraint.
struct LpResult {
    bool optimal = false;
    Real objective = 0.0;
    std::vector<Real> x;
    std::vector<Real> dual;
};

/// Dense tableau simplex with Bland's anti-cycling rule throughout.
LpResult simplex_maximize(const std::vector<Real>& c, const Matrix& A, const std::vector<Real>& b);

} // namespace mgq
