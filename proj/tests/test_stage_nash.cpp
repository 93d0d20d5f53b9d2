#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mgq/stage_nash.hpp"
#include "test_support.hpp"

using namespace mgq;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<Real>> rows) {
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
    int r = 0;
    for (const auto& row : rows) {
        int c = 0;
        for (Real v : row) m.at(r, c++) = v;
        ++r;
    }
    return m;
}

Matrix random_matrix(std::uint64_t seed, int rows, int cols) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Real& v : m.data) v = 2.0 * rng.uniform() - 1.0;
    return m;
}

Matrix negate(const Matrix& m) {
    Matrix out = m;
    for (Real& v : out.data) v = -v;
    return out;
}

NormalFormGame game_from_bimatrix(const Matrix& A, const Matrix& B) {
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

TEST_SUITE("matrix games") {
    TEST_CASE("matching pennies has value 0 and uniform mixes") {
        const MatrixGameSolution s = matrix_game_value(from_rows({{1, -1}, {-1, 1}}));
        CHECK(std::abs(s.value) <= 1e-12);
        for (Real p : s.row_mix) CHECK(std::abs(p - 0.5) <= 1e-12);
        for (Real p : s.col_mix) CHECK(std::abs(p - 0.5) <= 1e-12);
    }

    TEST_CASE("pure saddle found by enumeration oracle") {
        const Matrix M = from_rows({{1, 3}, {2, 2}});
        // Oracle: (i,j) is a pure saddle iff M[i][j] = max over the row = min
        // over the column (row minimizes, column maximizes).
        Real saddle_value = 0.0;
        bool found = false;
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < M.cols; ++j) {
                bool row_ok = true, col_ok = true;
                for (int jj = 0; jj < M.cols; ++jj) row_ok = row_ok && M.at(i, j) >= M.at(i, jj);
                for (int ii = 0; ii < M.rows; ++ii) col_ok = col_ok && M.at(i, j) <= M.at(ii, j);
                if (row_ok && col_ok) {
                    saddle_value = M.at(i, j);
                    found = true;
                }
            }
        REQUIRE(found);
        CHECK(saddle_value == 2.0);
        const MatrixGameSolution s = matrix_game_value(M);
        CHECK(s.value == doctest::Approx(saddle_value).epsilon(1e-10));
    }

    TEST_CASE("payoff shift moves the value and keeps the mixes") {
        const Matrix M = random_matrix(21, 3, 4);
        Matrix shifted = M;
        for (Real& v : shifted.data) v += 2.5;
        const MatrixGameSolution a = matrix_game_value(M);
        const MatrixGameSolution b = matrix_game_value(shifted);
        CHECK(b.value == doctest::Approx(a.value + 2.5).epsilon(1e-9));
        for (int i = 0; i < M.rows; ++i) CHECK(b.row_mix[i] == doctest::Approx(a.row_mix[i]).epsilon(1e-8));
        for (int j = 0; j < M.cols; ++j) CHECK(b.col_mix[j] == doctest::Approx(a.col_mix[j]).epsilon(1e-8));
    }

    TEST_CASE("saddle property of the returned mixes") {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const Matrix M = random_matrix(1000 + seed, 2 + seed % 4, 2 + (seed / 2) % 4);
            const MatrixGameSolution s = matrix_game_value(M);
            for (int j = 0; j < M.cols; ++j) {
                Real col_payoff = 0.0;
                for (int i = 0; i < M.rows; ++i) col_payoff += s.row_mix[i] * M.at(i, j);
                CHECK(col_payoff <= s.value + 1e-9);
            }
            for (int i = 0; i < M.rows; ++i) {
                Real row_payoff = 0.0;
                for (int j = 0; j < M.cols; ++j) row_payoff += s.col_mix[j] * M.at(i, j);
                CHECK(row_payoff >= s.value - 1e-9);
            }
        }
    }

    TEST_CASE("non-finite entries are a domain error") {
        Matrix M = from_rows({{1, 2}, {3, 4}});
        M.at(0, 1) = std::numeric_limits<Real>::quiet_NaN();
        CHECK_THROWS_AS(matrix_game_value(M), std::domain_error);
    }
}

TEST_SUITE("bimatrix") {
    TEST_CASE("dominant strategies: prisoner's dilemma in costs") {
        const Matrix A = from_rows({{1, 3}, {0, 2}});
        Matrix B(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) B.at(i, j) = A.at(j, i);
        const StageSolution s = bimatrix_nash(A, B, 1e-9);
        CHECK(s.profile.probs[0][1] == doctest::Approx(1.0));
        CHECK(s.profile.probs[1][1] == doctest::Approx(1.0));
        CHECK(s.values[0] == doctest::Approx(2.0));
        CHECK(s.values[1] == doctest::Approx(2.0));
        CHECK(s.max_gap() <= 1e-9);
    }

    TEST_CASE("zero-sum pair reproduces the matrix game value") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Matrix A = random_matrix(3000 + seed, 3, 3);
            const StageSolution s = bimatrix_nash(A, negate(A), 1e-9);
            const MatrixGameSolution mg = matrix_game_value(A);
            CHECK(s.max_gap() <= 1e-9);
            CHECK(s.values[0] == doctest::Approx(mg.value).epsilon(1e-7));
            CHECK(std::abs(s.values[0] + s.values[1]) <= 1e-8);
        }
    }

    TEST_CASE("random instances: gaps verified by the deviation oracle") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Matrix A = random_matrix(4000 + seed, 3, 3);
            const Matrix B = random_matrix(5000 + seed, 3, 3);
            const StageSolution s = bimatrix_nash(A, B, 1e-8);
            const NormalFormGame g = game_from_bimatrix(A, B);
            for (int i = 0; i < 2; ++i) {
                const Real oracle = test::gap_oracle(g, s.profile, i);
                CHECK(oracle <= 1e-8);
                CHECK(std::abs(oracle - s.gaps[i]) <= 1e-10);
            }
        }
    }
}

TEST_SUITE("best response gaps") {
    TEST_CASE("pure Nash has zero gaps") {
        const Matrix A = from_rows({{1, 3}, {0, 2}});
        Matrix B(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) B.at(i, j) = A.at(j, i);
        const NormalFormGame g = game_from_bimatrix(A, B);
        MixedProfile pure{{{0.0, 1.0}, {0.0, 1.0}}};
        for (Real gp : best_response_gap(g, pure)) CHECK(std::abs(gp) <= 1e-15);
    }

    TEST_CASE("matching pennies gaps at uniform and at a pure profile") {
        const Matrix A = from_rows({{-1, 1}, {1, -1}});
        const NormalFormGame g = game_from_bimatrix(A, negate(A));
        MixedProfile uniform{{{0.5, 0.5}, {0.5, 0.5}}};
        for (Real gp : best_response_gap(g, uniform)) CHECK(std::abs(gp) <= 1e-15);
        // At (row 1, col 1) the row player already matches (cost -1, its best);
        // the column player pays 1 and could pay -1 by switching.
        MixedProfile pure{{{1.0, 0.0}, {1.0, 0.0}}};
        const auto gaps = best_response_gap(g, pure);
        CHECK(gaps[0] == doctest::Approx(0.0));
        CHECK(gaps[1] == doctest::Approx(2.0));
    }

    TEST_CASE("shift invariance of gaps and values") {
        const Matrix A = random_matrix(77, 3, 2);
        const Matrix B = random_matrix(78, 3, 2);
        NormalFormGame g = game_from_bimatrix(A, B);
        NormalFormGame shifted = g;
        for (Real& v : shifted.costs[0]) v += 3.25;
        MixedProfile p{{{0.2, 0.5, 0.3}, {0.4, 0.6}}};
        const auto g1 = best_response_gap(g, p);
        const auto g2 = best_response_gap(shifted, p);
        CHECK(g1[0] == doctest::Approx(g2[0]).epsilon(1e-12));
        CHECK(g1[1] == doctest::Approx(g2[1]).epsilon(1e-12));
        CHECK(expected_costs(shifted, p)[0] ==
              doctest::Approx(expected_costs(g, p)[0] + 3.25).epsilon(1e-12));
    }

    TEST_CASE("shape mismatch is a domain error") {
        const NormalFormGame g = game_from_bimatrix(random_matrix(1, 2, 2), random_matrix(2, 2, 2));
        MixedProfile bad{{{1.0}, {0.5, 0.5}}};
        CHECK_THROWS_AS(best_response_gap(g, bad), std::domain_error);
    }
}

TEST_SUITE("nplayer") {
    TEST_CASE("single player reduces to argmin") {
        NormalFormGame g;
        g.num_players = 1;
        g.action_counts = {4};
        g.costs = {{3.0, 1.5, 2.0, 1.5}};
        const StageSolution s = nplayer_nash(g, 1e-12, 1, 8);
        CHECK(s.profile.probs[0][1] == 1.0); // first minimum wins
        CHECK(s.values[0] == 1.5);
        CHECK(s.max_gap() == 0.0);
        CHECK(s.method == StageMethod::pure_enum);
    }

    TEST_CASE("decoupled three-player game solves to per-player argmins") {
        NormalFormGame g;
        g.num_players = 3;
        g.action_counts = {2, 2, 2};
        g.costs.assign(3, std::vector<Real>(8, 0.0));
        // u^i depends only on player i's own action.
        for (long joint = 0; joint < 8; ++joint) {
            const int a0 = static_cast<int>(joint >> 2) & 1;
            const int a1 = static_cast<int>(joint >> 1) & 1;
            const int a2 = static_cast<int>(joint) & 1;
            g.costs[0][joint] = a0 == 1 ? 0.0 : 1.0;
            g.costs[1][joint] = a1 == 0 ? 0.0 : 1.0;
            g.costs[2][joint] = a2 == 1 ? 0.0 : 1.0;
        }
        const StageSolution s = nplayer_nash(g, 1e-12, 1, 8);
        CHECK(s.profile.probs[0][1] == 1.0);
        CHECK(s.profile.probs[1][0] == 1.0);
        CHECK(s.profile.probs[2][1] == 1.0);
        CHECK(s.max_gap() <= 1e-15);
    }

    TEST_CASE("random 2x2x2 instances: reported gaps match the deviation oracle") {
        for (std::uint64_t seed = 0; seed < 15; ++seed) {
            NormalFormGame g;
            g.num_players = 3;
            g.action_counts = {2, 2, 2};
            Rng rng(9000 + seed);
            g.costs.assign(3, std::vector<Real>(8));
            for (int i = 0; i < 3; ++i)
                for (int e = 0; e < 8; ++e) g.costs[i][e] = 2.0 * rng.uniform() - 1.0;
            const StageSolution s = nplayer_nash(g, 1e-6, 123 + seed, 16);
            for (int i = 0; i < 3; ++i) {
                const Real oracle = test::gap_oracle(g, s.profile, i);
                CHECK(std::abs(oracle - s.gaps[i]) <= 1e-10);
                CHECK(oracle >= -1e-12);
            }
        }
    }

    TEST_CASE("zero-sum consistency of the 2-player path") {
        const Matrix A = random_matrix(31, 2, 3);
        const NormalFormGame g = game_from_bimatrix(A, negate(A));
        const StageSolution s = nplayer_nash(g, 1e-9, 5, 8);
        CHECK(std::abs(s.values[0] + s.values[1]) <= 1e-8);
    }

    TEST_CASE("deviation soundness of returned solutions") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Matrix A = random_matrix(700 + seed, 3, 3);
            const Matrix B = random_matrix(800 + seed, 3, 3);
            const NormalFormGame g = game_from_bimatrix(A, B);
            const StageSolution s = nplayer_nash(g, 1e-8, seed, 8);
            const auto recomputed = best_response_gap(g, s.profile);
            for (int i = 0; i < 2; ++i) CHECK(std::abs(recomputed[i] - s.gaps[i]) <= 1e-10);
        }
    }

    TEST_CASE("regret search improves from a warm start") {
        const Matrix A = random_matrix(41, 3, 3);
        const Matrix B = random_matrix(42, 3, 3);
        const NormalFormGame g = game_from_bimatrix(A, B);
        MixedProfile warm{{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}};
        const auto warm_gaps = best_response_gap(g, warm);
        const Real warm_gap = *std::max_element(warm_gaps.begin(), warm_gaps.end());
        const StageSolution s = stage_regret_search(g, 1e-9, 7, 4, &warm);
        CHECK(s.max_gap() <= warm_gap + 1e-12);
    }
}
