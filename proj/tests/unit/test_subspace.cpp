#include <random>

#include "doctest.h"
#include "lpvmm/bench.hpp"
#include "lpvmm/subspace.hpp"
#include "test_models.hpp"

using namespace lpvmm;
using namespace lpvmm::testing;

namespace {

double gram_error_cols(const Matrix& v) {
    if (v.cols() == 0) return 0.0;
    return (v.transpose() * v - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("orth") {
    std::mt19937_64 rng(1);

    SUBCASE("identity") {
        const Matrix u = orth(Matrix::Identity(3, 3));
        CHECK(u.cols() == 3);
        CHECK(gram_error_cols(u) <= 1e-12);
    }
    SUBCASE("dependent columns") {
        Matrix m(2, 2);
        m << 1, 2, 2, 4;
        const Matrix u = orth(m);
        CHECK(u.cols() == 1);
        CHECK(projection_residual(m, u) <= 1e-12);
    }
    SUBCASE("rank known by construction") {
        for (int k = 0; k < 10; ++k) {
            const Matrix m = gaussian(rng, 6, 4) * gaussian(rng, 4, 9);
            const Matrix u = orth(m);
            CHECK(u.cols() == 4);
            CHECK(gram_error_cols(u) <= 1e-12);
            CHECK(projection_residual(m, u) <= 1e-10);
        }
    }
    SUBCASE("empty and zero inputs give rank 0") {
        CHECK(orth(Matrix(4, 0)).cols() == 0);
        CHECK(orth(Matrix::Zero(3, 5)).cols() == 0);
        CHECK(orth(Matrix::Zero(3, 5)).rows() == 3);
    }
    SUBCASE("explicit tolerance drops small directions") {
        Matrix m = Matrix::Zero(3, 3);
        m.diagonal() << 1.0, 1e-3, 1e-9;
        CHECK(numerical_rank(m) == 3);
        CHECK(numerical_rank(m, 1e-6) == 2);
        CHECK(numerical_rank(m, 1e-2) == 1);
        CHECK_THROWS_AS(numerical_rank(m, -1.0), DimensionError);
    }
}

TEST_CASE("reach_basis on the seven-state example") {
    const auto m = seven_state_example();
    // B columns are e7, e6, e5, e1, e2, e3; A_3 couples e5 into e4.
    CHECK(reach_basis(m, 0).rank == 6);
    for (int N = 1; N <= 8; ++N) CHECK(reach_basis(m, N).rank == 7);
}

TEST_CASE("unobs_cobasis on the seven-state example") {
    const auto m = seven_state_example();
    // C = e1^T; each A_i row i couples state i into i+1, so one new direction per step.
    for (int N = 0; N <= 6; ++N) CHECK(unobs_cobasis(m, N).rank == N + 1);
    CHECK(unobs_cobasis(m, 2).rank == 3);
    CHECK(unobs_cobasis(m, 4).rank == 5);
    for (int N = 6; N <= 10; ++N) CHECK(unobs_cobasis(m, N).rank == 7);
    CHECK(is_reachable(m));
    CHECK(is_observable(m));
}

TEST_CASE("reach_basis zero-iteration and degenerate cases") {
    std::mt19937_64 rng(4);
    const auto m = random_model(rng, 6, 1, 1, 1);
    const auto b0 = reach_basis(m, 0);
    Matrix stacked(6, 2);
    stacked << m.B(0), m.B(1);
    CHECK(b0.rank == 2);
    CHECK(b0.iterations == 0);
    CHECK(projection_residual(stacked, b0.matrix) <= 1e-12);

    const auto z = LpvSsModel::zeros(4, 2, 1, 2);
    CHECK(reach_basis(z, 3).rank == 0);
    CHECK(unobs_cobasis(z, 3).rank == 0);
    CHECK(unobs_cobasis(z, 3).matrix.rows() == 0);
    CHECK(unobs_cobasis(z, 3).matrix.cols() == 4);
    CHECK_FALSE(is_reachable(z));
    CHECK_FALSE(is_observable(z));
    CHECK_THROWS_AS(reach_basis(m, -1), DimensionError);
}

TEST_CASE("unreachable block is detected with the reachable size") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 10; ++k) {
        const auto core = random_model(rng, 3, 1, 1, 2);
        REQUIRE(is_reachable(core));
        const auto big = pad_unreachable(core, 2, rng);
        CHECK_FALSE(is_reachable(big));
        CHECK(reach_basis(big, big.n_x() - 1).rank == 3);
    }
}

TEST_CASE("unobs_cobasis kernel equals the nullspace of the explicit O_N") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 20; ++k) {
        const auto m = random_model_in(rng, 5, 2);
        for (int N = 0; N <= 3; ++N) {
            const Matrix w = unobs_cobasis(m, N).matrix;
            const Matrix obs_rows = qr_range(brute_obs_matrix(m, N).transpose());
            CHECK(w.rows() == obs_rows.cols());
            CHECK(projection_residual(w.transpose(), obs_rows) <= 1e-9);
            CHECK(projection_residual(obs_rows, w.transpose()) <= 1e-9);
        }
    }
}

TEST_CASE("Im V equals the column space of the explicit R_N") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 20; ++k) {
        const auto m = random_model_in(rng, 5, 2);
        for (int N = 0; N <= 3; ++N) {
            const Matrix v = reach_basis(m, N).matrix;
            const Matrix r = qr_range(brute_reach_matrix(m, N));
            CHECK(v.cols() == r.cols());
            CHECK(projection_residual(v, r) <= 1e-9);
            CHECK(projection_residual(r, v) <= 1e-9);
        }
    }
}

TEST_CASE("rank is monotone in N and settles for good") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 40; ++k) {
        std::uniform_int_distribution<int> nx(2, 6), np(1, 3);
        // low-rank A keeps the chain from saturating immediately
        const int n_x = nx(rng), n_p = np(rng);
        ModelData d{n_x, 1, 1, n_p, {}, {}, {}};
        for (int i = 0; i <= n_p; ++i) {
            d.A.push_back(i == 0 ? gaussian(rng, n_x, n_x) : Matrix::Zero(n_x, n_x));
            d.B.push_back(i == 0 ? gaussian(rng, n_x, 1) : Matrix::Zero(n_x, 1));
            d.C.push_back(gaussian(rng, 1, n_x));
        }
        const auto m = LpvSsModel::from_data(d);
        int prev = -1;
        bool settled = false;
        for (int N = 0; N <= n_x + 1; ++N) {
            const int r = reach_basis(m, N).rank;
            CHECK(r <= n_x);
            CHECK(r >= prev);
            if (settled) CHECK(r == prev);
            if (r == prev) settled = true;
            prev = r;
        }
    }
}

TEST_CASE("duality: cobasis is the transposed model's basis, transposed") {
    std::mt19937_64 rng(24);
    for (int k = 0; k < 10; ++k) {
        const auto m = random_model_in(rng, 5, 3);
        for (int N = 0; N <= 3; ++N) {
            const Matrix w = unobs_cobasis(m, N).matrix;
            const Matrix v = reach_basis(m.transposed(), N).matrix;
            CHECK(w == Matrix(v.transpose()));
        }
    }
}

TEST_CASE("orthonormality of every returned basis") {
    std::mt19937_64 rng(25);
    for (int k = 0; k < 30; ++k) {
        const auto m = random_model_in(rng, 6, 3);
        for (int N = 0; N <= 4; ++N) {
            const auto v = reach_basis(m, N);
            const auto w = unobs_cobasis(m, N);
            CHECK(gram_error_cols(v.matrix) <= 1e-12);
            CHECK(gram_error_cols(w.matrix.transpose()) <= 1e-12);
            CHECK(v.kind == SubspaceKind::Reachability);
            CHECK(w.kind == SubspaceKind::Observability);
            CHECK(v.rank == v.matrix.cols());
            CHECK(w.rank == w.matrix.rows());
        }
    }
}
