#include <map>
#include <random>

#include "doctest.h"
#include "lpvmm/bench.hpp"
#include "lpvmm/oracle.hpp"
#include "lpvmm/subspace.hpp"
#include "test_models.hpp"

using namespace lpvmm;
using namespace lpvmm::testing;

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TEST_CASE("R_0 is the stacked input matrices") {
    std::mt19937_64 rng(1);
    const auto m = random_model(rng, 4, 2, 1, 2);
    Matrix expect(4, 6);
    expect << m.B(0), m.B(1), m.B(2);
    CHECK(extended_reach_matrix(m, 0) == expect);
    Matrix obs(3, 4);
    obs << m.C(0), m.C(1), m.C(2);
    CHECK(extended_obs_matrix(m, 0) == obs);
}

TEST_CASE("explicit R_N spans the iterated reachability basis") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
        const auto m = random_model(rng, 4, 1, 1, 2);
        const Matrix r = extended_reach_matrix(m, 3);
        CHECK(r.cols() == 3 * 40);
        const Matrix v = reach_basis(m, 3).matrix;
        const Matrix rr = qr_range(r);
        CHECK(rr.cols() == v.cols());
        CHECK(projection_residual(r, v) <= 1e-9);
        CHECK(projection_residual(v, rr) <= 1e-9);
    }
}

TEST_CASE("seven-state example at N = 6 is refused under the default cap") {
    const auto m = seven_state_example();
    CHECK(extended_dimension(m.n_y(), m.n_p(), 6) == 335922);
    CHECK(extended_dimension(m.n_u(), m.n_p(), 6) == 335922);
    try {
        (void)extended_obs_matrix(m, 6);
        FAIL("expected SizeCapError");
    } catch (const SizeCapError& e) {
        CHECK(e.required() == 335922ULL * 7);
        CHECK(e.cap() == kDefaultHankelCap);
        CHECK(std::string(e.what()).find("hankel too large") != std::string::npos);
    }
    CHECK_THROWS_AS(extended_reach_matrix(m, 6), SizeCapError);
    CHECK_THROWS_AS(hankel_rank(m, 6), SizeCapError);
    // a raised cap lets the factor through
    CHECK(extended_obs_matrix(m, 6, 3'000'000).rows() == 335922);
}

TEST_CASE("closed-form dimension for n_p <= 5, N <= 6") {
    for (int np = 1; np <= 5; ++np) {
        for (int N = 0; N <= 6; ++N) {
            const std::uint64_t t = static_cast<std::uint64_t>(np) + 1;
            const std::uint64_t expect = t * ((ipow(t, N + 1) - 1) / static_cast<std::uint64_t>(np));
            CHECK(extended_dimension(1, np, N) == expect);
            CHECK(extended_dimension(3, np, N) == 3 * expect);
        }
    }
}

TEST_CASE("hankel of the zero model") {
    const auto z = LpvSsModel::zeros(3, 1, 1, 2);
    const auto h = hankel(z, 2);
    CHECK(h.H.cwiseAbs().maxCoeff() == 0.0);
    CHECK(hankel_rank(z, 2) == 0);
}

TEST_CASE("hankel rank of minimal models is n_x at N = n_x - 1") {
    std::mt19937_64 rng(3);
    int tested = 0;
    for (int k = 0; k < 20; ++k) {
        const auto m = random_model(rng, 3, 1, 1, 1);
        if (!is_reachable(m) || !is_observable(m)) continue;
        ++tested;
        CHECK(hankel_rank(m, 2) == 3);
    }
    CHECK(tested > 10);

    for (int k = 0; k < 10; ++k) {
        const auto m = random_model_in(rng, 5, 2);
        if (!is_reachable(m) || !is_observable(m)) continue;
        CHECK(hankel_rank(m, m.n_x() - 1) == m.n_x());
    }
}

TEST_CASE("hankel blocks equal the enumerated sub-Markov parameters exactly") {
    std::mt19937_64 rng(4);
    // integer entries keep every product exact in double precision
    const auto m = integer_model(rng, 3, 2, 2, 1);
    const int N = 2;
    const auto h = hankel(m, N);
    CHECK((h.H - h.O * h.R).cwiseAbs().maxCoeff() == 0.0);

    std::map<std::tuple<int, int, std::vector<int>>, Matrix> eta;
    for (auto& e : enumerate_sub_markov(m, 2 * N))
        eta[{e.index.q, e.index.q0, e.index.word.symbols}] = e.value;

    CHECK(h.blocks.size() == (h.H.rows() / 2) * (h.H.cols() / 2));
    for (const auto& b : h.blocks) {
        const Matrix block = h.H.block(b.row, b.col, m.n_y(), m.n_u());
        const Matrix& expect = eta.at({b.index.q, b.index.q0, b.index.word.symbols});
        CHECK(block == expect);
    }
}

TEST_CASE("hankel rank is bounded by reachable and observable dimensions") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        auto m = random_model_in(rng, 4, 2);
        if (k % 2) m = pad_unreachable(m, 1, rng);
        for (int N = 0; N <= 2; ++N) {
            const int rank = hankel_rank(m, N);
            CHECK(rank <= reach_basis(m, N).rank);
            CHECK(rank <= unobs_cobasis(m, N).rank);
        }
    }
}
