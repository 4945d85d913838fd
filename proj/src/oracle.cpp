#include "lpvmm/oracle.hpp"

#include "lpvmm/subspace.hpp"

namespace lpvmm {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("dimension exceeds 64-bit range");
    return r;
}

void enforce_cap(std::uint64_t rows, std::uint64_t cols, std::uint64_t cap, const char* what) {
    const std::uint64_t entries = checked_mul(rows, cols);
    if (entries > cap) {
        throw SizeCapError(std::string("hankel too large: ") + what + " would be " +
                               std::to_string(rows) + "x" + std::to_string(cols) + " (" +
                               std::to_string(entries) + " entries, cap " + std::to_string(cap) +
                               ")",
                           entries, cap);
    }
}

}  // namespace

std::uint64_t extended_dimension(int width, int n_p, int N) {
    return checked_mul(checked_mul(static_cast<std::uint64_t>(width),
                                   static_cast<std::uint64_t>(n_p) + 1),
                       word_count(n_p, N));
}

Matrix extended_reach_matrix(const LpvSsModel& model, int N, std::uint64_t cap) {
    if (N < 0) throw DimensionError("N must be nonnegative");
    const std::uint64_t cols = extended_dimension(model.n_u(), model.n_p(), N);
    enforce_cap(static_cast<std::uint64_t>(model.n_x()), cols, cap, "extended reachability matrix");

    Matrix r(model.n_x(), static_cast<Eigen::Index>(cols));
    PrefixProducts prefix(model, N);
    Eigen::Index c = 0;
    for_each_word(model.n_p(), N, [&](const Word& w, std::size_t from) {
        prefix.update(w, from);
        for (int q0 = 0; q0 <= model.n_p(); ++q0) {
            r.middleCols(c, model.n_u()).noalias() = prefix.product() * model.B(q0);
            c += model.n_u();
        }
    });
    return r;
}

Matrix extended_obs_matrix(const LpvSsModel& model, int N, std::uint64_t cap) {
    if (N < 0) throw DimensionError("N must be nonnegative");
    const std::uint64_t rows = extended_dimension(model.n_y(), model.n_p(), N);
    enforce_cap(rows, static_cast<std::uint64_t>(model.n_x()), cap, "extended observability matrix");

    Matrix o(static_cast<Eigen::Index>(rows), model.n_x());
    PrefixProducts prefix(model, N);
    Eigen::Index r = 0;
    for_each_word(model.n_p(), N, [&](const Word& w, std::size_t from) {
        prefix.update(w, from);
        for (int q = 0; q <= model.n_p(); ++q) {
            o.middleRows(r, model.n_y()).noalias() = model.C(q) * prefix.product();
            r += model.n_y();
        }
    });
    return o;
}

HankelArtifacts hankel(const LpvSsModel& model, int N, std::uint64_t cap) {
    const std::uint64_t rows = extended_dimension(model.n_y(), model.n_p(), N);
    const std::uint64_t cols = extended_dimension(model.n_u(), model.n_p(), N);
    enforce_cap(rows, cols, cap, "Hankel matrix");

    HankelArtifacts out;
    out.N = N;
    out.R = extended_reach_matrix(model, N, cap);
    out.O = extended_obs_matrix(model, N, cap);
    out.H.noalias() = out.O * out.R;

    std::vector<Word> words;
    for_each_word(model.n_p(), N, [&](const Word& w, std::size_t) { words.push_back(w); });
    Eigen::Index row = 0;
    for (const auto& rw : words) {
        for (int q = 0; q <= model.n_p(); ++q, row += model.n_y()) {
            Eigen::Index col = 0;
            for (const auto& cw : words) {
                for (int q0 = 0; q0 <= model.n_p(); ++q0, col += model.n_u()) {
                    Word joined = rw;
                    joined.symbols.insert(joined.symbols.end(), cw.symbols.begin(), cw.symbols.end());
                    out.blocks.push_back({row, col, SubMarkovIndex{q, q0, std::move(joined)}});
                }
            }
        }
    }
    return out;
}

int hankel_rank(const LpvSsModel& model, int N, double tol, std::uint64_t cap) {
    const std::uint64_t rows = extended_dimension(model.n_y(), model.n_p(), N);
    const std::uint64_t cols = extended_dimension(model.n_u(), model.n_p(), N);
    enforce_cap(rows, cols, cap, "Hankel matrix");
    const Matrix h = extended_obs_matrix(model, N, cap) * extended_reach_matrix(model, N, cap);
    return numerical_rank(h, tol);
}

}  // namespace lpvmm
