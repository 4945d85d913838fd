#include "lpvmm/subspace.hpp"

#include <algorithm>
#include <limits>

namespace lpvmm {

double rank_threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols, double tol) {
    if (tol < 0.0) throw DimensionError("rank tolerance must be nonnegative");
    if (tol == 0.0) {
        tol = static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
    }
    return tol * sigma_max;
}

namespace {

struct ThinSvd {
    Matrix u;
    Vector sigma;
    int rank = 0;
};

ThinSvd thin_svd(const Matrix& m, double tol) {
    ThinSvd out;
    if (m.size() == 0) {
        out.u = Matrix(m.rows(), 0);
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    out.sigma = svd.singularValues();
    const double sigma_max = out.sigma.size() ? out.sigma[0] : 0.0;
    if (sigma_max > 0.0) {
        const double cut = rank_threshold(sigma_max, m.rows(), m.cols(), tol);
        while (out.rank < out.sigma.size() && out.sigma[out.rank] > cut) ++out.rank;
    }
    out.u = svd.matrixU().leftCols(out.rank);
    return out;
}

SubspaceBasis reach_iteration(std::span<const Matrix> A, std::span<const Matrix> B, int n_x, int N,
                              double tol) {
    if (N < 0) throw DimensionError("N must be nonnegative");
    Eigen::Index in_cols = 0;
    for (const auto& b : B) in_cols += b.cols();
    Matrix stacked(n_x, in_cols);
    Eigen::Index c = 0;
    for (const auto& b : B) {
        stacked.middleCols(c, b.cols()) = b;
        c += b.cols();
    }

    SubspaceBasis out;
    out.kind = SubspaceKind::Reachability;
    out.N = N;
    out.tol = tol;
    out.matrix = orth(stacked, tol);

    const auto blocks = static_cast<Eigen::Index>(A.size()) + 1;
    for (int k = 0; k < N; ++k) {
        const Eigen::Index r = out.matrix.cols();
        if (r == n_x) break;
        Matrix expanded(n_x, r * blocks);
        expanded.leftCols(r) = out.matrix;
        for (Eigen::Index i = 0; i + 1 < blocks; ++i) {
            expanded.middleCols(r * (i + 1), r).noalias() = A[i] * out.matrix;
        }
        Matrix next = orth(expanded, tol);
        ++out.iterations;
        const bool settled = next.cols() == r;
        out.matrix = std::move(next);
        if (settled) break;
    }
    out.rank = static_cast<int>(out.matrix.cols());
    return out;
}

}  // namespace

int numerical_rank(const Matrix& m, double tol) { return thin_svd(m, tol).rank; }

Matrix orth(const Matrix& m, double tol) { return thin_svd(m, tol).u; }

SubspaceBasis reach_basis(const LpvSsModel& model, int N, double tol) {
    return reach_iteration(model.A(), model.B(), model.n_x(), N, tol);
}

SubspaceBasis unobs_cobasis(const LpvSsModel& model, int N, double tol) {
    const LpvSsModel dual = model.transposed();
    SubspaceBasis out = reach_iteration(dual.A(), dual.B(), dual.n_x(), N, tol);
    out.matrix.transposeInPlace();
    out.kind = SubspaceKind::Observability;
    return out;
}

bool is_reachable(const LpvSsModel& model, double tol) {
    return reach_basis(model, std::max(model.n_x() - 1, 0), tol).rank == model.n_x();
}

bool is_observable(const LpvSsModel& model, double tol) {
    return unobs_cobasis(model, std::max(model.n_x() - 1, 0), tol).rank == model.n_x();
}

}  // namespace lpvmm
