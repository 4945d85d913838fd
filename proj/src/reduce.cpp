#include "lpvmm/reduce.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace lpvmm {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::R: return "R";
        case Mode::O: return "O";
        case Mode::T: return "T";
    }
    return "?";
}

Mode parse_mode(const std::string& text) {
    std::string t;
    for (char c : text) t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (t == "R" || t == "REACH") return Mode::R;
    if (t == "O" || t == "OBS") return Mode::O;
    if (t == "T" || t == "TWO-SIDED") return Mode::T;
    throw Error("unknown reduction mode '" + text + "' (expected R, O or T)");
}

namespace {

LpvSsModel project(const LpvSsModel& model, const Matrix& left, const Matrix& right) {
    ModelData d{left.rows(), model.n_u(), model.n_y(), model.n_p(), {}, {}, {}};
    for (int i = 0; i <= model.n_p(); ++i) {
        d.A.push_back(left * model.A(i) * right);
        d.B.push_back(left * model.B(i));
        d.C.push_back(model.C(i) * right);
    }
    return LpvSsModel::from_data(std::move(d));
}

double condition_number(const Matrix& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

ReductionResult reduce(const LpvSsModel& model, int N, Mode mode, double tol) {
    if (N < 0) throw DimensionError("N must be nonnegative");
    ReductionResult res{model, mode, N, 0, mode == Mode::T ? 2 * N : N, {}, {}, tol, 1.0, {}};

    switch (mode) {
        case Mode::R: {
            res.V = reach_basis(model, N, tol).matrix;
            res.reduced = project(model, res.V.transpose(), res.V);
            break;
        }
        case Mode::O: {
            res.W = unobs_cobasis(model, N, tol).matrix;
            res.reduced = project(model, res.W, res.W.transpose());
            break;
        }
        case Mode::T: {
            res.V = reach_basis(model, N, tol).matrix;
            res.W = unobs_cobasis(model, N, tol).matrix;
            const Matrix wv = res.W * res.V;
            const int rv = static_cast<int>(res.V.cols());
            const int rw = static_cast<int>(res.W.rows());
            const int rwv = numerical_rank(wv, tol);
            if (rv != rw || rw != rwv) throw RankConditionError(rv, rw, rwv);

            res.condition_number = condition_number(wv);
            if (res.condition_number > kIllConditionedLimit) {
                res.warning = "WV is ill-conditioned (cond = " +
                              std::to_string(res.condition_number) + ")";
            }
            // right factor V (WV)^{-1}: solve (WV)^T X^T = V^T
            Matrix right = res.V;
            if (rv > 0) right = wv.transpose().partialPivLu().solve(res.V.transpose()).transpose();
            res.reduced = project(model, res.W, right);
            break;
        }
    }
    res.r = res.reduced.n_x();
    return res;
}

LpvSsModel minimize(const LpvSsModel& model, double tol) {
    if (model.n_x() == 0) return model;
    LpvSsModel reachable = reduce(model, model.n_x() - 1, Mode::R, tol).reduced;
    if (reachable.n_x() == 0) return reachable;
    return reduce(reachable, reachable.n_x() - 1, Mode::O, tol).reduced;
}

namespace {

bool same_signature(const LpvSsModel& a, const LpvSsModel& b) {
    return a.n_u() == b.n_u() && a.n_y() == b.n_y() && a.n_p() == b.n_p();
}

double ratio(double num, double scale) {
    if (num == 0.0) return 0.0;
    return scale > 0.0 ? num / scale : std::numeric_limits<double>::infinity();
}

constexpr double kIndependenceFloor = 1e-9;

// Columns A_w B_q0 e_k of m1 (and the same words on m2), chosen breadth-first so
// that m1's columns are linearly independent, until n_x of them span the space.
std::pair<Matrix, Matrix> matched_reachability_columns(const LpvSsModel& m1,
                                                       const LpvSsModel& m2) {
    const int n = m1.n_x();
    Matrix q(n, 0);  // orthonormal basis of accepted m1 columns
    Matrix sel1(n, 0), sel2(n, 0);
    Matrix level1(n, 0), level2(n, 0);

    const auto append = [](Matrix& m, const Matrix& cols) {
        Matrix out(m.rows(), m.cols() + cols.cols());
        out << m, cols;
        m = std::move(out);
    };

    // candidates of length 0
    Matrix cand1(n, 0), cand2(n, 0);
    for (int q0 = 0; q0 <= m1.n_p(); ++q0) {
        append(cand1, m1.B(q0));
        append(cand2, m2.B(q0));
    }

    for (int len = 0; len < std::max(n, 1) && sel1.cols() < n && cand1.cols() > 0; ++len) {
        Matrix residual = cand1 - q * (q.transpose() * cand1);
        for (Eigen::Index c = 0; c < residual.cols(); ++c) {
            const double norm = cand1.col(c).norm();
            if (norm > 0.0) residual.col(c) /= norm;
        }
        // pivots come out in decreasing magnitude; columns were normalized first
        Eigen::ColPivHouseholderQR<Matrix> qr(residual);
        Eigen::Index take = 0;
        const Eigen::Index diag = std::min(residual.rows(), residual.cols());
        while (take < diag && take < n - sel1.cols() &&
               std::abs(qr.matrixQR()(take, take)) > kIndependenceFloor) {
            ++take;
        }
        level1.resize(n, take);
        level2.resize(n, take);
        for (Eigen::Index k = 0; k < take; ++k) {
            const Eigen::Index c = qr.colsPermutation().indices()[k];
            level1.col(k) = cand1.col(c);
            level2.col(k) = cand2.col(c);
        }
        append(sel1, level1);
        append(sel2, level2);
        q = orth(sel1);

        cand1.resize(n, 0);
        cand2.resize(n, 0);
        for (int j = 0; j <= m1.n_p(); ++j) {
            append(cand1, m1.A(j) * level1);
            append(cand2, m2.A(j) * level2);
        }
    }
    return {std::move(sel1), std::move(sel2)};
}

}  // namespace

std::optional<Matrix> find_isomorphism(const LpvSsModel& m1, const LpvSsModel& m2, double tol) {
    if (!same_signature(m1, m2) || m1.n_x() != m2.n_x()) return std::nullopt;
    for (const auto* m : {&m1, &m2}) {
        if (!is_reachable(*m, tol) || !is_observable(*m, tol)) return std::nullopt;
    }
    const int n = m1.n_x();
    if (n == 0) return Matrix(0, 0);

    auto [r1, r2] = matched_reachability_columns(m1, m2);
    if (r1.cols() != n) return std::nullopt;

    Eigen::FullPivLU<Matrix> lu(r1.transpose());
    if (!lu.isInvertible()) return std::nullopt;
    const Matrix s = lu.solve(r2.transpose()).transpose();
    if (numerical_rank(s) != n) return std::nullopt;

    const double s_norm = s.norm();
    double worst = 0.0;
    for (int i = 0; i <= m1.n_p(); ++i) {
        worst = std::max(worst, ratio((m2.A(i) * s - s * m1.A(i)).norm(),
                                      s_norm * (m1.A(i).norm() + m2.A(i).norm())));
        worst = std::max(worst, ratio((m2.B(i) - s * m1.B(i)).norm(),
                                      m2.B(i).norm() + s_norm * m1.B(i).norm()));
        worst = std::max(worst, ratio((m2.C(i) * s - m1.C(i)).norm(),
                                      m2.C(i).norm() * s_norm + m1.C(i).norm()));
    }
    if (worst > tol) return std::nullopt;
    return s;
}

namespace {

PartialRealizationReport check_by_enumeration(const LpvSsModel& m1, const LpvSsModel& m2, int N) {
    PartialRealizationReport rep;
    rep.method = CheckMethod::Enumerate;
    PrefixProducts p1(m1, N), p2(m2, N);
    const int terms = m1.n_terms();
    std::vector<Matrix> t1(static_cast<std::size_t>(terms)), t2(static_cast<std::size_t>(terms));
    double scale = 0.0;
    for_each_word(m1.n_p(), N, [&](const Word& w, std::size_t from) {
        p1.update(w, from);
        p2.update(w, from);
        for (int q0 = 0; q0 < terms; ++q0) {
            t1[q0].noalias() = p1.product() * m1.B(q0);
            t2[q0].noalias() = p2.product() * m2.B(q0);
        }
        for (int q = 0; q < terms; ++q) {
            for (int q0 = 0; q0 < terms; ++q0) {
                const Matrix e1 = m1.C(q) * t1[q0];
                const Matrix e2 = m2.C(q) * t2[q0];
                if (e1.size() > 0) {
                    rep.max_abs_deviation =
                        std::max(rep.max_abs_deviation, (e1 - e2).cwiseAbs().maxCoeff());
                    scale = std::max({scale, e1.cwiseAbs().maxCoeff(), e2.cwiseAbs().maxCoeff()});
                }
                ++rep.compared;
            }
        }
    });
    rep.max_rel_deviation = ratio(rep.max_abs_deviation, scale);
    return rep;
}

PartialRealizationReport check_by_subspace(const LpvSsModel& m1, const LpvSsModel& m2, int N) {
    PartialRealizationReport rep;
    rep.method = CheckMethod::Subspace;
    const int n1 = m1.n_x(), n2 = m2.n_x();
    ModelData d{n1 + n2, m1.n_u(), m1.n_y(), m1.n_p(), {}, {}, {}};
    for (int i = 0; i <= m1.n_p(); ++i) {
        Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
        a.topLeftCorner(n1, n1) = m1.A(i);
        a.bottomRightCorner(n2, n2) = m2.A(i);
        Matrix b(n1 + n2, m1.n_u());
        b << m1.B(i), m2.B(i);
        Matrix c(m1.n_y(), n1 + n2);
        c << m1.C(i), -m2.C(i);
        d.A.push_back(std::move(a));
        d.B.push_back(std::move(b));
        d.C.push_back(std::move(c));
    }
    const LpvSsModel joint = LpvSsModel::from_data(std::move(d));
    const Matrix v = reach_basis(joint, N).matrix;
    double scale = 0.0;
    for (int q = 0; q <= joint.n_p(); ++q) {
        const Matrix cv = joint.C(q) * v;
        if (cv.size() > 0) {
            rep.max_abs_deviation =
                std::max(rep.max_abs_deviation, Eigen::JacobiSVD<Matrix>(cv).singularValues()[0]);
        }
        if (joint.C(q).size() > 0) {
            scale = std::max(scale, Eigen::JacobiSVD<Matrix>(joint.C(q)).singularValues()[0]);
        }
    }
    rep.max_rel_deviation = ratio(rep.max_abs_deviation, scale);
    return rep;
}

}  // namespace

PartialRealizationReport check_partial_realization(const LpvSsModel& m1, const LpvSsModel& m2,
                                                   int N, double tol, CheckMethod method,
                                                   std::uint64_t cap) {
    if (!same_signature(m1, m2)) {
        throw DimensionError("models differ in input, output or scheduling dimension");
    }
    if (N < 0) throw DimensionError("N must be nonnegative");

    if (method != CheckMethod::Subspace) {
        const std::uint64_t count = markov_count(m1.n_p(), N);
        if (count > cap) {
            if (method == CheckMethod::Enumerate) {
                throw SizeCapError("enumeration too large: " + std::to_string(count) +
                                       " sub-Markov parameters exceed cap " + std::to_string(cap),
                                   count, cap);
            }
            method = CheckMethod::Subspace;
        } else {
            method = CheckMethod::Enumerate;
        }
    }
    PartialRealizationReport rep = method == CheckMethod::Enumerate ? check_by_enumeration(m1, m2, N)
                                                                    : check_by_subspace(m1, m2, N);
    rep.N = N;
    rep.tol = tol;
    rep.pass = rep.max_rel_deviation <= tol;
    return rep;
}

}  // namespace lpvmm
