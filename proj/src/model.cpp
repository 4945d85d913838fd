#include "lpvmm/model.hpp"

#include <cmath>
#include <sstream>

namespace lpvmm {

namespace {

void check_family(const std::vector<Matrix>& family, const char* name, long long rows,
                  long long cols, std::size_t expected_len, std::vector<std::string>& issues) {
    if (family.size() != expected_len) {
        std::ostringstream os;
        os << "matrix list length: " << name << " has " << family.size() << " entries, expected "
           << expected_len;
        issues.push_back(os.str());
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        const Matrix& m = family[i];
        if (m.rows() != rows || m.cols() != cols) {
            std::ostringstream os;
            os << "dimension mismatch: " << name << "_" << i << " is " << m.rows() << "x"
               << m.cols() << ", expected " << rows << "x" << cols;
            issues.push_back(os.str());
        }
        if (!m.allFinite()) {
            std::ostringstream os;
            os << "non-finite entry in " << name << "_" << i;
            issues.push_back(os.str());
        }
    }
}

void require_dim(const Vector& v, int expected, const char* what) {
    if (v.size() != expected) {
        throw DimensionError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                             ", expected " + std::to_string(expected));
    }
}

}  // namespace

std::vector<std::string> validation_issues(const ModelData& d) {
    std::vector<std::string> issues;
    const auto check_dim = [&](long long v, const char* name) {
        if (v < 0) issues.push_back(std::string("negative dimension: ") + name);
    };
    check_dim(d.n_x, "n_x");
    check_dim(d.n_u, "n_u");
    check_dim(d.n_y, "n_y");
    check_dim(d.n_p, "n_p");
    if (!issues.empty()) return issues;

    const auto terms = static_cast<std::size_t>(d.n_p + 1);
    check_family(d.A, "A", d.n_x, d.n_x, terms, issues);
    check_family(d.B, "B", d.n_x, d.n_u, terms, issues);
    check_family(d.C, "C", d.n_y, d.n_x, terms, issues);
    return issues;
}

LpvSsModel LpvSsModel::from_data(ModelData data) {
    if (auto issues = validation_issues(data); !issues.empty()) {
        throw ValidationError(std::move(issues));
    }
    LpvSsModel m;
    m.n_x_ = static_cast<int>(data.n_x);
    m.n_u_ = static_cast<int>(data.n_u);
    m.n_y_ = static_cast<int>(data.n_y);
    m.n_p_ = static_cast<int>(data.n_p);
    m.A_ = std::move(data.A);
    m.B_ = std::move(data.B);
    m.C_ = std::move(data.C);
    return m;
}

LpvSsModel LpvSsModel::zeros(int n_x, int n_u, int n_y, int n_p) {
    ModelData d{n_x, n_u, n_y, n_p, {}, {}, {}};
    for (int i = 0; i <= n_p; ++i) {
        d.A.push_back(Matrix::Zero(n_x, n_x));
        d.B.push_back(Matrix::Zero(n_x, n_u));
        d.C.push_back(Matrix::Zero(n_y, n_x));
    }
    return from_data(std::move(d));
}

LpvSsModel LpvSsModel::transposed() const {
    LpvSsModel m;
    m.n_x_ = n_x_;
    m.n_u_ = n_y_;
    m.n_y_ = n_u_;
    m.n_p_ = n_p_;
    for (int i = 0; i <= n_p_; ++i) {
        m.A_.push_back(A_[i].transpose());
        m.B_.push_back(C_[i].transpose());
        m.C_.push_back(B_[i].transpose());
    }
    return m;
}

ModelData LpvSsModel::data() const { return ModelData{n_x_, n_u_, n_y_, n_p_, A_, B_, C_}; }

ScheduledMatrices eval_matrices(const LpvSsModel& model, const Vector& p) {
    require_dim(p, model.n_p(), "scheduling vector");
    if (!p.allFinite()) throw DimensionError("scheduling vector has non-finite entries");
    ScheduledMatrices out{model.A(0), model.B(0), model.C(0)};
    for (int i = 1; i <= model.n_p(); ++i) {
        const double w = p[i - 1];
        out.A += w * model.A(i);
        out.B += w * model.B(i);
        out.C += w * model.C(i);
    }
    return out;
}

namespace {

void check_signals(const LpvSsModel& model, std::span<const Vector> u, std::span<const Vector> p) {
    if (u.size() != p.size()) {
        throw DimensionError("input and scheduling sequences differ in length (" +
                             std::to_string(u.size()) + " vs " + std::to_string(p.size()) + ")");
    }
    for (const auto& v : u) require_dim(v, model.n_u(), "input vector");
    for (const auto& v : p) require_dim(v, model.n_p(), "scheduling vector");
}

}  // namespace

Trajectory simulate(const LpvSsModel& model, const Vector& x0, std::span<const Vector> u,
                    std::span<const Vector> p) {
    check_signals(model, u, p);
    require_dim(x0, model.n_x(), "initial state");

    Trajectory traj;
    traj.u.assign(u.begin(), u.end());
    traj.p.assign(p.begin(), p.end());
    traj.x.reserve(u.size() + 1);
    traj.y.reserve(u.size());
    traj.x.push_back(x0);
    for (std::size_t t = 0; t < u.size(); ++t) {
        const auto m = eval_matrices(model, p[t]);
        const Vector& x = traj.x.back();
        traj.y.push_back(m.C * x);
        traj.x.push_back(m.A * x + m.B * u[t]);
    }
    return traj;
}

std::vector<Vector> simulate_outputs(const LpvSsModel& model, std::span<const Vector> u,
                                     std::span<const Vector> p) {
    return simulate(model, Vector::Zero(model.n_x()), u, p).y;
}

Vector iir_response(const LpvSsModel& model, std::span<const Vector> u, std::span<const Vector> p,
                    std::size_t t) {
    check_signals(model, u, p);
    if (t >= u.size()) {
        throw DimensionError("time index " + std::to_string(t) + " out of range (length " +
                             std::to_string(u.size()) + ")");
    }
    Vector y = Vector::Zero(model.n_y());
    // row = C(p(t)) A(p(t-1)) ... A(p(t-m+1)) after m-1 steps
    Matrix row = eval_matrices(model, p[t]).C;
    for (std::size_t m = 1; m <= t; ++m) {
        const auto at = eval_matrices(model, p[t - m]);
        y += row * (at.B * u[t - m]);
        row = row * at.A;
    }
    return y;
}

std::string Word::to_string() const {
    if (symbols.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(symbols[i]);
    }
    return s;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.symbols.size() <=> b.symbols.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.symbols.begin(), a.symbols.end(),
                                                  b.symbols.begin(), b.symbols.end());
}

Matrix sub_markov(const LpvSsModel& model, const SubMarkovIndex& idx) {
    const auto in_range = [&](int s) { return s >= 0 && s <= model.n_p(); };
    if (!in_range(idx.q) || !in_range(idx.q0)) throw DimensionError("sub-Markov index out of range");
    Matrix left = model.C(idx.q);
    for (int j : idx.word.symbols) {
        if (!in_range(j)) throw DimensionError("word symbol out of range");
        left = left * model.A(j);
    }
    return left * model.B(idx.q0);
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("count exceeds 64-bit range");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("count exceeds 64-bit range");
    return r;
}

}  // namespace

std::uint64_t word_count(int n_p, int max_len) {
    if (n_p < 0 || max_len < 0) throw DimensionError("word_count needs n_p >= 0 and max_len >= 0");
    const auto base = static_cast<std::uint64_t>(n_p) + 1;
    std::uint64_t total = 0, power = 1;
    for (int k = 0; k <= max_len; ++k) {
        total = checked_add(total, power);
        if (k < max_len) power = checked_mul(power, base);
    }
    return total;
}

std::uint64_t markov_count(int n_p, int N) {
    const auto terms = static_cast<std::uint64_t>(n_p) + 1;
    return checked_mul(checked_mul(terms, word_count(n_p, N)), terms);
}

void for_each_word(int n_p, int max_len,
                   const std::function<void(const Word&, std::size_t)>& visit) {
    Word w;
    for (int len = 0; len <= max_len; ++len) {
        w.symbols.assign(static_cast<std::size_t>(len), 0);
        visit(w, 0);
        while (true) {
            // odometer increment, rightmost symbol fastest
            std::size_t pos = w.symbols.size();
            while (pos > 0 && w.symbols[pos - 1] == n_p) {
                w.symbols[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
            ++w.symbols[pos - 1];
            visit(w, pos - 1);
        }
    }
}

PrefixProducts::PrefixProducts(const LpvSsModel& model, int max_len) : model_(&model) {
    stack_.assign(static_cast<std::size_t>(max_len) + 1, Matrix());
    stack_[0] = Matrix::Identity(model.n_x(), model.n_x());
}

void PrefixProducts::update(const Word& word, std::size_t changed_from) {
    len_ = word.size();
    for (std::size_t i = changed_from; i < len_; ++i) {
        stack_[i + 1].noalias() = stack_[i] * model_->A(word.symbols[i]);
    }
}

std::vector<SubMarkovEntry> enumerate_sub_markov(const LpvSsModel& model, int N,
                                                 std::uint64_t cap) {
    if (N < 0) throw DimensionError("N must be nonnegative");
    const std::uint64_t count = markov_count(model.n_p(), N);
    if (count > cap) {
        throw SizeCapError("enumeration too large: " + std::to_string(count) +
                               " sub-Markov parameters exceed cap " + std::to_string(cap),
                           count, cap);
    }
    std::vector<SubMarkovEntry> out;
    out.reserve(count);
    PrefixProducts prefix(model, N);
    const int terms = model.n_terms();
    std::vector<Matrix> tails(static_cast<std::size_t>(terms));
    for_each_word(model.n_p(), N, [&](const Word& w, std::size_t from) {
        prefix.update(w, from);
        for (int q0 = 0; q0 < terms; ++q0) tails[q0].noalias() = prefix.product() * model.B(q0);
        for (int q = 0; q < terms; ++q) {
            for (int q0 = 0; q0 < terms; ++q0) {
                out.push_back({SubMarkovIndex{q, q0, w}, model.C(q) * tails[q0]});
            }
        }
    });
    return out;
}

}  // namespace lpvmm
