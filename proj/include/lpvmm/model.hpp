#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvmm/errors.hpp"

namespace lpvmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Unvalidated model description, e.g. straight out of a file parser.
struct ModelData {
    long long n_x = 0;
    long long n_u = 0;
    long long n_y = 0;
    long long n_p = 0;
    std::vector<Matrix> A, B, C;
};

/// Every invariant `data` violates, one human-readable line each. Empty when valid.
std::vector<std::string> validation_issues(const ModelData& data);

/**
 * Discrete-time LPV state-space model with affine, static scheduling dependence:
 *
 *   x(t+1) = A(p(t)) x(t) + B(p(t)) u(t),   y(t) = C(p(t)) x(t),
 *   A(p) = A_0 + sum_i A_i p_i  (likewise B, C).
 *
 * Index 0 of each matrix family is the constant term; scheduling vectors only
 * carry p_1..p_{n_p}. Immutable once constructed.
 */
class LpvSsModel {
   public:
    /// Throws ValidationError listing every violated invariant.
    static LpvSsModel from_data(ModelData data);

    /// Zero model (all matrices zero) of the given dimensions.
    static LpvSsModel zeros(int n_x, int n_u, int n_y, int n_p);

    int n_x() const noexcept { return n_x_; }
    int n_u() const noexcept { return n_u_; }
    int n_y() const noexcept { return n_y_; }
    int n_p() const noexcept { return n_p_; }
    int n_terms() const noexcept { return n_p_ + 1; }

    const Matrix& A(int i) const { return A_.at(static_cast<std::size_t>(i)); }
    const Matrix& B(int i) const { return B_.at(static_cast<std::size_t>(i)); }
    const Matrix& C(int i) const { return C_.at(static_cast<std::size_t>(i)); }
    std::span<const Matrix> A() const noexcept { return A_; }
    std::span<const Matrix> B() const noexcept { return B_; }
    std::span<const Matrix> C() const noexcept { return C_; }

    /// Dual model (A_i^T, C_i^T, B_i^T); inputs and outputs swap roles.
    LpvSsModel transposed() const;

    ModelData data() const;

   private:
    LpvSsModel() = default;

    int n_x_ = 0, n_u_ = 0, n_y_ = 0, n_p_ = 0;
    std::vector<Matrix> A_, B_, C_;
};

struct ScheduledMatrices {
    Matrix A, B, C;
};

/// A(p), B(p), C(p) at a single scheduling point (p has n_p entries).
ScheduledMatrices eval_matrices(const LpvSsModel& model, const Vector& p);

struct Trajectory {
    std::vector<Vector> u;
    std::vector<Vector> p;
    std::vector<Vector> x;  // one entry longer than u
    std::vector<Vector> y;
};

/// State-space recursion from x(0) = x0 for t = 0..T, with T + 1 = u.size().
Trajectory simulate(const LpvSsModel& model, const Vector& x0, std::span<const Vector> u,
                    std::span<const Vector> p);

/// Zero-initial-state simulation; returns only y.
std::vector<Vector> simulate_outputs(const LpvSsModel& model, std::span<const Vector> u,
                                     std::span<const Vector> p);

/**
 * Output at time t from the impulse-response form
 *   y(t) = sum_{m=1}^{t} C(p(t)) A(p(t-1)) ... A(p(t-m+1)) B(p(t-m)) u(t-m),
 * evaluated by backward propagation of the row block C(p(t)) A(...) ..., so
 * the cost is linear in t. x(0) = 0 is implicit.
 */
Vector iir_response(const LpvSsModel& model, std::span<const Vector> u, std::span<const Vector> p,
                    std::size_t t);

/// Finite sequence over {0..n_p}; the empty word is valid.
struct Word {
    std::vector<int> symbols;

    std::size_t size() const noexcept { return symbols.size(); }
    bool empty() const noexcept { return symbols.empty(); }
    std::string to_string() const;

    /// Canonical order: shorter first, then lexicographic.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b);
    friend bool operator==(const Word& a, const Word& b) = default;
};

struct SubMarkovIndex {
    int q = 0;
    int q0 = 0;
    Word word;
};

/// C_q A_{j1} ... A_{jm} B_{q0} for word = j1...jm (C_q B_{q0} for the empty word).
Matrix sub_markov(const LpvSsModel& model, const SubMarkovIndex& idx);

/// Number of words of length <= max_len over n_p + 1 symbols. Throws OverflowError.
std::uint64_t word_count(int n_p, int max_len);

/// Number of sub-Markov parameters of length <= N:
/// (n_p+1) * ((n_p+1)^{N+1} - 1) / n_p * (n_p+1). Throws OverflowError.
std::uint64_t markov_count(int n_p, int N);

struct SubMarkovEntry {
    SubMarkovIndex index;
    Matrix value;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/**
 * All sub-Markov parameters with |s| <= N, ordered by (|s|, s lexicographic, q, q0).
 * Throws SizeCapError ("enumeration too large") when markov_count exceeds `cap`.
 */
std::vector<SubMarkovEntry> enumerate_sub_markov(const LpvSsModel& model, int N,
                                                 std::uint64_t cap = kDefaultEnumerationCap);

/**
 * Visits every word of length <= max_len in canonical order. The callback gets
 * the word and the first position that changed since the previous call (0
 * whenever the length grows), which is what prefix-product caches need.
 */
void for_each_word(int n_p, int max_len,
                   const std::function<void(const Word&, std::size_t changed_from)>& visit);

/// Cached left-to-right products A_{w1} A_{w2} ... for words visited in canonical order.
class PrefixProducts {
   public:
    PrefixProducts(const LpvSsModel& model, int max_len);

    void update(const Word& word, std::size_t changed_from);
    const Matrix& product() const { return stack_[len_]; }

   private:
    const LpvSsModel* model_;
    std::vector<Matrix> stack_;
    std::size_t len_ = 0;
};

}  // namespace lpvmm
