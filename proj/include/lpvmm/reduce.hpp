#pragma once

#include <optional>
#include <string>

#include "lpvmm/subspace.hpp"

namespace lpvmm {

/// R projects on the reachability space, O on the observability cobasis, T uses both.
enum class Mode { R, O, T };

std::string to_string(Mode mode);
/// Accepts "R"/"O"/"T" (case-insensitive). Throws Error otherwise.
Mode parse_mode(const std::string& text);

inline constexpr double kIllConditionedLimit = 1e12;

struct ReductionResult {
    LpvSsModel reduced;
    Mode mode = Mode::R;
    int N = 0;
    int r = 0;
    int guarantee = 0;  // sub-Markov length matched: N (R, O) or 2N (T)
    Matrix V;           // modes R, T
    Matrix W;           // modes O, T
    double tol = 0.0;
    double condition_number = 1.0;  // of WV in mode T, 1 otherwise
    std::optional<std::string> warning;
};

/**
 * Moment matching by projection.
 *
 *  - R: V orthonormal with Im V = R_N; A_i -> V^T A_i V, B_i -> V^T B_i, C_i -> C_i V.
 *  - O: W orthonormal rows with ker W = O_N; A_i -> W A_i W^T, B_i -> W B_i, C_i -> C_i W^T.
 *  - T: both; requires rank V = rank W = rank WV and yields a 2N-partial realization.
 *
 * Throws RankConditionError when mode T's rank condition fails.
 */
ReductionResult reduce(const LpvSsModel& model, int N, Mode mode, double tol = 0.0);

/// Reachability reduction followed by observability reduction, each with
/// N = current order - 1. The result is reachable, observable and realizes
/// the same input-output map.
LpvSsModel minimize(const LpvSsModel& model, double tol = 0.0);

/**
 * State transformation S with A2_i S = S A1_i, B2_i = S B1_i, C2_i S = C1_i.
 * Both models must be minimal at `tol` and of equal order, otherwise nullopt.
 * S is built from matching reachability columns of both models and then checked
 * against all three relation families; nullopt when the check fails.
 */
std::optional<Matrix> find_isomorphism(const LpvSsModel& m1, const LpvSsModel& m2,
                                       double tol = 1e-8);

enum class CheckMethod { Auto, Enumerate, Subspace };

struct PartialRealizationReport {
    int N = 0;
    double tol = 0.0;
    CheckMethod method = CheckMethod::Enumerate;  // route actually taken
    std::uint64_t compared = 0;                   // parameters enumerated (0 for Subspace)
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
    bool pass = false;
};

/**
 * Do m1 and m2 share every sub-Markov parameter of length <= N?
 *
 * Enumerate compares all parameters directly; relative deviation is the largest
 * absolute difference over the largest parameter magnitude. Subspace forms the
 * joint difference model (A1 (+) A2, [B1; B2], [C1, -C2]), whose parameters of
 * length <= N vanish exactly when every C_q annihilates its N-partial
 * reachability space; the deviation reported is max_q |C_q V| (relative to
 * max_q |[C1_q, C2_q]|). Auto enumerates when the count fits `cap`.
 */
PartialRealizationReport check_partial_realization(const LpvSsModel& m1, const LpvSsModel& m2,
                                                   int N, double tol,
                                                   CheckMethod method = CheckMethod::Auto,
                                                   std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace lpvmm
