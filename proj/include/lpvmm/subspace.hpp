#pragma once

#include "lpvmm/model.hpp"

namespace lpvmm {

enum class SubspaceKind { Reachability, Observability };

/**
 * Orthonormal representation of a partial reachability space (columns of an
 * n_x x r matrix V, Im V = R_N) or of the complement of a partial
 * unobservability space (rows of an r x n_x matrix W, ker W = O_N).
 */
struct SubspaceBasis {
    Matrix matrix;
    SubspaceKind kind = SubspaceKind::Reachability;
    int N = 0;
    double tol = 0.0;
    int rank = 0;
    int iterations = 0;  // expansion steps actually run before the rank settled
};

/// Singular values at or below this are treated as zero. tol == 0 selects
/// max(rows, cols) * eps * sigma_max; otherwise tol * sigma_max.
double rank_threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols, double tol);

/// SVD-based numerical rank under the rank_threshold policy.
int numerical_rank(const Matrix& m, double tol = 0.0);

/// Orthonormal basis of Im(m): U with U^T U = I, Im U = Im m, rank(m) columns.
Matrix orth(const Matrix& m, double tol = 0.0);

/// Basis of the N-partial reachability space: V = orth[B_0..B_np], then N
/// rounds of V = orth[V, A_0 V, ..., A_np V], stopping once the rank settles.
SubspaceBasis reach_basis(const LpvSsModel& model, int N, double tol = 0.0);

/// Row cobasis W with ker W equal to the N-partial unobservability space;
/// the reachability iteration run on (A_i^T, C_i^T), transposed.
SubspaceBasis unobs_cobasis(const LpvSsModel& model, int N, double tol = 0.0);

bool is_reachable(const LpvSsModel& model, double tol = 0.0);
bool is_observable(const LpvSsModel& model, double tol = 0.0);

}  // namespace lpvmm
