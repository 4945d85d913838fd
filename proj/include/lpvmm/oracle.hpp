#pragma once

#include <cstdint>
#include <vector>

#include "lpvmm/model.hpp"

namespace lpvmm {

/// Default limit on entries of any explicitly built Hankel-type matrix.
inline constexpr std::uint64_t kDefaultHankelCap = 1'000'000;

/// Column count of R_N (equivalently row count of O_N for n_y outputs):
/// width * (n_p+1) * ((n_p+1)^{N+1} - 1) / n_p. Throws OverflowError.
std::uint64_t extended_dimension(int width, int n_p, int N);

/**
 * Explicit N-step extended reachability matrix. Column block (w, q0), taken in
 * canonical word order then q0, holds A_{w1} ... A_{wk} B_{q0}.
 * Throws SizeCapError ("hankel too large") when n_x * columns exceeds `cap`.
 */
Matrix extended_reach_matrix(const LpvSsModel& model, int N,
                             std::uint64_t cap = kDefaultHankelCap);

/// Explicit extended observability matrix; row block (w, q) holds C_q A_{w1} ... A_{wk}.
Matrix extended_obs_matrix(const LpvSsModel& model, int N, std::uint64_t cap = kDefaultHankelCap);

struct HankelBlock {
    Eigen::Index row = 0;  // first row of the block in H
    Eigen::Index col = 0;  // first column of the block in H
    SubMarkovIndex index;  // H block equals this sub-Markov parameter
};

struct HankelArtifacts {
    Matrix R;  // extended reachability matrix
    Matrix O;  // extended observability matrix
    Matrix H;  // O * R
    int N = 0;
    std::vector<HankelBlock> blocks;
};

/// H_{N,N} = O_N R_N with block addressing. Every factor and H itself obey `cap`.
HankelArtifacts hankel(const LpvSsModel& model, int N, std::uint64_t cap = kDefaultHankelCap);

/// Numerical rank of H_{N,N} under the SVD rank_threshold policy.
int hankel_rank(const LpvSsModel& model, int N, double tol = 0.0,
                std::uint64_t cap = kDefaultHankelCap);

}  // namespace lpvmm
