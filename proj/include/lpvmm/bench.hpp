#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpvmm/reduce.hpp"

namespace lpvmm {

struct ScheduleRange {
    double lo = -1.0;
    double hi = 1.0;
};

struct ExperimentSpec {
    int N = 2;
    Mode mode = Mode::R;
    int trials = 500;
    int horizon = 50;  // simulate t = 0 .. N + horizon
    std::uint64_t seed = 1;
    /// One range per scheduling component, or a single range applied to all.
    std::vector<ScheduleRange> schedule{ScheduleRange{}};
    double tol = 0.0;         // rank tolerance passed to reduce
    double match_tol = 1e-9;  // exact-match threshold on outputs

    /// Throws Error on trials < 1, horizon < 1, N < 0, or bad ranges.
    void validate(int n_p) const;
};

/**
 * Best fit rate in percent:
 *   100 * max(1 - sqrt(sum |y - ybar|^2) / sqrt(sum |y - mean(y)|^2), 0).
 * A zero denominator gives 100 if the residual is also zero, else 0.
 */
double bfr(std::span<const Vector> y, std::span<const Vector> ybar);

struct Signals {
    std::vector<Vector> u;
    std::vector<Vector> p;
};

/// Deterministic in (spec.seed, trial): u ~ N(0, I), p uniform on spec.schedule.
Signals random_signals(const ExperimentSpec& spec, int n_u, int n_p, std::size_t length,
                       std::uint64_t trial);

/// Number of leading samples where |y - ybar|_inf <= tol.
std::size_t exact_prefix(std::span<const Vector> y, std::span<const Vector> ybar, double tol);

struct BfrStats {
    std::vector<double> per_trial;
    double mean = 0.0;
    double best = 0.0;
    double worst = 0.0;
    double reduction_seconds = 0.0;  // wall clock of the single reduce() call
};

BfrStats summarize(std::vector<double> per_trial, double reduction_seconds);

struct CompareReport {
    BfrStats stats;
    int original_order = 0;
    int reduced_order = 0;
    int guarantee = 0;
    std::size_t min_exact_prefix = 0;  // over all trials
    std::size_t closest_to_mean = 0;   // trial whose BFR is nearest the mean
    std::size_t steps = 0;             // samples per trial
};

/// Reduce once (timed), then simulate original and reduced from x0 = 0 for
/// every trial and score the outputs.
CompareReport run_compare(const LpvSsModel& model, const ExperimentSpec& spec);

/// Outputs of both models for one trial, for plotting.
struct TrialSeries {
    std::vector<Vector> y;
    std::vector<Vector> ybar;
};
TrialSeries trial_series(const LpvSsModel& model, const LpvSsModel& reduced,
                         const ExperimentSpec& spec, std::uint64_t trial);

/**
 * Seven-state, five-parameter SISO benchmark: A_i has two nonzero entries in
 * row i+1 (columns i+1, i+2), B_0..B_5 = e7, e6, e5, e1, e2, e3 and every
 * C_i = e1^T. Minimal.
 */
LpvSsModel seven_state_example();

}  // namespace lpvmm
