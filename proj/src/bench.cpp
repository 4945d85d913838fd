#include "lpvmm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>

namespace lpvmm {

void ExperimentSpec::validate(int n_p) const {
    if (N < 0) throw Error("N must be nonnegative");
    if (trials < 1) throw Error("trials must be at least 1");
    if (horizon < 1) throw Error("horizon must be at least 1");
    if (schedule.size() != 1 && schedule.size() != static_cast<std::size_t>(n_p)) {
        throw Error("schedule needs one range or one per scheduling component (" +
                    std::to_string(n_p) + ")");
    }
    for (const auto& r : schedule) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
            throw Error("scheduling range must be finite with lo <= hi");
        }
    }
}

double bfr(std::span<const Vector> y, std::span<const Vector> ybar) {
    if (y.size() != ybar.size()) throw DimensionError("bfr: sequences differ in length");
    if (y.empty()) throw DimensionError("bfr: empty sequence");
    const auto dim = y.front().size();
    Vector mean = Vector::Zero(dim);
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (y[t].size() != dim || ybar[t].size() != dim) {
            throw DimensionError("bfr: output dimensions differ");
        }
        mean += y[t];
    }
    mean /= static_cast<double>(y.size());

    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        num += (y[t] - ybar[t]).squaredNorm();
        den += (y[t] - mean).squaredNorm();
    }
    if (den == 0.0) return num == 0.0 ? 100.0 : 0.0;
    return 100.0 * std::max(1.0 - std::sqrt(num) / std::sqrt(den), 0.0);
}

Signals random_signals(const ExperimentSpec& spec, int n_u, int n_p, std::size_t length,
                       std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<std::uniform_real_distribution<double>> uniform;
    for (int i = 0; i < n_p; ++i) {
        const auto& r = spec.schedule.size() == 1 ? spec.schedule.front() : spec.schedule[i];
        uniform.emplace_back(r.lo, r.hi);
    }

    Signals s;
    s.u.reserve(length);
    s.p.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        Vector u(n_u), p(n_p);
        for (int i = 0; i < n_u; ++i) u[i] = normal(rng);
        for (int i = 0; i < n_p; ++i) p[i] = uniform[i](rng);
        s.u.push_back(std::move(u));
        s.p.push_back(std::move(p));
    }
    return s;
}

std::size_t exact_prefix(std::span<const Vector> y, std::span<const Vector> ybar, double tol) {
    const std::size_t n = std::min(y.size(), ybar.size());
    std::size_t t = 0;
    while (t < n && (y[t].size() == 0 || (y[t] - ybar[t]).cwiseAbs().maxCoeff() <= tol)) ++t;
    return t;
}

BfrStats summarize(std::vector<double> per_trial, double reduction_seconds) {
    BfrStats s;
    s.reduction_seconds = reduction_seconds;
    if (!per_trial.empty()) {
        s.mean = std::accumulate(per_trial.begin(), per_trial.end(), 0.0) /
                 static_cast<double>(per_trial.size());
        const auto [lo, hi] = std::minmax_element(per_trial.begin(), per_trial.end());
        s.worst = *lo;
        s.best = *hi;
        // guard the ordering against summation round-off on constant samples
        s.mean = std::clamp(s.mean, s.worst, s.best);
    }
    s.per_trial = std::move(per_trial);
    return s;
}

TrialSeries trial_series(const LpvSsModel& model, const LpvSsModel& reduced,
                         const ExperimentSpec& spec, std::uint64_t trial) {
    const auto steps = static_cast<std::size_t>(spec.N + spec.horizon) + 1;
    const Signals sig = random_signals(spec, model.n_u(), model.n_p(), steps, trial);
    return {simulate_outputs(model, sig.u, sig.p), simulate_outputs(reduced, sig.u, sig.p)};
}

CompareReport run_compare(const LpvSsModel& model, const ExperimentSpec& spec) {
    spec.validate(model.n_p());

    const auto start = std::chrono::steady_clock::now();
    const ReductionResult red = reduce(model, spec.N, spec.mode, spec.tol);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    CompareReport rep;
    rep.original_order = model.n_x();
    rep.reduced_order = red.r;
    rep.guarantee = red.guarantee;
    rep.steps = static_cast<std::size_t>(spec.N + spec.horizon) + 1;
    rep.min_exact_prefix = rep.steps;

    std::vector<double> per_trial;
    per_trial.reserve(static_cast<std::size_t>(spec.trials));
    for (int k = 0; k < spec.trials; ++k) {
        const TrialSeries s = trial_series(model, red.reduced, spec, static_cast<std::uint64_t>(k));
        per_trial.push_back(bfr(s.y, s.ybar));
        rep.min_exact_prefix = std::min(rep.min_exact_prefix, exact_prefix(s.y, s.ybar, spec.match_tol));
    }
    rep.stats = summarize(std::move(per_trial), seconds);

    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.stats.per_trial.size(); ++k) {
        const double gap = std::abs(rep.stats.per_trial[k] - rep.stats.mean);
        if (gap < best_gap) {
            best_gap = gap;
            rep.closest_to_mean = k;
        }
    }
    return rep;
}

LpvSsModel seven_state_example() {
    constexpr int n = 7, np = 5;
    // (diagonal, superdiagonal) entries placed in row i of A_i
    constexpr double coeffs[np + 1][2] = {{-0.5, 0.5471}, {0.3, 0.2285},  {-0.4, 0.4741},
                                          {-0.7, 0.9362}, {0.5, 0.4367}, {0.1, 0.0573}};
    constexpr int input_state[np + 1] = {6, 5, 4, 0, 1, 2};

    ModelData d{n, 1, 1, np, {}, {}, {}};
    for (int i = 0; i <= np; ++i) {
        Matrix a = Matrix::Zero(n, n);
        a(i, i) = coeffs[i][0];
        a(i, i + 1) = coeffs[i][1];
        Matrix b = Matrix::Zero(n, 1);
        b(input_state[i], 0) = 1.0;
        Matrix c = Matrix::Zero(1, n);
        c(0, 0) = 1.0;
        d.A.push_back(std::move(a));
        d.B.push_back(std::move(b));
        d.C.push_back(std::move(c));
    }
    return LpvSsModel::from_data(std::move(d));
}

}  // namespace lpvmm
