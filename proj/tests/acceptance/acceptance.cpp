// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Lines tagged "info" are reported but do not affect the exit status.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "lpvmm/lpvmm.hpp"
#include "test_models.hpp"

using namespace lpvmm;
using namespace lpvmm::testing;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail, bool counted = true) {
    std::cout << (pass ? "PASS " : "FAIL ") << id << (counted ? "" : " (info)") << ": " << detail
              << '\n';
    if (counted && !pass) ++failures;
}

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::string order_trajectory(const LpvSsModel& m, Mode mode, bool& ok) {
    const int expect[] = {-1, -1, 3, -1, 5, -1, 7, 7, 7, 7, 7, 7, 7, 7};
    std::ostringstream os;
    ok = true;
    for (int N : {2, 4, 6, 7, 8, 9, 10, 11, 12, 13}) {
        const int r = reduce(m, N, mode).r;
        os << "N=" << N << ":" << r << ' ';
        ok = ok && r == expect[N];
    }
    return os.str();
}

void criterion_1(const LpvSsModel& ex) {
    bool ok_r = false, ok_o = false;
    Stopwatch sw;
    const auto traj_r = order_trajectory(ex, Mode::R, ok_r);
    const double t_r = sw.seconds();
    report("1 order trajectory, mode R", ok_r && t_r < 1.0,
           "expected N=2:3 N=4:5 N>=6:7, got " + traj_r + "in " + fmt(t_r, 3) + " s");

    Stopwatch sw_o;
    const auto traj_o = order_trajectory(ex, Mode::O, ok_o);
    const double t_o = sw_o.seconds();
    report("1 order trajectory, mode O", ok_o && t_o < 1.0, "got " + traj_o + "in " + fmt(t_o, 3) + " s",
           false);
}

void criterion_2(const LpvSsModel& ex, Mode mode, bool counted) {
    Stopwatch sw;
    bool ok = true;
    std::ostringstream os;
    for (int N : {2, 4}) {
        const auto red = reduce(ex, N, mode).reduced;
        const auto rep = check_partial_realization(ex, red, N, 1e-8);
        os << "N=" << N << " rel " << fmt(rep.max_rel_deviation, 3) << "; ";
        ok = ok && rep.pass;
    }
    const auto red6 = reduce(ex, 6, mode).reduced;
    const auto deep = check_partial_realization(ex, red6, 13, 1e-8, CheckMethod::Subspace);
    const auto cross = check_partial_realization(ex, red6, 6, 1e-8, CheckMethod::Enumerate);
    const auto s = find_isomorphism(ex, red6, 1e-8);
    os << "N=6 depth 13 rel " << fmt(deep.max_rel_deviation, 3) << ", depth 6 enumerated ("
       << cross.compared << " params) rel " << fmt(cross.max_rel_deviation, 3)
       << ", isomorphism " << (s ? "found" : "missing");
    ok = ok && deep.pass && cross.pass && s.has_value();
    const double t = sw.seconds();
    os << ", " << fmt(t, 3) << " s";
    report(std::string("2 partial realization, mode ") + to_string(mode), ok && t < 30.0, os.str(),
           counted);
}

void criterion_3(const LpvSsModel& ex) {
    const auto c31 = markov_count(3, 1);
    const auto c52 = markov_count(5, 2);
    std::mt19937_64 rng(3);
    const auto m3 = random_model(rng, 2, 1, 1, 3);
    const auto e31 = enumerate_sub_markov(m3, 1).size();
    const auto e52 = enumerate_sub_markov(ex, 2).size();
    report("3 sub-Markov counts", c31 == 80 && c52 == 1548 && e31 == 80 && e52 == 1548,
           "markov_count(3,1)=" + std::to_string(c31) + " markov_count(5,2)=" + std::to_string(c52) +
               " enumerated " + std::to_string(e31) + "/" + std::to_string(e52));
}

void criterion_4() {
    Stopwatch sw;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> depth(0, 4), pad(0, 2), coin(0, 2);
    int bad_check = 0, bad_output = 0, t_tested = 0, t_skipped = 0;
    double worst_rel = 0.0, worst_out = 0.0;

    for (int k = 0; k < 200; ++k) {
        std::uniform_int_distribution<int> nx(1, 6), np(1, 3), io(1, 2);
        const int n_p = np(rng), n_u = io(rng), n_y = io(rng);
        int n_x = nx(rng);
        const int extra = std::min(pad(rng), 6 - n_x);
        auto m = random_model(rng, n_x, n_u, n_y, n_p, 1.0 / std::sqrt(static_cast<double>(n_x)));
        // some instances get unreachable states so the reductions are nontrivial
        if (extra > 0 && coin(rng) == 0) m = pad_unreachable(m, extra, rng);
        const int N = depth(rng);

        for (Mode mode : {Mode::R, Mode::O, Mode::T}) {
            std::optional<ReductionResult> attempt;
            try {
                attempt = reduce(m, N, mode);
            } catch (const RankConditionError&) {
                ++t_skipped;
                continue;
            }
            const ReductionResult& res = *attempt;
            if (mode == Mode::T) ++t_tested;
            const int depth_checked = mode == Mode::T ? 2 * N : N;
            const auto rep = check_partial_realization(m, res.reduced, depth_checked, 1e-8);
            worst_rel = std::max(worst_rel, rep.max_rel_deviation);
            if (!rep.pass) ++bad_check;

            ExperimentSpec spec;
            spec.seed = static_cast<std::uint64_t>(k);
            for (int draw = 0; draw < 10; ++draw) {
                const auto sig = random_signals(spec, m.n_u(), m.n_p(),
                                                static_cast<std::size_t>(N) + 2,
                                                static_cast<std::uint64_t>(draw));
                const auto y = simulate_outputs(m, sig.u, sig.p);
                const auto yr = simulate_outputs(res.reduced, sig.u, sig.p);
                for (std::size_t t = 0; t < y.size(); ++t) {
                    const double d = y[t].size() ? (y[t] - yr[t]).cwiseAbs().maxCoeff() : 0.0;
                    worst_out = std::max(worst_out, d);
                    if (d > 1e-9) ++bad_output;
                }
            }
        }
    }
    const double t = sw.seconds();
    report("4 random property suite",
           bad_check == 0 && bad_output == 0 && t < 120.0,
           "200 models, check failures " + std::to_string(bad_check) + " (worst rel " +
               fmt(worst_rel, 3) + "), output mismatches " + std::to_string(bad_output) +
               " (worst " + fmt(worst_out, 3) + "), mode T run on " + std::to_string(t_tested) +
               " / skipped " + std::to_string(t_skipped) + " by rank condition, " + fmt(t, 3) + " s");
}

void criterion_5() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> nx(1, 5), np(1, 2), io(1, 2), depth(0, 3), coin(0, 1);
    double worst = 0.0;
    int dim_mismatch = 0;
    for (int k = 0; k < 150; ++k) {
        const int n_x = nx(rng), n_p = np(rng), N = depth(rng);
        auto m = random_model(rng, n_x, io(rng), io(rng), n_p);
        if (n_x < 5 && coin(rng)) m = pad_unreachable(m, 1, rng);

        const Matrix v = reach_basis(m, N).matrix;
        const Matrix r = extended_reach_matrix(m, N);
        const Matrix r_range = qr_range(r);
        worst = std::max({worst, projection_residual(r, v), projection_residual(v, r_range)});
        if (r_range.cols() != v.cols()) ++dim_mismatch;

        // ker W = ker O_N  <=>  row space of W = row space of O_N
        const Matrix w = unobs_cobasis(m, N).matrix;
        const Matrix o = extended_obs_matrix(m, N);
        const Matrix o_range = qr_range(o.transpose());
        const Matrix wt = w.transpose();
        worst = std::max({worst, projection_residual(o.transpose(), wt),
                          projection_residual(wt, o_range)});
        if (o_range.cols() != w.rows()) ++dim_mismatch;
    }

    int minimal = 0, rank_ok = 0;
    for (int k = 0; k < 60; ++k) {
        const int n_x = nx(rng);
        const auto m = random_model(rng, n_x, io(rng), io(rng), np(rng));
        if (!is_reachable(m) || !is_observable(m)) continue;
        ++minimal;
        if (hankel_rank(m, n_x - 1) == n_x) ++rank_ok;
    }
    report("5 subspace/oracle equivalence",
           worst <= 1e-9 && dim_mismatch == 0 && minimal > 0 && rank_ok == minimal,
           "150 instances, worst projection residual " + fmt(worst, 3) + ", dimension mismatches " +
               std::to_string(dim_mismatch) + "; rank(H)=n_x for " + std::to_string(rank_ok) + "/" +
               std::to_string(minimal) + " minimal models");
}

void criterion_6(const LpvSsModel& ex, Mode mode, bool counted) {
    Stopwatch sw;
    ExperimentSpec spec;
    spec.mode = mode;
    spec.trials = 500;
    spec.horizon = 50;
    spec.seed = 1;
    spec.N = 2;
    const auto rep2 = run_compare(ex, spec);
    spec.N = 4;
    const auto rep4 = run_compare(ex, spec);
    const double t = sw.seconds();

    const bool ok = rep2.stats.mean >= 85.0 && rep2.min_exact_prefix >= 3 &&
                    rep4.stats.mean > rep2.stats.mean && t < 60.0;
    report(std::string("6 BFR experiment, mode ") + to_string(mode), ok,
           "N=2 order " + std::to_string(rep2.reduced_order) + " mean " + fmt(rep2.stats.mean) +
               "% best " + fmt(rep2.stats.best) + "% worst " + fmt(rep2.stats.worst) +
               "% min exact prefix " + std::to_string(rep2.min_exact_prefix) + " samples; N=4 order " +
               std::to_string(rep4.reduced_order) + " mean " + fmt(rep4.stats.mean) + "%; " +
               fmt(t, 3) + " s",
           counted);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LPVMM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_7(const LpvSsModel& ex) {
    const auto rows = extended_dimension(ex.n_y(), ex.n_p(), 6);
    bool refused = false;
    try {
        (void)extended_obs_matrix(ex, 6);
    } catch (const SizeCapError&) {
        refused = true;
    }
    const auto path = std::filesystem::temp_directory_path() /
                      ("lpvmm_acceptance_" + std::to_string(::getpid()) + ".json");
    save_model(path, ex);
    const int code = run_cli("hankel-rank " + path.string() + " --N 6");
    std::filesystem::remove(path);
    report("7 hankel refusal", rows == 335922 && refused && code == 2,
           "O_6 rows " + std::to_string(rows) + ", library " + (refused ? "refused" : "built it") +
               ", CLI exit code " + std::to_string(code));
}

void criterion_8(const LpvSsModel& ex) {
    const auto padded = pad_zero_states(ex, 3);
    const auto mini = minimize(padded);
    const auto s = find_isomorphism(ex, mini, 1e-8);
    report("8 minimization", padded.n_x() == 10 && mini.n_x() == 7 && s.has_value(),
           "10-state embedding minimized to order " + std::to_string(mini.n_x()) + ", isomorphism " +
               (s ? "found" : "missing"));
}

}  // namespace

int main() {
    const auto ex = seven_state_example();
    try {
        criterion_1(ex);
        criterion_2(ex, Mode::R, true);
        criterion_2(ex, Mode::O, false);
        criterion_3(ex);
        criterion_4();
        criterion_5();
        criterion_6(ex, Mode::R, true);
        criterion_6(ex, Mode::O, false);
        criterion_7(ex);
        criterion_8(ex);
    } catch (const std::exception& e) {
        std::cout << "FAIL unexpected exception: " << e.what() << '\n';
        return 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}
