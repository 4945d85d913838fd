// lpvmm: command-line front end for LPV-SS moment-matching reduction.
//
// Exit codes: 0 success, 1 validation or check failure, 2 size-cap refusal,
// 3 two-sided rank condition failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpvmm/lpvmm.hpp"

namespace {

using namespace lpvmm;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSizeCap = 2;
constexpr int kExitRankCondition = 3;

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_g(double v) { return fmt(v, "%.17g"); }

std::uint64_t hankel_cap_from_env() {
    if (const char* env = std::getenv("LPVMM_HANKEL_CAP")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(std::string("LPVMM_HANKEL_CAP is not an integer: ") + env);
        }
    }
    return kDefaultHankelCap;
}

std::vector<ScheduleRange> parse_ranges(const std::vector<double>& flat) {
    if (flat.empty()) return {ScheduleRange{}};
    if (flat.size() % 2 != 0) throw Error("--sched-range takes lo hi pairs");
    std::vector<ScheduleRange> out;
    for (std::size_t i = 0; i < flat.size(); i += 2) out.push_back({flat[i], flat[i + 1]});
    return out;
}

std::string ranges_text(const std::vector<ScheduleRange>& ranges) {
    std::string s;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (i) s += ";";
        s += "[" + fmt_g(ranges[i].lo) + "," + fmt_g(ranges[i].hi) + "]";
    }
    return s;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
    std::filesystem::path p = out;
    p.replace_extension(".meta.json");
    return p;
}

// ---- commands -----------------------------------------------------------

int cmd_validate(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::cout << "invalid: malformed JSON: " << e.what() << "\n";
        return kExitFailure;
    }
    ModelData data;
    try {
        data = parse_model_json(doc);
    } catch (const ValidationError& e) {
        std::cout << "invalid\n";
        for (const auto& s : e.issues()) std::cout << "  - " << s << "\n";
        return kExitFailure;
    }
    if (auto issues = validation_issues(data); !issues.empty()) {
        std::cout << "invalid\n";
        for (const auto& s : issues) std::cout << "  - " << s << "\n";
        return kExitFailure;
    }
    const LpvSsModel m = LpvSsModel::from_data(std::move(data));
    std::cout << "valid: n_x=" << m.n_x() << " n_u=" << m.n_u() << " n_y=" << m.n_y()
              << " n_p=" << m.n_p() << "\n"
              << "reachable: " << (is_reachable(m, tol) ? "yes" : "no") << "\n"
              << "observable: " << (is_observable(m, tol) ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& path, int steps, std::uint64_t seed,
                 const std::vector<double>& x0_in, const std::vector<double>& sched) {
    const LpvSsModel m = load_model(path);
    ExperimentSpec spec;
    spec.seed = seed;
    spec.schedule = parse_ranges(sched);
    spec.N = 0;
    spec.horizon = std::max(steps, 1);
    spec.validate(m.n_p());

    Vector x0 = Vector::Zero(m.n_x());
    if (!x0_in.empty()) {
        if (static_cast<int>(x0_in.size()) != m.n_x()) throw DimensionError("--x0 needs n_x values");
        x0 = Eigen::Map<const Vector>(x0_in.data(), m.n_x());
    }
    const Signals sig = random_signals(spec, m.n_u(), m.n_p(), static_cast<std::size_t>(steps) + 1, 0);
    const Trajectory tr = simulate(m, x0, sig.u, sig.p);

    std::cout << "# seed=" << seed << " sched=" << ranges_text(spec.schedule) << "\n";
    std::cout << "t";
    for (int i = 0; i < m.n_u(); ++i) std::cout << ",u" << i;
    for (int i = 0; i < m.n_p(); ++i) std::cout << ",p" << i + 1;
    for (int i = 0; i < m.n_y(); ++i) std::cout << ",y" << i;
    std::cout << "\n";
    for (std::size_t t = 0; t < tr.y.size(); ++t) {
        std::cout << t;
        for (auto v : tr.u[t]) std::cout << "," << fmt_g(v);
        for (auto v : tr.p[t]) std::cout << "," << fmt_g(v);
        for (auto v : tr.y[t]) std::cout << "," << fmt_g(v);
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_markov(const std::string& path, int N, std::uint64_t cap) {
    const LpvSsModel m = load_model(path);
    const auto entries = enumerate_sub_markov(m, N, cap);
    std::cout << "# " << entries.size() << " sub-Markov parameters, |s| <= " << N << "\n";
    for (const auto& e : entries) {
        std::cout << e.index.q << " " << e.index.q0 << " " << e.index.word.to_string() << " :";
        for (Eigen::Index r = 0; r < e.value.rows(); ++r) {
            for (Eigen::Index c = 0; c < e.value.cols(); ++c) std::cout << " " << fmt_g(e.value(r, c));
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_reduce(const std::string& path, int N, const std::string& mode, double tol,
               const std::string& out) {
    const LpvSsModel m = load_model(path);
    const ReductionResult res = reduce(m, N, parse_mode(mode), tol);
    save_model(out, res.reduced);
    const auto meta_path = sidecar_path(out);
    std::ofstream(meta_path) << reduction_metadata(res).dump(2) << "\n";
    std::cout << "mode=" << to_string(res.mode) << " N=" << res.N << " order " << m.n_x() << " -> "
              << res.r << " (matches sub-Markov parameters up to length " << res.guarantee << ")\n";
    if (res.warning) std::cout << "warning: " << *res.warning << "\n";
    std::cout << "wrote " << out << " and " << meta_path.string() << "\n";
    return kExitOk;
}

int cmd_minimize(const std::string& path, double tol, const std::string& out) {
    const LpvSsModel m = load_model(path);
    const LpvSsModel min = minimize(m, tol);
    save_model(out, min);
    std::cout << "order " << m.n_x() << " -> " << min.n_x() << "\nwrote " << out << "\n";
    return kExitOk;
}

int cmd_check(const std::string& p1, const std::string& p2, int N, double tol,
              const std::string& method_name, std::uint64_t cap) {
    CheckMethod method = CheckMethod::Auto;
    if (method_name == "enumerate") method = CheckMethod::Enumerate;
    else if (method_name == "subspace") method = CheckMethod::Subspace;
    else if (method_name != "auto") throw Error("unknown --method " + method_name);

    const auto rep = check_partial_realization(load_model(p1), load_model(p2), N, tol, method, cap);
    std::cout << "N=" << rep.N << " method="
              << (rep.method == CheckMethod::Enumerate ? "enumerate" : "subspace")
              << " compared=" << rep.compared << "\n"
              << "max_abs_deviation=" << fmt(rep.max_abs_deviation, "%.3e")
              << " max_rel_deviation=" << fmt(rep.max_rel_deviation, "%.3e")
              << " tol=" << fmt(rep.tol, "%.1e") << "\n"
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitFailure;
}

struct CompareOptions {
    std::string model;
    int N = 2;
    std::string mode = "R";
    int trials = 500;
    int horizon = 50;
    std::uint64_t seed = 1;
    std::vector<double> sched;
    double tol = 0.0;
    bool json = false;
    bool timing = false;
    std::string per_trial_out;
    std::string series_out;
};

int cmd_compare(const CompareOptions& o) {
    const LpvSsModel m = load_model(o.model);
    ExperimentSpec spec;
    spec.N = o.N;
    spec.mode = parse_mode(o.mode);
    spec.trials = o.trials;
    spec.horizon = o.horizon;
    spec.seed = o.seed;
    spec.schedule = parse_ranges(o.sched);
    spec.tol = o.tol;

    const CompareReport rep = run_compare(m, spec);
    const std::size_t required = static_cast<std::size_t>(rep.guarantee) + 1;
    const bool prefix_ok = rep.min_exact_prefix >= std::min(required, rep.steps);

    if (o.json) {
        nlohmann::json j;
        j["mode"] = to_string(spec.mode);
        j["N"] = spec.N;
        j["trials"] = spec.trials;
        j["horizon"] = spec.horizon;
        j["seed"] = spec.seed;
        j["sched_range"] = ranges_text(spec.schedule);
        j["original_order"] = rep.original_order;
        j["reduced_order"] = rep.reduced_order;
        j["guarantee"] = rep.guarantee;
        j["mean_bfr"] = rep.stats.mean;
        j["best_bfr"] = rep.stats.best;
        j["worst_bfr"] = rep.stats.worst;
        j["min_exact_prefix"] = rep.min_exact_prefix;
        j["closest_to_mean_trial"] = rep.closest_to_mean;
        if (o.timing) j["reduction_seconds"] = rep.stats.reduction_seconds;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "model order " << rep.original_order << " -> " << rep.reduced_order
                  << "  (mode " << to_string(spec.mode) << ", N=" << spec.N << ")\n"
                  << "trials " << spec.trials << ", steps 0.." << rep.steps - 1 << ", seed "
                  << spec.seed << ", scheduling " << ranges_text(spec.schedule) << "\n\n"
                  << "  Mean BFR   Best BFR   Worst BFR\n"
                  << "  " << fmt(rep.stats.mean) << "    " << fmt(rep.stats.best) << "    "
                  << fmt(rep.stats.worst) << "\n\n"
                  << "exact-match prefix (min over trials): " << rep.min_exact_prefix
                  << " steps (guaranteed " << required << ")\n";
        if (o.timing) {
            std::cout << "reduction time: " << fmt(rep.stats.reduction_seconds, "%.6f") << " s\n";
        }
    }

    if (!o.per_trial_out.empty()) {
        std::ofstream f(o.per_trial_out);
        f << "trial,bfr\n";
        for (std::size_t k = 0; k < rep.stats.per_trial.size(); ++k) {
            f << k << "," << fmt_g(rep.stats.per_trial[k]) << "\n";
        }
    }
    if (!o.series_out.empty()) {
        const auto reduced = reduce(m, spec.N, spec.mode, spec.tol).reduced;
        const auto s = trial_series(m, reduced, spec, rep.closest_to_mean);
        std::ofstream f(o.series_out);
        f << "t,y,ybar\n";
        for (std::size_t t = 0; t < s.y.size(); ++t) {
            for (Eigen::Index i = 0; i < s.y[t].size(); ++i) {
                f << t << "," << fmt_g(s.y[t][i]) << "," << fmt_g(s.ybar[t][i]) << "\n";
            }
        }
    }
    return prefix_ok ? kExitOk : kExitFailure;
}

int cmd_hankel_rank(const std::string& path, int N, double tol, std::uint64_t cap) {
    const LpvSsModel m = load_model(path);
    const auto rows = extended_dimension(m.n_y(), m.n_p(), N);
    const auto cols = extended_dimension(m.n_u(), m.n_p(), N);
    std::cout << "H_{N,N}: " << rows << " x " << cols << " (O_N " << rows << " x " << m.n_x()
              << ", R_N " << m.n_x() << " x " << cols << ")\n";
    std::cout << "rank " << hankel_rank(m, N, tol, cap) << "\n";
    return kExitOk;
}

int cmd_basis(const std::string& path, int N, const std::string& kind, double tol) {
    const LpvSsModel m = load_model(path);
    SubspaceBasis b;
    if (kind == "reach") b = reach_basis(m, N, tol);
    else if (kind == "obs") b = unobs_cobasis(m, N, tol);
    else throw Error("--kind must be reach or obs");
    std::cout << "# " << kind << " N=" << N << " rank=" << b.rank << " iterations=" << b.iterations
              << "\n";
    write_matrix(std::cout, b.matrix);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment-matching model reduction for discrete-time LPV state-space models"};
    app.require_subcommand(1);

    std::string model, model2, out, mode = "R", method = "auto", kind = "reach";
    int N = 2, steps = 50;
    double tol = 0.0, check_tol = 1e-8;
    std::uint64_t seed = 1;
    std::uint64_t markov_cap = kDefaultEnumerationCap;
    std::uint64_t hankel_cap = 0;
    std::vector<double> x0, sched;
    CompareOptions cmp;

    auto* validate = app.add_subcommand("validate", "Check a model file against the format");
    validate->add_option("model", model, "Model file")->required();
    validate->add_option("--tol", tol, "Rank tolerance (0 = automatic)");

    auto* sim = app.add_subcommand("simulate", "Simulate with seeded random input and scheduling");
    sim->add_option("model", model, "Model file")->required();
    sim->add_option("--steps", steps, "Last time index")->check(CLI::NonNegativeNumber);
    sim->add_option("--seed", seed, "PRNG seed");
    sim->add_option("--x0", x0, "Initial state (n_x values)");
    sim->add_option("--sched-range", sched, "Scheduling range lo hi (one pair or one per component)");

    auto* markov = app.add_subcommand("markov", "Dump sub-Markov parameters up to length N");
    markov->add_option("model", model, "Model file")->required();
    markov->add_option("--N", N, "Maximum word length")->required()->check(CLI::NonNegativeNumber);
    markov->add_option("--cap", markov_cap, "Maximum number of parameters");

    auto* red = app.add_subcommand("reduce", "Moment-matching reduction");
    red->add_option("model", model, "Model file")->required();
    red->add_option("--N", N, "Matching depth")->required()->check(CLI::NonNegativeNumber);
    red->add_option("--mode", mode, "R, O or T");
    red->add_option("--tol", tol, "Rank tolerance (0 = automatic)");
    red->add_option("-o,--out", out, "Reduced model file")->required();

    auto* mini = app.add_subcommand("minimize", "Reachability then observability reduction");
    mini->add_option("model", model, "Model file")->required();
    mini->add_option("--tol", tol, "Rank tolerance (0 = automatic)");
    mini->add_option("-o,--out", out, "Minimal model file")->required();

    auto* check = app.add_subcommand("check", "Compare sub-Markov parameters up to length N");
    check->add_option("m1", model, "First model")->required();
    check->add_option("m2", model2, "Second model")->required();
    check->add_option("--N", N, "Maximum word length")->required()->check(CLI::NonNegativeNumber);
    check->add_option("--tol", check_tol, "Relative tolerance");
    check->add_option("--method", method, "auto, enumerate or subspace");
    check->add_option("--cap", markov_cap, "Enumeration cap");

    auto* compare = app.add_subcommand("compare", "Simulation comparison with BFR statistics");
    compare->add_option("model", cmp.model, "Model file")->required();
    compare->add_option("--N", cmp.N, "Matching depth")->check(CLI::NonNegativeNumber);
    compare->add_option("--mode", cmp.mode, "R, O or T");
    compare->add_option("--trials", cmp.trials, "Number of trials")->check(CLI::PositiveNumber);
    compare->add_option("--horizon", cmp.horizon, "Steps beyond N")->check(CLI::PositiveNumber);
    compare->add_option("--seed", cmp.seed, "PRNG seed");
    compare->add_option("--sched-range", cmp.sched, "Scheduling range lo hi");
    compare->add_option("--tol", cmp.tol, "Rank tolerance (0 = automatic)");
    compare->add_flag("--json", cmp.json, "Machine-readable report");
    compare->add_flag("--timing", cmp.timing, "Include reduction wall-clock time");
    compare->add_option("--per-trial-out", cmp.per_trial_out, "CSV of per-trial BFR");
    compare->add_option("--series-out", cmp.series_out, "CSV of y, ybar for the trial nearest the mean");

    auto* hr = app.add_subcommand("hankel-rank", "Rank of the explicit Hankel matrix H_{N,N}");
    hr->add_option("model", model, "Model file")->required();
    hr->add_option("--N", N, "Depth")->required()->check(CLI::NonNegativeNumber);
    hr->add_option("--tol", tol, "Rank tolerance (0 = automatic)");
    hr->add_option("--cap", hankel_cap, "Entry cap (default 1e6 or LPVMM_HANKEL_CAP)");

    auto* basis = app.add_subcommand("basis", "Dump a reachability basis or observability cobasis");
    basis->add_option("model", model, "Model file")->required();
    basis->add_option("--N", N, "Depth")->required()->check(CLI::NonNegativeNumber);
    basis->add_option("--kind", kind, "reach or obs");
    basis->add_option("--tol", tol, "Rank tolerance (0 = automatic)");

    auto* example = app.add_subcommand("example", "Write the seven-state benchmark model");
    example->add_option("-o,--out", out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (*validate) return cmd_validate(model, tol);
        if (*sim) return cmd_simulate(model, steps, seed, x0, sched);
        if (*markov) return cmd_markov(model, N, markov_cap);
        if (*red) return cmd_reduce(model, N, mode, tol, out);
        if (*mini) return cmd_minimize(model, tol, out);
        if (*check) return cmd_check(model, model2, N, check_tol, method, markov_cap);
        if (*compare) return cmd_compare(cmp);
        if (*hr) return cmd_hankel_rank(model, N, tol, hankel_cap ? hankel_cap : hankel_cap_from_env());
        if (*basis) return cmd_basis(model, N, kind, tol);
        if (*example) {
            save_model(out, seven_state_example());
            return kExitOk;
        }
    } catch (const SizeCapError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const RankConditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRankCondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
