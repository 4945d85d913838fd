#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lpvmm/lpvmm.hpp"

namespace py = pybind11;
using namespace lpvmm;

namespace {

LpvSsModel make_model(std::vector<Matrix> A, std::vector<Matrix> B, std::vector<Matrix> C) {
    if (A.empty() || B.empty() || C.empty()) throw ValidationError({"matrix lists must be non-empty"});
    ModelData d;
    d.n_x = A[0].rows();
    d.n_u = B[0].cols();
    d.n_y = C[0].rows();
    d.n_p = static_cast<long long>(A.size()) - 1;
    d.A = std::move(A);
    d.B = std::move(B);
    d.C = std::move(C);
    return LpvSsModel::from_data(std::move(d));
}

std::vector<Vector> rows_of(const Matrix& m) {
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index t = 0; t < m.rows(); ++t) out.push_back(m.row(t).transpose());
    return out;
}

Matrix stack(const std::vector<Vector>& v, Eigen::Index width) {
    Matrix out(static_cast<Eigen::Index>(v.size()), width);
    for (std::size_t t = 0; t < v.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = v[t].transpose();
    return out;
}

CheckMethod parse_method(const std::string& s) {
    if (s == "auto") return CheckMethod::Auto;
    if (s == "enumerate") return CheckMethod::Enumerate;
    if (s == "subspace") return CheckMethod::Subspace;
    throw Error("unknown check method '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_lpvmm, m) {
    m.doc() = "Moment-matching model reduction for affine LPV state-space models";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<SizeCapError>(m, "SizeCapError", base.ptr());
    py::register_exception<RankConditionError>(m, "RankConditionError", base.ptr());

    py::class_<LpvSsModel>(m, "Model")
        .def(py::init(&make_model), py::arg("A"), py::arg("B"), py::arg("C"),
             "Build from lists A_0..A_np, B_0..B_np, C_0..C_np.")
        .def_property_readonly("n_x", &LpvSsModel::n_x)
        .def_property_readonly("n_u", &LpvSsModel::n_u)
        .def_property_readonly("n_y", &LpvSsModel::n_y)
        .def_property_readonly("n_p", &LpvSsModel::n_p)
        .def_property_readonly("A", [](const LpvSsModel& s) { return std::vector<Matrix>(s.A().begin(), s.A().end()); })
        .def_property_readonly("B", [](const LpvSsModel& s) { return std::vector<Matrix>(s.B().begin(), s.B().end()); })
        .def_property_readonly("C", [](const LpvSsModel& s) { return std::vector<Matrix>(s.C().begin(), s.C().end()); })
        .def("__repr__", [](const LpvSsModel& s) {
            return "Model(n_x=" + std::to_string(s.n_x()) + ", n_u=" + std::to_string(s.n_u()) +
                   ", n_y=" + std::to_string(s.n_y()) + ", n_p=" + std::to_string(s.n_p()) + ")";
        });

    py::enum_<Mode>(m, "Mode").value("R", Mode::R).value("O", Mode::O).value("T", Mode::T);

    py::class_<ReductionResult>(m, "ReductionResult")
        .def_readonly("reduced", &ReductionResult::reduced)
        .def_readonly("mode", &ReductionResult::mode)
        .def_readonly("N", &ReductionResult::N)
        .def_readonly("r", &ReductionResult::r)
        .def_readonly("guarantee", &ReductionResult::guarantee)
        .def_readonly("V", &ReductionResult::V)
        .def_readonly("W", &ReductionResult::W)
        .def_readonly("tol", &ReductionResult::tol)
        .def_readonly("condition_number", &ReductionResult::condition_number)
        .def_readonly("warning", &ReductionResult::warning);

    py::class_<PartialRealizationReport>(m, "PartialRealizationReport")
        .def_readonly("N", &PartialRealizationReport::N)
        .def_readonly("tol", &PartialRealizationReport::tol)
        .def_readonly("compared", &PartialRealizationReport::compared)
        .def_readonly("max_abs_deviation", &PartialRealizationReport::max_abs_deviation)
        .def_readonly("max_rel_deviation", &PartialRealizationReport::max_rel_deviation)
        .def_readonly("passed", &PartialRealizationReport::pass)
        .def_property_readonly("method", [](const PartialRealizationReport& r) {
            return r.method == CheckMethod::Subspace ? "subspace" : "enumerate";
        });

    m.def("seven_state_example", &seven_state_example);
    m.def("load_model", &load_model, py::arg("path"));
    m.def("save_model", &save_model, py::arg("path"), py::arg("model"));

    m.def(
        "simulate",
        [](const LpvSsModel& s, const Matrix& u, const Matrix& p, std::optional<Vector> x0) {
            const auto us = rows_of(u), ps = rows_of(p);
            const auto traj = simulate(s, x0 ? *x0 : Vector::Zero(s.n_x()), us, ps);
            return stack(traj.y, s.n_y());
        },
        py::arg("model"), py::arg("u"), py::arg("p"), py::arg("x0") = py::none(),
        "Outputs (T x n_y) for inputs u (T x n_u) and scheduling p (T x n_p).");

    m.def(
        "sub_markov",
        [](const LpvSsModel& s, int q, std::vector<int> word, int q0) {
            return sub_markov(s, SubMarkovIndex{q, q0, Word{std::move(word)}});
        },
        py::arg("model"), py::arg("q"), py::arg("word"), py::arg("q0"));
    m.def("markov_count", &markov_count, py::arg("n_p"), py::arg("N"));

    m.def("reach_basis", [](const LpvSsModel& s, int N, double tol) { return reach_basis(s, N, tol).matrix; },
          py::arg("model"), py::arg("N"), py::arg("tol") = 0.0);
    m.def("unobs_cobasis", [](const LpvSsModel& s, int N, double tol) { return unobs_cobasis(s, N, tol).matrix; },
          py::arg("model"), py::arg("N"), py::arg("tol") = 0.0);
    m.def("is_reachable", &is_reachable, py::arg("model"), py::arg("tol") = 0.0);
    m.def("is_observable", &is_observable, py::arg("model"), py::arg("tol") = 0.0);

    m.def(
        "reduce",
        [](const LpvSsModel& s, int N, const std::string& mode, double tol) {
            return reduce(s, N, parse_mode(mode), tol);
        },
        py::arg("model"), py::arg("N"), py::arg("mode") = "R", py::arg("tol") = 0.0);
    m.def("minimize", &minimize, py::arg("model"), py::arg("tol") = 0.0);
    m.def("find_isomorphism", &find_isomorphism, py::arg("m1"), py::arg("m2"), py::arg("tol") = 1e-8);
    m.def(
        "check_partial_realization",
        [](const LpvSsModel& a, const LpvSsModel& b, int N, double tol, const std::string& method) {
            return check_partial_realization(a, b, N, tol, parse_method(method));
        },
        py::arg("m1"), py::arg("m2"), py::arg("N"), py::arg("tol") = 1e-8, py::arg("method") = "auto");

    m.def("hankel_rank", &hankel_rank, py::arg("model"), py::arg("N"), py::arg("tol") = 0.0,
          py::arg("cap") = kDefaultHankelCap);

    m.def(
        "bfr",
        [](const Matrix& y, const Matrix& ybar) { return bfr(rows_of(y), rows_of(ybar)); },
        py::arg("y"), py::arg("ybar"), "Best fit rate in percent; rows are time samples.");

    m.def(
        "compare",
        [](const LpvSsModel& s, int N, const std::string& mode, int trials, int horizon,
           std::uint64_t seed, double lo, double hi) {
            ExperimentSpec spec;
            spec.N = N;
            spec.mode = parse_mode(mode);
            spec.trials = trials;
            spec.horizon = horizon;
            spec.seed = seed;
            spec.schedule = {ScheduleRange{lo, hi}};
            const auto rep = run_compare(s, spec);
            py::dict d;
            d["per_trial"] = rep.stats.per_trial;
            d["mean"] = rep.stats.mean;
            d["best"] = rep.stats.best;
            d["worst"] = rep.stats.worst;
            d["original_order"] = rep.original_order;
            d["reduced_order"] = rep.reduced_order;
            d["guarantee"] = rep.guarantee;
            d["min_exact_prefix"] = rep.min_exact_prefix;
            d["steps"] = rep.steps;
            return d;
        },
        py::arg("model"), py::arg("N") = 2, py::arg("mode") = "R", py::arg("trials") = 500,
        py::arg("horizon") = 50, py::arg("seed") = 1, py::arg("lo") = -1.0, py::arg("hi") = 1.0);
}
