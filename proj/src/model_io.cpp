#include "lpvmm/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace lpvmm {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {"n_x", "n_u", "n_y", "n_p", "A", "B", "C"};

Matrix parse_matrix(const json& j, long long rows, long long cols, const std::string& where,
                    std::vector<std::string>& issues) {
    if (!j.is_array()) {
        issues.push_back(where + " is not an array of rows");
        return {};
    }
    if (static_cast<long long>(j.size()) != rows) {
        issues.push_back("dimension mismatch: " + where + " has " + std::to_string(j.size()) +
                         " rows, expected " + std::to_string(rows));
        return {};
    }
    Matrix m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<long long>(row.size()) != cols) {
            issues.push_back("dimension mismatch: " + where + " row " + std::to_string(r) +
                             " is not an array of " + std::to_string(cols) + " numbers");
            return {};
        }
        for (long long c = 0; c < cols; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                issues.push_back(where + " entry (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") is not a number");
                return {};
            }
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

std::vector<Matrix> parse_family(const json& doc, const char* key, long long rows, long long cols,
                                 std::vector<std::string>& issues) {
    std::vector<Matrix> out;
    const json& j = doc.at(key);
    if (!j.is_array()) {
        issues.push_back(std::string(key) + " is not an array of matrices");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        Matrix m = parse_matrix(j[i], rows, cols, std::string(key) + "_" + std::to_string(i), issues);
        if (m.rows() == rows && m.cols() == cols) out.push_back(std::move(m));
    }
    if (out.size() != j.size()) out.clear();  // shape issues already reported
    return out;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ModelData parse_model_json(const json& doc) {
    std::vector<std::string> issues;
    if (!doc.is_object()) throw ValidationError({"model document is not a JSON object"});
    for (const auto& [key, _] : doc.items()) {
        if (!kKeys.count(key)) issues.push_back("unknown field '" + key + "'");
    }
    for (const auto& key : kKeys) {
        if (!doc.contains(key)) issues.push_back("missing field '" + key + "'");
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    ModelData d;
    for (auto [key, dst] : {std::pair{"n_x", &d.n_x}, {"n_u", &d.n_u}, {"n_y", &d.n_y},
                            {"n_p", &d.n_p}}) {
        const json& v = doc.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            issues.push_back(std::string(key) + " must be a nonnegative integer");
        } else {
            *dst = v.get<long long>();
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    d.A = parse_family(doc, "A", d.n_x, d.n_x, issues);
    d.B = parse_family(doc, "B", d.n_x, d.n_u, issues);
    d.C = parse_family(doc, "C", d.n_y, d.n_x, issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return d;
}

LpvSsModel model_from_json(const json& doc) { return LpvSsModel::from_data(parse_model_json(doc)); }

json model_to_json(const LpvSsModel& model) {
    json doc;
    doc["n_x"] = model.n_x();
    doc["n_u"] = model.n_u();
    doc["n_y"] = model.n_y();
    doc["n_p"] = model.n_p();
    for (auto [key, family] : {std::pair{"A", model.A()}, {"B", model.B()}, {"C", model.C()}}) {
        json arr = json::array();
        for (const auto& m : family) arr.push_back(matrix_to_json(m));
        doc[key] = std::move(arr);
    }
    return doc;
}

LpvSsModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError({"malformed JSON in " + path.string() + ": " + e.what()});
    }
    return model_from_json(doc);
}

void save_model(const std::filesystem::path& path, const LpvSsModel& model) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write model file " + path.string());
    out << model_to_json(model).dump(2) << '\n';
}

json reduction_metadata(const ReductionResult& result) {
    json meta;
    meta["mode"] = to_string(result.mode);
    meta["N"] = result.N;
    meta["r"] = result.r;
    meta["guarantee"] = result.guarantee;
    meta["tol"] = result.tol;
    meta["condition_number"] = result.condition_number;
    meta["warning"] = result.warning ? json(*result.warning) : json(nullptr);
    return meta;
}

void write_matrix(std::ostream& os, const Matrix& m) {
    char buf[32];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            os << (c ? " " : "") << buf;
        }
        os << '\n';
    }
}

}  // namespace lpvmm
