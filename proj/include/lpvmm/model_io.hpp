#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "lpvmm/reduce.hpp"

namespace lpvmm {

/**
 * Model files are JSON documents with exactly these keys:
 *
 *   { "n_x": 2, "n_u": 1, "n_y": 1, "n_p": 1,
 *     "A": [ [[a00, a01], [a10, a11]],  [[...], [...]] ],   // n_p+1 matrices
 *     "B": [ [[b0], [b1]], ... ],
 *     "C": [ [[c0, c1]], ... ] }
 *
 * Matrices are arrays of rows; index 0 is the constant term. Unknown keys,
 * missing keys and ragged or mistyped arrays are rejected.
 */
ModelData parse_model_json(const nlohmann::json& doc);
LpvSsModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const LpvSsModel& model);

LpvSsModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const LpvSsModel& model);

/// Sidecar describing how a reduced model was produced.
nlohmann::json reduction_metadata(const ReductionResult& result);

/// Plain whitespace-separated matrix text: one row per line, %.17g entries.
void write_matrix(std::ostream& os, const Matrix& m);

}  // namespace lpvmm
