#pragma once

// JSON documents for state sets, target states and solver results.
//
// State set:
//   {"schema": 1, "dimension": d,
//    "elements": [{"label": "...", "matrix": M} | {"label": "...", "bloch": [x, y, z]}, ...]}
// where M is either d rows of d [re, im] pairs or a flat row-major list of
// d*d [re, im] pairs. Bloch elements require d = 2 and |bloch| <= 1.
//
// Target state: {"dimension": d, "matrix": M} or {"bloch": [x, y, z]}.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "csa/solver.hpp"

namespace csa {

inline constexpr int kSchemaVersion = 1;

StateSet state_set_from_json(const nlohmann::json& doc);
StateSet load_state_set(const std::filesystem::path& path);

DensityMatrix density_from_json(const nlohmann::json& doc);
DensityMatrix load_density(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json to_json(const StateSet& set);
nlohmann::json to_json(const SolverOptions& opts);
/// {distance, weights: [{label, weight}], iterations, converged, bound_gap, lower_bound}
nlohmann::json to_json(const ApproximationResult& result, const StateSet& set);

/// Reads a whole file as JSON; throws std::runtime_error with the path on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace csa
