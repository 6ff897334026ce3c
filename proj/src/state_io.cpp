#include "csa/state_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "csa/qubit.hpp"

namespace csa {

namespace {

using nlohmann::json;

void check_schema(const json& doc) {
  if (doc.contains("schema") && doc.at("schema") != kSchemaVersion) {
    throw std::invalid_argument("unsupported schema version " + doc.at("schema").dump());
  }
}

Complex parse_complex(const json& pair) {
  if (pair.is_number()) return {pair.get<double>(), 0.0};
  if (!pair.is_array() || pair.size() != 2) {
    throw std::invalid_argument("matrix entries must be [re, im] pairs");
  }
  return {pair.at(0).get<double>(), pair.at(1).get<double>()};
}

// Nested form: rows of [re, im] pairs. Flat form: row-major [re, im] pairs.
bool is_nested(const json& m) {
  return m.is_array() && !m.empty() && m.at(0).is_array() && !m.at(0).empty() &&
         m.at(0).at(0).is_array();
}

ComplexMatrix parse_matrix(const json& m, std::size_t dim) {
  if (!m.is_array()) throw std::invalid_argument("matrix must be an array");
  std::vector<Complex> entries;
  entries.reserve(dim * dim);
  if (is_nested(m)) {
    if (m.size() != dim) throw std::invalid_argument("matrix must have " + std::to_string(dim) + " rows");
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != dim) {
        throw std::invalid_argument("matrix rows must have " + std::to_string(dim) + " entries");
      }
      for (const auto& e : row) entries.push_back(parse_complex(e));
    }
  } else {
    if (m.size() != dim * dim) {
      throw std::invalid_argument("flat matrix must have " + std::to_string(dim * dim) + " entries");
    }
    for (const auto& e : m) entries.push_back(parse_complex(e));
  }
  return ComplexMatrix(dim, std::move(entries));
}

DensityMatrix parse_bloch(const json& b) {
  if (!b.is_array() || b.size() != 3) throw std::invalid_argument("bloch must be [x, y, z]");
  return qubit_from_bloch({b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>()});
}

DensityMatrix parse_state(const json& e, std::optional<std::size_t> dim) {
  if (e.contains("bloch")) {
    if (dim && *dim != 2) throw std::invalid_argument("bloch states require dimension 2");
    return parse_bloch(e.at("bloch"));
  }
  if (!e.contains("matrix")) throw std::invalid_argument("state needs \"matrix\" or \"bloch\"");
  const auto& m = e.at("matrix");
  if (!dim) {
    if (is_nested(m)) {
      dim = m.size();
    } else {
      const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.size()))));
      if (d == 0 || d * d != m.size()) throw std::invalid_argument("cannot infer matrix dimension");
      dim = d;
    }
  }
  return DensityMatrix(parse_matrix(m, *dim));
}

}  // namespace

StateSet state_set_from_json(const json& doc) {
  check_schema(doc);
  if (!doc.contains("elements") || !doc.at("elements").is_array() || doc.at("elements").empty()) {
    throw std::invalid_argument("state set needs a nonempty \"elements\" array");
  }
  std::optional<std::size_t> dim;
  if (doc.contains("dimension")) {
    const auto d = doc.at("dimension").get<long long>();
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    dim = static_cast<std::size_t>(d);
  }
  std::vector<DensityMatrix> states;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < doc.at("elements").size(); ++i) {
    const auto& e = doc.at("elements").at(i);
    labels.push_back(e.contains("label") ? e.at("label").get<std::string>() : std::to_string(i));
    try {
      states.push_back(parse_state(e, dim));
    } catch (const std::exception& ex) {
      throw std::invalid_argument("element " + labels.back() + ": " + ex.what());
    }
  }
  return StateSet(std::move(states), std::move(labels));
}

DensityMatrix density_from_json(const json& doc) {
  check_schema(doc);
  std::optional<std::size_t> dim;
  if (doc.contains("dimension")) dim = doc.at("dimension").get<std::size_t>();
  return parse_state(doc, dim);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

StateSet load_state_set(const std::filesystem::path& path) {
  return state_set_from_json(read_json_file(path));
}

DensityMatrix load_density(const std::filesystem::path& path) {
  return density_from_json(read_json_file(path));
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const StateSet& set) {
  json elements = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    elements.push_back({{"label", set.labels()[i]}, {"matrix", matrix_to_json(set[i].matrix())}});
  }
  return {{"schema", kSchemaVersion}, {"dimension", set.dim()}, {"elements", std::move(elements)}};
}

json to_json(const SolverOptions& opts) {
  json j = {{"step_scale", opts.step_scale},
            {"max_iterations", opts.max_iterations},
            {"polish_iterations", opts.polish_iterations},
            {"random_restarts", opts.random_restarts},
            {"seed", opts.seed},
            {"perturbation_checks", opts.perturbation_checks},
            {"perturbation_norm", opts.perturbation_norm},
            {"improvement_tolerance", opts.improvement_tolerance},
            {"gap_tolerance", opts.gap_tolerance}};
  if (opts.warm_start) j["warm_start"] = *opts.warm_start;
  return j;
}

json to_json(const ApproximationResult& result, const StateSet& set) {
  json weights = json::array();
  for (std::size_t i = 0; i < result.weights.size(); ++i) {
    weights.push_back({{"label", set.labels().at(i)}, {"weight", result.weights[i]}});
  }
  return {{"distance", result.distance},
          {"weights", std::move(weights)},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"bound_gap", result.bound_gap},
          {"lower_bound", result.lower_bound}};
}

}  // namespace csa
