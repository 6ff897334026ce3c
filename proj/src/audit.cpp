#include "csa/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csa/parallel.hpp"
#include "csa/state_io.hpp"

namespace csa {

namespace {

bool approximately_feasible(std::span<const double> w) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= -kFeasibilityTolerance)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= kFeasibilityTolerance;
}

void add_flag(std::vector<std::string>& flags, const char* flag) {
  if (std::find(flags.begin(), flags.end(), flag) == flags.end()) flags.emplace_back(flag);
}

}  // namespace

bool ClaimCheck::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

ClaimCheck check_claim(const QubitParams& params, const ApproximationResult& oracle,
                       const std::optional<ApproximationResult>& grid) {
  const auto canonical = canonical_reduce(params);
  const StateSet b3 = pauli_b3_set();
  const DensityMatrix rho = qubit_from_params(params);

  ClaimCheck out;
  out.params = params;
  out.analytic = analytic_b3(canonical.params);
  out.claimed_weights = canonical.pull_back(out.analytic.claimed_weights);
  out.achieved_distance = distance_to_mixture(rho, b3, out.claimed_weights);
  out.oracle_distance = oracle.distance;
  out.oracle_lower_bound = oracle.lower_bound;
  out.oracle_converged = oracle.converged;
  out.oracle_weights.assign(oracle.weights.values().begin(), oracle.weights.values().end());
  if (grid) {
    out.grid_oracle_distance = grid->distance;
    if (std::abs(grid->distance - oracle.distance) > kOracleAgreementTolerance) {
      add_flag(out.flags, audit_flags::kOracleDisagreement);
    }
    if (grid->distance < out.oracle_distance) {
      out.oracle_distance = grid->distance;
      out.oracle_weights.assign(grid->weights.values().begin(), grid->weights.values().end());
    }
  }

  const double claimed = out.analytic.claimed_distance;
  const bool feasible = approximately_feasible(out.claimed_weights);
  if (!feasible) add_flag(out.flags, audit_flags::kWeightsInfeasible);
  if (!std::isfinite(claimed) || std::abs(claimed - out.achieved_distance) > kConsistencyTolerance) {
    add_flag(out.flags, audit_flags::kInconsistent);
  }
  if (out.achieved_distance > out.oracle_distance + kOptimalityTolerance) {
    add_flag(out.flags, audit_flags::kSuboptimal);
  }
  if (feasible && out.achieved_distance < out.oracle_distance - kOptimalityTolerance) {
    add_flag(out.flags, audit_flags::kBeatsOracle);
  }

  if (out.analytic.literal_radical_weights) {
    const auto literal = canonical.pull_back(*out.analytic.literal_radical_weights);
    const double achieved = distance_to_mixture(rho, b3, literal);
    out.literal_achieved_distance = achieved;
    const bool literal_feasible = approximately_feasible(literal);
    if (!literal_feasible) add_flag(out.flags, audit_flags::kLiteralWeightsInfeasible);
    if (!std::isfinite(claimed) || std::abs(claimed - achieved) > kConsistencyTolerance) {
      add_flag(out.flags, audit_flags::kLiteralInconsistent);
    }
    if (achieved > out.oracle_distance + kOptimalityTolerance) {
      add_flag(out.flags, audit_flags::kLiteralSuboptimal);
    }
    if (literal_feasible && achieved < out.oracle_distance - kOptimalityTolerance) {
      add_flag(out.flags, audit_flags::kBeatsOracle);
    }
  }
  return out;
}

std::size_t AuditReport::flagged_points() const {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [](const AuditPoint& p) { return !p.check.flags.empty(); }));
}

double grid_value(double lo, double hi, int i, int n) {
  if (n == 1) return lo;
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

AuditReport audit_analytic(const AuditOptions& options) {
  if (options.resolution < 2) throw std::invalid_argument("audit: resolution must be >= 2");
  const int n = options.resolution;
  const StateSet b3 = pauli_b3_set();

  std::vector<std::pair<std::size_t, QubitParams>> grid;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const QubitParams p{grid_value(0.0, 0.5, i, n), grid_value(0.0, 1.0, j, n),
                            grid_value(0.0, std::numbers::pi / 2.0, l, n)};
        if (options.zero_region_only && !zero_distance_condition(p)) continue;
        grid.emplace_back(static_cast<std::size_t>((i * n + j) * n + l), p);
      }
    }
  }

  AuditReport report;
  report.options = options;
  std::vector<std::optional<AuditPoint>> slots(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) {
    const auto& [index, params] = grid[g];
    SolverOptions solver = options.solver;
    solver.seed = options.solver.seed + index;
    const DensityMatrix rho = qubit_from_params(params);
    const auto oracle = minimize(rho, b3, solver);
    std::optional<ApproximationResult> brute;
    if (options.grid_oracle_resolution > 0) {
      brute = grid_oracle(rho, b3, options.grid_oracle_resolution);
    }
    slots[g] = AuditPoint{index, check_claim(params, oracle, brute)};
  });

  report.points.reserve(slots.size());
  for (auto& s : slots) {
    for (const auto& f : s->check.flags) ++report.flag_counts[f];
    report.points.push_back(std::move(*s));
  }
  return report;
}

nlohmann::json to_json(const AuditReport& report) {
  using nlohmann::json;
  json points = json::array();
  for (const auto& pt : report.points) {
    const auto& c = pt.check;
    json j = {{"index", pt.index},
              {"a", c.params.a},
              {"k", c.params.k},
              {"phi", c.params.phi},
              {"case_label", std::string(to_string(c.analytic.case_label))},
              {"claimed_distance", c.analytic.claimed_distance},
              {"achieved_distance", c.achieved_distance},
              {"oracle_distance", c.oracle_distance},
              {"oracle_lower_bound", c.oracle_lower_bound},
              {"oracle_converged", c.oracle_converged},
              {"claimed_weights", c.claimed_weights},
              {"oracle_weights", c.oracle_weights},
              {"flags", c.flags}};
    if (c.analytic.phi_threshold) j["phi_threshold"] = *c.analytic.phi_threshold;
    if (c.literal_achieved_distance) j["literal_achieved_distance"] = *c.literal_achieved_distance;
    if (c.grid_oracle_distance) j["grid_oracle_distance"] = *c.grid_oracle_distance;
    points.push_back(std::move(j));
  }
  json counts = json::object();
  for (const auto& [flag, count] : report.flag_counts) counts[flag] = count;
  return {{"schema", kSchemaVersion},
          {"kind", "audit"},
          {"resolution", report.options.resolution},
          {"zero_region_only", report.options.zero_region_only},
          {"grid_oracle_resolution", report.options.grid_oracle_resolution},
          {"solver", to_json(report.options.solver)},
          {"summary",
           {{"points", report.points.size()},
            {"flagged_points", report.flagged_points()},
            {"flag_counts", std::move(counts)}}},
          {"points", std::move(points)}};
}

}  // namespace csa
