#pragma once

// Numerical audit of the closed-form B3 solution against the solver.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csa/qubit.hpp"
#include "csa/solver.hpp"

namespace csa {

namespace audit_flags {
inline constexpr const char* kWeightsInfeasible = "weights_infeasible";
inline constexpr const char* kInconsistent = "inconsistent";
inline constexpr const char* kSuboptimal = "suboptimal";
inline constexpr const char* kLiteralWeightsInfeasible = "literal_weights_infeasible";
inline constexpr const char* kLiteralInconsistent = "literal_inconsistent";
inline constexpr const char* kLiteralSuboptimal = "literal_suboptimal";
// Feasible claimed weights doing better than the oracle: an oracle failure.
inline constexpr const char* kBeatsOracle = "beats_oracle";
inline constexpr const char* kOracleDisagreement = "oracle_disagreement";
}  // namespace audit_flags

inline constexpr double kFeasibilityTolerance = 1e-12;
inline constexpr double kConsistencyTolerance = 1e-6;
inline constexpr double kOptimalityTolerance = 1e-4;
inline constexpr double kOracleAgreementTolerance = 2e-3;

struct ClaimCheck {
  QubitParams params;  // as given (not necessarily canonical)
  AnalyticB3Result analytic;  // evaluated at the canonical reduction
  std::vector<double> claimed_weights;  // pulled back to the labels of `params`
  double achieved_distance = 0.0;
  std::optional<double> literal_achieved_distance;
  double oracle_distance = 0.0;
  double oracle_lower_bound = 0.0;
  bool oracle_converged = false;
  std::optional<double> grid_oracle_distance;
  std::vector<double> oracle_weights;
  std::vector<std::string> flags;

  bool has_flag(const std::string& flag) const;
};

/// Compares the closed-form claim at `params` (reduced to canonical form
/// internally) against `oracle`, an optimizer result for the same target
/// over B3, and assigns the audit flags.
ClaimCheck check_claim(const QubitParams& params, const ApproximationResult& oracle,
                       const std::optional<ApproximationResult>& grid = std::nullopt);

struct AuditOptions {
  int resolution = 21;  // points per axis over a in [0,1/2], k in [0,1], phi in [0,pi/2]
  bool zero_region_only = false;
  // > 0: also run grid_oracle at this resolution at every point.
  int grid_oracle_resolution = 0;
  SolverOptions solver;  // the seed is offset by the grid index per point
};

struct AuditPoint {
  std::size_t index;  // row-major over (a, k, phi)
  ClaimCheck check;
};

struct AuditReport {
  AuditOptions options;
  std::vector<AuditPoint> points;
  std::map<std::string, std::size_t> flag_counts;

  std::size_t flagged_points() const;
};

/// Grid value `i` of `n` points spanning [lo, hi].
double grid_value(double lo, double hi, int i, int n);

AuditReport audit_analytic(const AuditOptions& options);

nlohmann::json to_json(const AuditReport& report);

}  // namespace csa
