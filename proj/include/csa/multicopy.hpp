#pragma once

// Approximating rho^{(x)N} from single-copy states: correlated mixtures of
// tensor products, factorized (product) mixtures, and the N-th power of the
// single-copy optimum. Their distances satisfy d_corr <= d_fact <= d_prod.

#include <vector>

#include "json.hpp"

#include "csa/solver.hpp"

namespace csa {

inline constexpr double kTensorSetBudget = 4096;
inline constexpr std::size_t kMaxCopyDimension = 64;
inline constexpr std::size_t kFactorizedVariableBudget = 24;

/// All n-fold ordered tensor products in Kronecker order; labels are the
/// concatenated base labels. Throws std::invalid_argument past the budget.
StateSet tensor_set(const StateSet& set, int n);

struct MultiCopyProblem {
  DensityMatrix base_state;
  StateSet base_set;
  int copies = 1;

  /// rho^{(x) copies}; throws std::invalid_argument for copies < 1 or a
  /// total dimension above kMaxCopyDimension.
  DensityMatrix target() const;
};

ApproximationResult correlated_minimize(const MultiCopyProblem& prob,
                                        const SolverOptions& opts = {});

struct FactorizedOptions {
  int random_starts = 10;
  int max_sweeps = 100;
  double sweep_tolerance = 1e-10;
  int grid_resolution = 50;      // per copy, reduced to fit grid_budget
  double grid_budget = 5e4;      // max number of product-grid points
  std::uint64_t seed = 7;
  SolverOptions inner;           // used for each per-copy convex solve
};

struct FactorizedResult {
  std::vector<Weights> per_copy_weights;
  double distance = 0.0;
  bool converged = false;
  double grid_distance = 0.0;  // best product-grid value found by the cross-check
  int grid_resolution = 0;     // 0 when the cross-check was skipped
};

/// || rho^{(x)N} - (x)_j sum_i w_j[i] nu_i ||_1
double factorized_objective(const MultiCopyProblem& prob, const std::vector<std::vector<double>>& w);

/// Alternating per-copy convex solves from the single-copy optimum and
/// random starts, cross-checked on a coarse product grid. The objective is
/// not jointly convex; the result is a grid-confirmed stationary incumbent.
FactorizedResult factorized_minimize(const MultiCopyProblem& prob,
                                     const FactorizedOptions& opts = {});

/// || rho^{(x)N} - (sum_i p_i^opt nu_i)^{(x)N} ||_1 with p^opt the single-copy optimum.
double product_of_single_opt(const MultiCopyProblem& prob, const SolverOptions& opts = {});

struct ChainReport {
  int copies = 1;
  double d_corr = 0.0;
  double d_fact = 0.0;
  double d_prod = 0.0;
  ApproximationResult correlated;
  StateSet correlated_set;
  FactorizedResult factorized;
  ApproximationResult single_copy;
  std::vector<std::string> base_labels;
};

ChainReport inequality_chain_report(const MultiCopyProblem& prob, const SolverOptions& opts = {},
                                    const FactorizedOptions& fopts = {});

nlohmann::json to_json(const ChainReport& report);

}  // namespace csa
