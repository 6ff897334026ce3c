#pragma once

// Optimal convex approximation of a density matrix by mixtures of a finite
// state set: minimize || rho - sum_i p_i nu_i ||_1 over the probability simplex.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csa/linalg.hpp"

namespace csa {

/// Ordered, labeled, nonempty list of same-dimension density matrices.
class StateSet {
 public:
  StateSet(std::vector<DensityMatrix> elements, std::vector<std::string> labels);

  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const DensityMatrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<DensityMatrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<DensityMatrix> elements_;
  std::vector<std::string> labels_;
};

/// Probability vector: entries >= 0 summing to one within 1e-12.
class Weights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit Weights(std::vector<double> values);
  static Weights vertex(std::size_t size, std::size_t index);
  static Weights uniform(std::size_t size);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// Whether `values` would be accepted by the constructor.
  static bool is_feasible(std::span<const double> values, double tolerance = kSumTolerance);

 private:
  std::vector<double> values_;
};

struct SolverOptions {
  double step_scale = 0.1;        // step = step_scale / sqrt(t)
  int max_iterations = 20000;     // per start
  int polish_iterations = 2000;   // Polyak steps from the incumbent
  int random_restarts = 5;        // in addition to the nearest-vertex start
  std::uint64_t seed = 20170801;
  int perturbation_checks = 20;
  double perturbation_norm = 1e-3;
  double improvement_tolerance = 1e-6;
  // Stop as soon as distance - certified lower bound drops below this.
  double gap_tolerance = 1e-10;
  // Optional extra start, tried before the nearest vertex.
  std::optional<std::vector<double>> warm_start;
};

struct ApproximationResult {
  Weights weights;
  double distance = 0.0;
  long long iterations = 0;
  bool converged = false;
  // distance minus the best certified lower bound on the optimum
  double bound_gap = 0.0;
  double lower_bound = 0.0;
};

/// sum_i p_i nu_i for arbitrary real coefficients (not checked for feasibility).
ComplexMatrix mixture(const StateSet& set, std::span<const double> p);

/// || rho - sum_i p_i nu_i ||_1 for arbitrary real coefficients.
double distance_to_mixture(const DensityMatrix& rho, const StateSet& set,
                           std::span<const double> p);

double objective(const DensityMatrix& rho, const StateSet& set, const Weights& p);

/// Component i is -Tr[S nu_i], S = sum_j sign(lambda_j) P_j from the
/// eigendecomposition of rho - sum_i p_i nu_i; sign(lambda) = 0 for |lambda| < 1e-12.
std::vector<double> subgradient(const DensityMatrix& rho, const StateSet& set, const Weights& p);

/// Best lower bound on the optimal distance certified by the sign operator at p:
/// max(0, min_i Tr[S (rho - nu_i)]).
double dual_lower_bound(const DensityMatrix& rho, const StateSet& set, const Weights& p);

/// Euclidean projection onto the probability simplex (sort and threshold).
Weights project_simplex(std::span<const double> v);

/// Projected subgradient descent with c/sqrt(t) steps, iterate averaging and
/// restarts. Non-convergence is reported through `converged`, never thrown.
ApproximationResult minimize(const DensityMatrix& rho, const StateSet& set,
                             const SolverOptions& opts = {});

/// Exhaustive search over the simplex grid with spacing 1/resolution followed
/// by three rounds of local grid halving around the incumbent. Throws
/// std::invalid_argument when the set has more than six elements at
/// resolution >= 50, or the grid exceeds the enumeration budget.
ApproximationResult grid_oracle(const DensityMatrix& rho, const StateSet& set, int resolution);

/// Number of points of the simplex grid for `size` weights at `resolution`.
double simplex_grid_size(std::size_t size, int resolution);

}  // namespace csa
