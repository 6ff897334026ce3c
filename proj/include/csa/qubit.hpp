#pragma once

// Closed-form qubit results for approximation by the sigma_z basis (B1) and
// by the six Pauli eigenstates (B3). The B3 formulas outside the
// exact-decomposition region are claims to be audited, not ground truth.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csa/linalg.hpp"
#include "csa/solver.hpp"

namespace csa {

/// rho = [[1-a, k sqrt(a(1-a)) e^{-i phi}], [k sqrt(a(1-a)) e^{i phi}, a]]
struct QubitParams {
  double a = 0.0;    // [0, 1]
  double k = 0.0;    // [0, 1]
  double phi = 0.0;  // [0, 2 pi)

  /// Validates a and k and wraps phi into [0, 2 pi).
  static QubitParams make(double a, double k, double phi);
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  bool is_canonical() const;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

DensityMatrix qubit_from_params(const QubitParams& p);

/// (<sigma_x>, <sigma_y>, <sigma_z>) in closed form.
BlochVector bloch_expectations(const QubitParams& p);

/// Qubit state with the given Bloch vector, |r| <= 1.
DensityMatrix qubit_from_bloch(const BlochVector& r);

/// Inverse of qubit_from_params for a 2x2 density matrix (k = 0, phi = 0
/// when the state is diagonal).
QubitParams qubit_params_from_density(const DensityMatrix& rho);

/// Labels "0".."5": +z, -z, +x, -x, +y, -y.
StateSet pauli_b3_set();
/// Labels "0", "1": the sigma_z eigenbasis.
StateSet pauli_b1_set();

struct B1Solution {
  double distance;
  Weights weights;
};

/// Optimal mixture of |0>, |1>: weights (1-a, a), distance 2k sqrt(a(1-a)).
B1Solution b1_solution(const QubitParams& p);

/// Reduction to a in [0, 1/2], phi in [0, pi/2] using the reflections of the
/// Bloch axes, which permute B3. If w' is a B3 weight vector for `params`,
/// then w[label_permutation[i]] = w'[i] achieves the same distance for the
/// original parameters.
struct CanonicalForm {
  QubitParams params;
  std::array<int, 6> label_permutation;

  /// Maps B3 weights for the reduced parameters back to the original labels.
  std::vector<double> pull_back(std::span<const double> reduced_weights) const;
};

CanonicalForm canonical_reduce(const QubitParams& p);

/// a / (sqrt(a(1-a)) (cos phi + sin phi)); 0 for a = 0. Requires phi in
/// [0, pi/2] (std::domain_error otherwise).
double k_threshold(double a, double phi);

/// <sigma_x> + <sigma_y> + <sigma_z> <= 1 (+1e-12).
bool zero_distance_condition(const QubitParams& p);

/// Four-state exact decomposition of rho over B3 (weights on labels 0..5).
/// Requires the canonical region and the zero-distance condition; throws
/// std::domain_error otherwise.
std::vector<double> exact_decomposition_weights(const QubitParams& p);

enum class AnalyticCase { kExact, kCaseI, kCaseII, kCaseIII };

std::string_view to_string(AnalyticCase c);

struct AnalyticB3Result {
  AnalyticCase case_label = AnalyticCase::kExact;
  double claimed_distance = 0.0;
  // Claimed weights on labels 0..5, kept exactly as the formulas produce them.
  std::vector<double> claimed_weights;
  // Cases ii/iii only: weights with the cosine (sine) read inside the radical,
  // k sqrt(a(1-a) cos phi), as the formulas are literally typeset.
  std::optional<std::vector<double>> literal_radical_weights;
  // Threshold phase used for case selection (only when k > sqrt(a/(1-a))).
  std::optional<double> phi_threshold;

  bool weights_feasible() const { return Weights::is_feasible(claimed_weights); }
};

/// Threshold phase separating cases i/ii/iii, as printed:
/// 2 atan[(sqrt(5k^2 a(1-a) - a^2) - 2k sqrt(a(1-a))) / (a + k sqrt(a(1-a)))].
double phi_threshold(double a, double k);

/// Claimed closed-form optimum over B3 for canonical parameters
/// (std::domain_error outside the canonical region).
AnalyticB3Result analytic_b3(const QubitParams& p);

}  // namespace csa
