#pragma once

// Two-parameter surfaces of the B3 distance with the third parameter fixed,
// written as plot-ready CSV.

#include <ostream>
#include <string>
#include <vector>

#include "csa/audit.hpp"
#include "csa/qubit.hpp"
#include "csa/solver.hpp"

namespace csa {

enum class SweepAxis { kA, kPhi, kK };

std::string_view to_string(SweepAxis axis);

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
};

/// Canonical range of an axis: a in [0, 1/2], phi in [0, pi/2], k in [0, 1].
AxisRange default_range(SweepAxis axis, int points);

struct SweepConfig {
  SweepAxis fixed = SweepAxis::kK;
  double fixed_value = 2.0 / 3.0;
  // The two free axes in (a, phi, k) order; `outer` varies slowest.
  AxisRange outer;
  AxisRange inner;
  SolverOptions solver;  // the seed is offset by the row index
};

/// Free axes for a fixed one, in (a, phi, k) order.
std::pair<SweepAxis, SweepAxis> free_axes(SweepAxis fixed);

struct SweepRow {
  ClaimCheck check;
  bool predicted_zero = false;
};

/// Whether the exact-decomposition condition predicts zero distance at p
/// (after canonical reduction; the pure states a = 0, 1 are included).
bool predicted_zero_distance(const QubitParams& p);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Columns: a,phi,k,D_oracle,D_analytic,case_label,p0..p5,flags. Numbers use
/// 9 significant digits; p0..p5 are the oracle weights; flags are joined by ';'.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace csa
