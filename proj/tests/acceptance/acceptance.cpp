// End-to-end acceptance checks. Run with no arguments for all of them, or
// with criterion numbers to run a subset. Prints one PASS/FAIL line each and
// exits non-zero if any check fails or exceeds its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "csa/audit.hpp"
#include "csa/linalg.hpp"
#include "csa/multicopy.hpp"
#include "csa/qubit.hpp"
#include "csa/solver.hpp"
#include "csa/sweep.hpp"

using namespace csa;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

QubitParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return QubitParams::make(u(rng), u(rng), 2.0 * kPi * u(rng));
}

// Uniform in the Bloch ball.
DensityMatrix random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BlochVector r{g(rng), g(rng), g(rng)};
  const double norm = std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z);
  const double radius = std::cbrt(u(rng)) / norm;
  return qubit_from_bloch({r.x * radius, r.y * radius, r.z * radius});
}

Outcome b1_value() {
  const QubitParams p = QubitParams::make(0.25, 1.0, 0.0);
  const double expected = std::sqrt(3.0) / 2.0;
  const auto analytic = b1_solution(p);
  const auto solved = minimize(qubit_from_params(p), pauli_b1_set());
  const double analytic_err = std::max({std::abs(analytic.distance - expected),
                                        std::abs(analytic.weights[0] - 0.75),
                                        std::abs(analytic.weights[1] - 0.25)});
  const double solver_err = std::max({std::abs(solved.distance - expected),
                                      std::abs(solved.weights[0] - 0.75),
                                      std::abs(solved.weights[1] - 0.25)});
  return {analytic_err <= 1e-12 && solver_err <= 1e-4,
          fmt("D=%.9f analytic err %.1e, solver err %.1e", solved.distance, analytic_err, solver_err)};
}

Outcome two_copy_chain() {
  const MultiCopyProblem prob{qubit_from_params(QubitParams::make(0.25, 1.0, 0.0)), pauli_b1_set(), 2};
  const auto r = inequality_chain_report(prob);
  const auto& wc = r.correlated.weights;
  const auto& p = r.factorized.per_copy_weights;
  const double tol = 2e-3;
  bool ok = std::abs(r.d_prod - 1.299) <= tol && std::abs(r.d_fact - 1.272) <= tol &&
            std::abs(r.d_corr - 1.265) <= tol;
  ok = ok && std::abs(p[0][0] - 0.859) <= tol && std::abs(p[1][0] - 0.859) <= tol;
  const double expected_corr[4] = {0.712, 0.144, 0.144, 0.0};
  for (std::size_t i = 0; i < 4; ++i) ok = ok && std::abs(wc[i] - expected_corr[i]) <= tol;
  ok = ok && r.d_corr < r.d_fact && r.d_fact < r.d_prod;
  return {ok, fmt("d_corr=%.5f d_fact=%.5f (p=%.4f, q=%.4f) d_prod=%.5f, w_corr=(%.4f, %.4f, %.4f, %.4f)",
                  r.d_corr, r.d_fact, p[0][0], p[1][0], r.d_prod, wc[0], wc[1], wc[2], wc[3])};
}

Outcome zero_region() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StateSet b3 = pauli_b3_set();
  double worst_residual = 0.0;
  double worst_distance = 0.0;
  int accepted = 0;
  while (accepted < 1000) {
    const double a = 0.5 * u(rng);
    const double phi = 0.5 * kPi * u(rng);
    const double k = std::min(1.0, k_threshold(a, phi)) * u(rng);
    const auto p = QubitParams::make(a, k, phi);
    const auto s = bloch_expectations(p);
    if (s.x + s.y + s.z > 1.0) continue;
    ++accepted;
    const auto rho = qubit_from_params(p);
    const auto w = exact_decomposition_weights(p);
    worst_residual = std::max(worst_residual, (rho.matrix() - mixture(b3, w)).max_abs());
    if (!Weights::is_feasible(w)) worst_residual = std::max(worst_residual, 1.0);
    worst_distance = std::max(worst_distance, minimize(rho, b3).distance);
  }
  return {worst_residual <= 1e-12 && worst_distance <= 1e-4,
          fmt("1000 points, max residual %.1e, max solver distance %.1e", worst_residual, worst_distance)};
}

Outcome vertex_upper_bound() {
  std::mt19937_64 rng(12);
  const StateSet b3 = pauli_b3_set();
  double worst_excess = -1.0;
  for (int t = 0; t < 200; ++t) {
    const auto rho = random_qubit(rng);
    double bound = INFINITY;
    for (std::size_t i = 0; i < b3.size(); ++i) bound = std::min(bound, trace_norm(difference(rho, b3[i])));
    worst_excess = std::max(worst_excess, minimize(rho, b3).distance - bound);
  }
  return {worst_excess <= 1e-9, fmt("200 instances, max(D - min_i ||rho - nu_i||) = %.2e", worst_excess)};
}

Outcome symmetry() {
  std::mt19937_64 rng(13);
  const StateSet b3 = pauli_b3_set();
  double worst_flip = 0.0;
  double worst_pullback = 0.0;
  bool feasible = true;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_params(rng);
    const auto rho = qubit_from_params(p);
    const double d = minimize(rho, b3).distance;
    const double d_flip = minimize(conjugate_by(pauli::x(), rho), b3).distance;
    worst_flip = std::max(worst_flip, std::abs(d - d_flip));

    const auto c = canonical_reduce(p);
    const auto reduced = minimize(qubit_from_params(c.params), b3);
    const auto w = c.pull_back(reduced.weights.values());
    feasible = feasible && Weights::is_feasible(w);
    worst_pullback = std::max(worst_pullback, std::abs(distance_to_mixture(rho, b3, w) - reduced.distance));
  }
  return {worst_flip <= 2e-4 && worst_pullback <= 2e-4 && feasible,
          fmt("max |D(rho) - D(X rho X)| = %.1e, max pull-back mismatch %.1e, pulled-back weights %s",
              worst_flip, worst_pullback, feasible ? "feasible" : "INFEASIBLE")};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(14);
  const StateSet b3 = pauli_b3_set();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto rho = qubit_from_params(random_params(rng));
    worst = std::max(worst, std::abs(minimize(rho, b3).distance - grid_oracle(rho, b3, 100).distance));
  }
  return {worst <= 2e-3, fmt("100 instances, max |minimize - grid(100)| = %.2e", worst)};
}

Outcome subgradient_check() {
  std::mt19937_64 rng(15);
  std::exponential_distribution<double> expo(1.0);
  const StateSet b3 = pauli_b3_set();
  const double h = 1e-6;
  double worst = 0.0;
  int tested = 0;
  while (tested < 100) {
    const auto rho = random_qubit(rng);
    std::vector<double> w(b3.size());
    double sum = 0.0;
    for (auto& v : w) sum += (v = expo(rng));
    for (auto& v : w) v /= sum;
    // Nonsingular: both eigenvalues of rho - sigma away from zero.
    const auto eig = hermitian_eigensystem(HermitianMatrix(rho.matrix() - mixture(b3, w)));
    if (std::min(std::abs(eig.values.front()), std::abs(eig.values.back())) < 1e-3) continue;
    ++tested;
    const auto g = subgradient(rho, b3, Weights(w));
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto plus = w;
      auto minus = w;
      plus[i] += h;
      minus[i] -= h;
      const double fd = (distance_to_mixture(rho, b3, plus) - distance_to_mixture(rho, b3, minus)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[i]));
    }
  }
  return {worst <= 1e-4, fmt("100 points, max component error %.1e", worst)};
}

Outcome closed_form_audit() {
  const AuditOptions opts;
  const auto report = audit_analytic(opts);
  const std::size_t expected = static_cast<std::size_t>(opts.resolution) * opts.resolution * opts.resolution;
  bool complete = report.points.size() == expected;
  for (std::size_t i = 0; complete && i < report.points.size(); ++i) complete = report.points[i].index == i;

  std::size_t unflagged_infeasible = 0;
  std::size_t below_oracle = 0;
  std::size_t flagged_in_exact = 0;
  for (const auto& pt : report.points) {
    const auto& c = pt.check;
    const bool feasible = Weights::is_feasible(c.claimed_weights, kFeasibilityTolerance);
    if (!feasible && !c.has_flag(audit_flags::kWeightsInfeasible)) ++unflagged_infeasible;
    if (feasible && c.achieved_distance < c.oracle_distance - kOptimalityTolerance) ++below_oracle;
    if (c.analytic.case_label == AnalyticCase::kExact && !c.flags.empty()) ++flagged_in_exact;
  }
  const bool deterministic = to_json(report) == to_json(audit_analytic(opts));
  const bool ok = complete && deterministic && unflagged_infeasible == 0 && below_oracle == 0 && flagged_in_exact == 0;
  return {ok, fmt("%zu points, %zu flagged; unflagged infeasible %zu, feasible below oracle %zu, "
                  "flagged in exact region %zu, %s, %s",
                  report.points.size(), report.flagged_points(), unflagged_infeasible, below_oracle,
                  flagged_in_exact, complete ? "complete" : "INCOMPLETE",
                  deterministic ? "deterministic" : "NON-DETERMINISTIC")};
}

Outcome zero_region_classification() {
  const double tol = 1e-4;
  std::size_t points = 0;
  std::size_t wrong = 0;
  std::size_t zero_points = 0;
  double worst_threshold = 0.0;

  auto classify = [&](SweepAxis fixed, double value) {
    SweepConfig sc;
    sc.fixed = fixed;
    sc.fixed_value = value;
    const auto [outer, inner] = free_axes(fixed);
    sc.outer = default_range(outer, 41);
    sc.inner = default_range(inner, 41);
    for (const auto& row : run_sweep(sc)) {
      const bool zero = row.check.oracle_distance <= tol;
      ++points;
      zero_points += zero;
      wrong += zero != row.predicted_zero;
    }
  };
  classify(SweepAxis::kK, 2.0 / 3.0);
  classify(SweepAxis::kPhi, kPi / 3.0);

  // The phi = pi/3 threshold curve in closed form.
  for (int i = 1; i <= 50; ++i) {
    const double a = 0.01 * i;
    const double printed = 2.0 * a / ((std::sqrt(3.0) + 1.0) * std::sqrt(a * (1.0 - a)));
    worst_threshold = std::max(worst_threshold, std::abs(k_threshold(a, kPi / 3.0) - printed) / printed);
  }
  return {wrong == 0 && worst_threshold <= 1e-12,
          fmt("%zu grid points (%zu zero), %zu misclassified; threshold curve rel. err %.1e", points,
              zero_points, wrong, worst_threshold)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "single-copy B1 value", 1.0, b1_value},
      {2, "two-copy inequality chain", 60.0, two_copy_chain},
      {3, "zero-distance region", 30.0, zero_region},
      {4, "nearest-element upper bound", 60.0, vertex_upper_bound},
      {5, "sigma_x symmetry and canonical pull-back", 120.0, symmetry},
      {6, "solver vs grid oracle", 120.0, oracle_equivalence},
      {7, "subgradient vs finite differences", 10.0, subgradient_check},
      {8, "closed-form audit on 21^3 grid", 300.0, closed_form_audit},
      {9, "sweep zero-region classification", 300.0, zero_region_classification},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] %d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), elapsed, c.time_limit_s, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
