#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "csa/qubit.hpp"
#include "csa/solver.hpp"
#include "test_util.hpp"

using namespace csa;
using namespace csa::testing;

namespace {

StateSet random_set(std::size_t dim, std::size_t size, std::mt19937_64& rng) {
  std::vector<DensityMatrix> elements;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) {
    elements.push_back(i % 2 ? random_pure(dim, rng) : random_density(dim, rng));
    labels.push_back("s" + std::to_string(i));
  }
  return StateSet(std::move(elements), std::move(labels));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

TEST(ProjectSimplex, KnownValues) {
  const double v1[] = {0.5, 0.5};
  const auto p1 = project_simplex(v1);
  EXPECT_DOUBLE_EQ(p1[0], 0.5);
  EXPECT_DOUBLE_EQ(p1[1], 0.5);
  const double v2[] = {2.0, 0.0, -1.0};
  const auto p2 = project_simplex(v2);
  EXPECT_DOUBLE_EQ(p2[0], 1.0);
  EXPECT_DOUBLE_EQ(p2[1], 0.0);
  EXPECT_DOUBLE_EQ(p2[2], 0.0);
  const double v3[] = {0.0, 0.0, 0.0, 0.0};
  const auto p3 = project_simplex(v3);
  for (double w : p3.values()) EXPECT_DOUBLE_EQ(w, 0.25);
}

TEST(ProjectSimplex, IsTheNearestFeasiblePoint) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(5);
    for (auto& x : v) x = 2.0 * g(rng);
    const auto p = project_simplex(v);
    ASSERT_TRUE(Weights::is_feasible(p.values()));
    const double d = squared_distance(v, p.values());
    for (int s = 0; s < 50; ++s) {
      const auto q = random_simplex(5, rng);
      EXPECT_LE(d, squared_distance(v, q) + 1e-12);
    }
    // Idempotent.
    const auto pp = project_simplex(p.values());
    EXPECT_LT(squared_distance(p.values(), pp.values()), 1e-28);
  }
}

TEST(Weights, Validation) {
  EXPECT_THROW(Weights({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Weights({1.1, -0.1}), std::invalid_argument);
  EXPECT_THROW(Weights(std::vector<double>{}), std::invalid_argument);
  EXPECT_NO_THROW(Weights({0.25, 0.75}));
  EXPECT_DOUBLE_EQ(Weights::vertex(3, 1)[1], 1.0);
  EXPECT_DOUBLE_EQ(Weights::uniform(4)[2], 0.25);
}

TEST(StateSetType, RejectsMismatchedInput) {
  std::mt19937_64 rng(22);
  EXPECT_THROW(StateSet({random_density(2, rng), random_density(3, rng)}, {"a", "b"}), DimensionMismatch);
  EXPECT_THROW(StateSet({random_density(2, rng)}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(StateSet({}, {}), std::invalid_argument);
}

TEST(Subgradient, MatchesFiniteDifferencesOnQutrits) {
  std::mt19937_64 rng(23);
  const double h = 1e-6;
  int tested = 0;
  while (tested < 40) {
    const auto rho = random_density(3, rng);
    const auto set = random_set(3, 4, rng);
    const auto w = random_simplex(4, rng);
    const auto eig = hermitian_eigensystem(HermitianMatrix(rho.matrix() - mixture(set, w)));
    double gap = INFINITY;
    for (double v : eig.values) gap = std::min(gap, std::abs(v));
    if (gap < 1e-3) continue;
    ++tested;
    const auto g = subgradient(rho, set, Weights(w));
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto plus = w;
      auto minus = w;
      plus[i] += h;
      minus[i] -= h;
      const double fd = (distance_to_mixture(rho, set, plus) - distance_to_mixture(rho, set, minus)) / (2 * h);
      EXPECT_NEAR(g[i], fd, 1e-4);
    }
  }
}

TEST(Subgradient, SatisfiesTheSubgradientInequality) {
  std::mt19937_64 rng(24);
  const auto b3 = pauli_b3_set();
  for (int t = 0; t < 100; ++t) {
    const auto rho = random_density(2, rng);
    const auto p = random_simplex(6, rng);
    const auto q = random_simplex(6, rng);
    const auto g = subgradient(rho, b3, Weights(p));
    double lin = distance_to_mixture(rho, b3, p);
    for (std::size_t i = 0; i < 6; ++i) lin += g[i] * (q[i] - p[i]);
    EXPECT_GE(distance_to_mixture(rho, b3, q), lin - 1e-12);
  }
}

TEST(DualBound, NeverExceedsTheObjective) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(3, rng);
    const auto set = random_set(3, 5, rng);
    const auto p = Weights(random_simplex(5, rng));
    const double lb = dual_lower_bound(rho, set, p);
    EXPECT_GE(lb, 0.0);
    for (int s = 0; s < 20; ++s) EXPECT_LE(lb, objective(rho, set, Weights(random_simplex(5, rng))) + 1e-12);
  }
}

TEST(Minimize, SingleElementSetIsTheTraceDistance) {
  std::mt19937_64 rng(26);
  const auto rho = random_density(3, rng);
  const auto nu = random_density(3, rng);
  const auto r = minimize(rho, StateSet({nu}, {"only"}));
  EXPECT_NEAR(r.distance, trace_norm(difference(rho, nu)), 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(Minimize, TargetInsideTheHullHasZeroDistance) {
  std::mt19937_64 rng(27);
  for (int t = 0; t < 20; ++t) {
    const auto set = random_set(3, 5, rng);
    const auto w = random_simplex(5, rng);
    const DensityMatrix rho(HermitianMatrix(mixture(set, w)));
    const auto r = minimize(rho, set);
    EXPECT_LE(r.distance, 1e-6);
  }
}

TEST(Minimize, AgreesWithTheGridOracleOnQutrits) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_density(3, rng);
    const auto set = random_set(3, 4, rng);
    const auto m = minimize(rho, set);
    const auto g = grid_oracle(rho, set, 60);
    EXPECT_LE(m.distance, g.distance + 1e-6);
    EXPECT_NEAR(m.distance, g.distance, 2e-3);
    EXPECT_LE(m.lower_bound, m.distance + 1e-12);
  }
}

TEST(Minimize, BoundedByTheNearestElement) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(2, rng);
    const auto set = random_set(2, 4, rng);
    double bound = INFINITY;
    for (std::size_t i = 0; i < set.size(); ++i) bound = std::min(bound, trace_norm(difference(rho, set[i])));
    EXPECT_LE(minimize(rho, set).distance, bound + 1e-9);
  }
}

TEST(Minimize, ConvexInTheTarget) {
  std::mt19937_64 rng(30);
  const auto b3 = pauli_b3_set();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const auto r1 = random_pure(2, rng);
    const auto r2 = random_pure(2, rng);
    const double lambda = u(rng);
    const DensityMatrix mid(lambda * r1.hermitian() + (1.0 - lambda) * r2.hermitian());
    EXPECT_LE(minimize(mid, b3).distance,
              lambda * minimize(r1, b3).distance + (1.0 - lambda) * minimize(r2, b3).distance + 1e-6);
  }
}

TEST(Minimize, DeterministicForAFixedSeed) {
  std::mt19937_64 rng(31);
  const auto rho = random_density(3, rng);
  const auto set = random_set(3, 6, rng);
  SolverOptions opts;
  opts.seed = 99;
  const auto a = minimize(rho, set, opts);
  const auto b = minimize(rho, set, opts);
  EXPECT_EQ(a.distance, b.distance);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE(std::equal(a.weights.values().begin(), a.weights.values().end(), b.weights.values().begin()));
}

TEST(Minimize, ReportsNonConvergenceInsteadOfThrowing) {
  const auto rho = qubit_from_params(QubitParams::make(0.3, 0.9, 0.6));
  SolverOptions opts;
  opts.max_iterations = 1;
  opts.random_restarts = 0;
  opts.polish_iterations = 0;
  const auto r = minimize(rho, pauli_b3_set(), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.bound_gap, 1e-6);
}

TEST(Minimize, WarmStartSizeIsChecked) {
  SolverOptions opts;
  opts.warm_start = std::vector<double>{1.0, 0.0};
  EXPECT_THROW(minimize(DensityMatrix::maximally_mixed(2), pauli_b3_set(), opts), DimensionMismatch);
}

TEST(GridOracle, GridSizeAndGuards) {
  EXPECT_DOUBLE_EQ(simplex_grid_size(2, 10), 11.0);
  EXPECT_DOUBLE_EQ(simplex_grid_size(3, 10), 66.0);
  EXPECT_DOUBLE_EQ(simplex_grid_size(6, 100), 96560646.0);

  std::mt19937_64 rng(32);
  const auto rho = random_density(2, rng);
  const auto seven = random_set(2, 7, rng);
  EXPECT_THROW(grid_oracle(rho, seven, 50), std::invalid_argument);
  EXPECT_NO_THROW(grid_oracle(rho, seven, 10));
  EXPECT_THROW(grid_oracle(rho, pauli_b3_set(), 0), std::invalid_argument);
}

TEST(GridOracle, ExactOnGridAlignedOptimum) {
  // rho = (3/4)|0><0| + (1/4)|1><1| lies on the B1 grid.
  const double diag[] = {0.75, 0.25};
  const DensityMatrix rho(HermitianMatrix(ComplexMatrix::diagonal(diag)));
  const auto r = grid_oracle(rho, pauli_b1_set(), 4);
  EXPECT_NEAR(r.distance, 0.0, 1e-15);
  EXPECT_NEAR(r.weights[0], 0.75, 1e-15);
}
