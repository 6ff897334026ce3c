#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "csa/linalg.hpp"
#include "csa/qubit.hpp"

namespace csa::testing {

inline HermitianMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return HermitianMatrix(m + m.adjoint());
}

// Full rank, trace one (Ginibre).
inline DensityMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  ComplexMatrix p = m * m.adjoint();
  p *= Complex(1.0 / p.trace().real());
  return DensityMatrix(HermitianMatrix(p));
}

inline DensityMatrix random_pure(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> ket(n);
  double norm = 0.0;
  for (auto& c : ket) {
    c = {g(rng), g(rng)};
    norm += std::norm(c);
  }
  for (auto& c : ket) c /= std::sqrt(norm);
  return DensityMatrix::pure(ket);
}

inline QubitParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return QubitParams::make(u(rng), u(rng), 2.0 * std::numbers::pi * u(rng));
}

inline QubitParams random_canonical_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return QubitParams::make(0.5 * u(rng), u(rng), 0.5 * std::numbers::pi * u(rng));
}

inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) sum += (v = e(rng));
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace csa::testing
