#pragma once

// Dense complex matrices for small quantum systems: Hermitian eigensystems,
// trace norm, Kronecker products and the Helstrom success probability.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace csa {

using Complex = std::complex<double>;

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square dim x dim complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// |psi><psi| for an (unnormalized) ket.
  static ComplexMatrix projector(std::span<const Complex> ket);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// max_ij |A_ij|
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// A Hermitian matrix. Construction symmetrizes A <- (A + A^dagger)/2 and
/// rejects inputs whose max-entry deviation from Hermiticity exceeds 1e-8.
class HermitianMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-8;

  explicit HermitianMatrix(ComplexMatrix m);

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

  friend HermitianMatrix operator+(const HermitianMatrix& lhs, const HermitianMatrix& rhs);
  friend HermitianMatrix operator-(const HermitianMatrix& lhs, const HermitianMatrix& rhs);
  friend HermitianMatrix operator*(double scale, const HermitianMatrix& rhs);

 private:
  ComplexMatrix m_;
};

/// Unit-trace positive semidefinite Hermitian matrix.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kEigenvalueTolerance = 1e-10;

  explicit DensityMatrix(HermitianMatrix h);
  explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(HermitianMatrix(std::move(m))) {}

  /// Pure state from a ket; the ket is normalized first.
  static DensityMatrix pure(std::span<const Complex> ket);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  Complex operator()(std::size_t row, std::size_t col) const { return h_(row, col); }

 private:
  HermitianMatrix h_;
};

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Cyclic complex Jacobi. Throws ConvergenceError after the sweep cap.
EigenSystem hermitian_eigensystem(const HermitianMatrix& a);

/// Sum of |eigenvalues|.
double trace_norm(const HermitianMatrix& a);

/// (A (x) B)[i*dimB + k, j*dimB + l] = A[i,j] * B[k,l]
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
/// rho^{(x) n}, n >= 1.
DensityMatrix tensor_power(const DensityMatrix& rho, int n);

HermitianMatrix difference(const DensityMatrix& lhs, const DensityMatrix& rhs);

/// Optimal success probability for discriminating two equiprobable states.
double helstrom_probability(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// U A U^dagger
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a);
DensityMatrix conjugate_by(const ComplexMatrix& u, const DensityMatrix& rho);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

namespace detail {

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelativeThreshold = 1e-14;

// In-place Jacobi on a row-major Hermitian buffer of size n*n. On return the
// diagonal of `a` is destroyed, `values` holds the (unsorted) eigenvalues and
// `vectors` the matching eigenvector columns. Allocation free.
void jacobi_eigen_inplace(std::span<Complex> a, std::size_t n, std::span<double> values,
                          std::span<Complex> vectors);

}  // namespace detail

}  // namespace csa
