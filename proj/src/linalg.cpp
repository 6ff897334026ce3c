#include "csa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace csa {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be >= 1");
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("ComplexMatrix: expected " + std::to_string(dim * dim) +
                                " entries, got " + std::to_string(entries_.size()));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw std::invalid_argument("ComplexMatrix: dimension must be >= 1");
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("ComplexMatrix: rows must be square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> ket) {
  ComplexMatrix m(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (std::size_t j = 0; j < ket.size(); ++j) m(i, j) = ket[i] * std::conj(ket[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw DimensionMismatch("ComplexMatrix: dimension mismatch in +");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw DimensionMismatch("ComplexMatrix: dimension mismatch in -");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("ComplexMatrix: dimension mismatch in *");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex l = lhs(i, k);
      if (l == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
    }
  }
  return out;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.dim();
  double deviation = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      deviation = std::max(deviation, std::abs(m_(i, j) - std::conj(m_(j, i))));
    }
  }
  if (deviation > kHermiticityTolerance) {
    throw std::invalid_argument("HermitianMatrix: input deviates from Hermitian by " +
                                std::to_string(deviation));
  }
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m_(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
  }
}

HermitianMatrix operator+(const HermitianMatrix& lhs, const HermitianMatrix& rhs) {
  return HermitianMatrix(lhs.m_ + rhs.m_);
}

HermitianMatrix operator-(const HermitianMatrix& lhs, const HermitianMatrix& rhs) {
  return HermitianMatrix(lhs.m_ - rhs.m_);
}

HermitianMatrix operator*(double scale, const HermitianMatrix& rhs) {
  return HermitianMatrix(rhs.m_ * Complex(scale));
}

DensityMatrix::DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
  const double tr = h_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr) + ", expected 1");
  }
  const auto eig = hermitian_eigensystem(h_);
  if (eig.values.back() < -kEigenvalueTolerance) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(eig.values.back()));
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> ket) {
  double norm2 = 0.0;
  for (const auto& z : ket) norm2 += std::norm(z);
  if (norm2 <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero ket");
  return DensityMatrix(ComplexMatrix::projector(ket) * Complex(1.0 / norm2));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

namespace detail {

void jacobi_eigen_inplace(std::span<Complex> a, std::size_t n, std::span<double> values,
                          std::span<Complex> vectors) {
  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  auto vec = [&](std::size_t i, std::size_t j) -> Complex& { return vectors[i * n + j]; };

  std::fill(vectors.begin(), vectors.begin() + static_cast<std::ptrdiff_t>(n * n), Complex{});
  double frob2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    vec(i, i) = 1.0;
    for (std::size_t j = 0; j < n; ++j) frob2 += std::norm(at(i, j));
  }
  const double threshold2 = kJacobiRelativeThreshold * kJacobiRelativeThreshold * frob2;

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    double off2 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off2 += 2.0 * std::norm(at(p, q));
    }
    if (off2 <= threshold2) {
      converged = true;
      break;
    }
    if (sweep == kJacobiMaxSweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = at(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const Complex phase = std::conj(apq / r);
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J restricted to (p, q): [[c, s], [-s*phase, c*phase]]
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * phase;
        const Complex jqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const Complex akp = at(k, p);
          const Complex akq = at(k, q);
          at(k, p) = akp * jpp + akq * jqp;
          at(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
          const Complex apk = at(p, k);
          const Complex aqk = at(q, k);
          at(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          at(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        at(p, p) = at(p, p).real();
        at(q, q) = at(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const Complex vkp = vec(k, p);
          const Complex vkq = vec(k, q);
          vec(k, p) = vkp * jpp + vkq * jqp;
          vec(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("hermitian_eigensystem: Jacobi did not converge in " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps");
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = at(i, i).real();
}

}  // namespace detail

EigenSystem hermitian_eigensystem(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Complex> work(a.matrix().entries().begin(), a.matrix().entries().end());
  std::vector<double> values(n);
  std::vector<Complex> vectors(n * n);
  detail::jacobi_eigen_inplace(work, n, values, vectors);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });

  EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = values[order[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = vectors[r * n + order[c]];
  }
  return out;
}

double trace_norm(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Complex> work(a.matrix().entries().begin(), a.matrix().entries().end());
  std::vector<double> values(n);
  std::vector<Complex> vectors(n * n);
  detail::jacobi_eigen_inplace(work, n, values, vectors);
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor_product(a.matrix(), b.matrix()));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  ComplexMatrix acc = rho.matrix();
  for (int i = 1; i < n; ++i) acc = tensor_product(acc, rho.matrix());
  return DensityMatrix(std::move(acc));
}

HermitianMatrix difference(const DensityMatrix& lhs, const DensityMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) {
    throw DimensionMismatch("difference: dimensions " + std::to_string(lhs.dim()) + " and " +
                            std::to_string(rhs.dim()));
  }
  return lhs.hermitian() - rhs.hermitian();
}

double helstrom_probability(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  return 0.5 + 0.25 * trace_norm(difference(rho0, rho1));
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a) {
  return u * a * u.adjoint();
}

DensityMatrix conjugate_by(const ComplexMatrix& u, const DensityMatrix& rho) {
  return DensityMatrix(conjugate_by(u, rho.matrix()));
}

namespace pauli {

ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace pauli

}  // namespace csa
