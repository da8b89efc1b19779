#include "qwork/qcore.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwork/rng.hpp"

namespace qwork::qcore {

Operator::Operator(std::size_t dim, std::vector<cdouble> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim * dim)
    throw std::invalid_argument("Operator: entry count does not match dim^2");
}

Operator Operator::identity(std::size_t dim) {
  Operator id(dim);
  for (std::size_t i = 0; i < dim; ++i) id.at(i, i) = 1.0;
  return id;
}

Operator Operator::adjoint() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) = std::conj(at(j, i));
  return out;
}

cdouble Operator::trace() const {
  cdouble t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

double Operator::max_abs() const {
  double m = 0.0;
  for (const cdouble& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Operator::max_offdiag_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j) m = std::max(m, std::abs(at(i, j)));
  return m;
}

bool Operator::is_hermitian(double tolerance) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tolerance) return false;
  return true;
}

bool Operator::is_unitary(double tolerance) const {
  const Operator gram = adjoint() * (*this);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const cdouble expect = (i == j) ? cdouble{1.0} : cdouble{0.0};
      if (std::abs(gram.at(i, j) - expect) > tolerance) return false;
    }
  return true;
}

Operator Operator::operator*(const Operator& rhs) const {
  if (dim_ != rhs.dim_)
    throw std::invalid_argument("Operator product: dimension mismatch");
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const cdouble aik = at(i, k);
      if (aik == cdouble{0.0}) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        out.at(i, j) += aik * rhs.at(k, j);
    }
  return out;
}

Operator Operator::operator+(const Operator& rhs) const {
  if (dim_ != rhs.dim_)
    throw std::invalid_argument("Operator sum: dimension mismatch");
  Operator out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Operator Operator::operator-(const Operator& rhs) const {
  if (dim_ != rhs.dim_)
    throw std::invalid_argument("Operator difference: dimension mismatch");
  Operator out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

Operator Operator::scaled(cdouble factor) const {
  Operator out = *this;
  for (cdouble& z : out.data_) z *= factor;
  return out;
}

DensityState::DensityState(Operator matrix) : matrix_(std::move(matrix)) {
  if (matrix_.dim() == 0)
    throw std::invalid_argument("DensityState: empty matrix");
  if (!matrix_.is_hermitian())
    throw std::invalid_argument("DensityState: matrix is not Hermitian");
  if (std::abs(matrix_.trace() - cdouble{1.0}) > tol::trace_one)
    throw std::invalid_argument("DensityState: trace differs from 1");
  const Spectrum s = spectral(matrix_);
  if (s.eigenvalues.front() < tol::eig_floor)
    throw std::invalid_argument(
        "DensityState: negative eigenvalue " +
        std::to_string(s.eigenvalues.front()));
}

double expectation(const DensityState& rho, const Operator& a,
                   double residue_tol) {
  if (rho.dim() != a.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  if (!a.is_hermitian())
    throw std::invalid_argument("expectation: observable is not Hermitian");
  const cdouble t = (rho.matrix() * a).trace();
  if (std::abs(t.imag()) > residue_tol)
    throw std::runtime_error("expectation: imaginary residue " +
                             std::to_string(t.imag()));
  return t.real();
}

DensityState dephase(const DensityState& rho, const Spectrum& basis) {
  const std::size_t d = rho.dim();
  if (basis.eigenvectors.dim() != d)
    throw std::invalid_argument("dephase: dimension mismatch");
  Operator out(d);
  for (std::size_t k = 0; k < d; ++k) {
    // p_k = <k| rho |k>
    cdouble p = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        p += std::conj(basis.eigenvectors.at(i, k)) * rho.matrix().at(i, j) *
             basis.eigenvectors.at(j, k);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out.at(i, j) += p.real() * basis.eigenvectors.at(i, k) *
                        std::conj(basis.eigenvectors.at(j, k));
  }
  return DensityState(std::move(out));
}

DensityState evolve(const DensityState& rho, const Operator& u) {
  if (rho.dim() != u.dim())
    throw std::invalid_argument("evolve: dimension mismatch");
  if (!u.is_unitary())
    throw std::invalid_argument("evolve: operator is not unitary");
  return DensityState(u * rho.matrix() * u.adjoint());
}

Spectrum spectral(const Operator& h) {
  if (!h.is_hermitian())
    throw std::invalid_argument("spectral: operator is not Hermitian");
  const std::size_t d = h.dim();
  Eigen::MatrixXcd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = h.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral: eigensolver failed");

  Spectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors = Operator(d);
  for (std::size_t k = 0; k < d; ++k) {
    s.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < d; ++i)
      s.eigenvectors.at(i, k) = solver.eigenvectors()(
          static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return s;
}

DensityState random_state(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_state: dim must be >= 1");
  rng::Stream stream(seed);
  // rho = G G† / Tr(G G†) with Gaussian G.
  Operator g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      g.at(i, j) = {stream.normal(), stream.normal()};
  Operator rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho = rho.scaled(1.0 / tr);
  // Symmetrize away the last bits of rounding.
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cdouble avg = 0.5 * (rho.at(i, j) + std::conj(rho.at(j, i)));
      rho.at(i, j) = avg;
      rho.at(j, i) = std::conj(avg);
    }
  return DensityState(std::move(rho));
}

Operator random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_unitary: dim must be >= 1");
  rng::Stream stream(seed ^ 0x5deece66dULL);
  Operator g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      g.at(i, j) = {stream.normal(), stream.normal()};
  // Modified Gram-Schmidt on columns; Gaussian input makes the result
  // Haar-distributed.
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t prev = 0; prev < k; ++prev) {
      cdouble proj = 0.0;
      for (std::size_t i = 0; i < dim; ++i)
        proj += std::conj(g.at(i, prev)) * g.at(i, k);
      for (std::size_t i = 0; i < dim; ++i)
        g.at(i, k) -= proj * g.at(i, prev);
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm2 += std::norm(g.at(i, k));
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim; ++i) g.at(i, k) *= inv;
  }
  return g;
}

}  // namespace qwork::qcore
