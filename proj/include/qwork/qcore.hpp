#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qwork/tolerances.hpp"

// Finite-dimensional complex linear algebra: states, observables, unitaries,
// the energy-basis dephasing channel, and spectral decomposition. Dimensions
// stay small (property tests use <= 8, nothing above ~64), so storage is a
// dense row-major vector and products are the naive triple loop.
namespace qwork::qcore {

using cdouble = std::complex<double>;

class Operator {
 public:
  Operator() = default;
  explicit Operator(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Operator(std::size_t dim, std::vector<cdouble> entries);

  static Operator identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cdouble& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cdouble& at(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  const std::vector<cdouble>& data() const { return data_; }

  Operator adjoint() const;
  cdouble trace() const;
  double max_abs() const;          // max-entry modulus
  double max_offdiag_abs() const;  // max modulus off the diagonal

  bool is_hermitian(double tolerance = tol::hermitian) const;
  bool is_unitary(double tolerance = tol::unitary) const;

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator scaled(cdouble factor) const;

 private:
  std::size_t dim_ = 0;
  std::vector<cdouble> data_;
};

// Density matrix; construction validates Hermiticity, unit trace, and
// positivity (eigenvalues >= tol::eig_floor).
class DensityState {
 public:
  explicit DensityState(Operator matrix);
  std::size_t dim() const { return matrix_.dim(); }
  const Operator& matrix() const { return matrix_; }

 private:
  Operator matrix_;
};

// Eigendecomposition of a Hermitian operator: ascending eigenvalues with
// orthonormal eigenvector columns. Within degenerate subspaces the basis is
// whatever the solver orthonormalizes to; downstream users are covariant
// under that choice.
struct Spectrum {
  std::vector<double> eigenvalues;
  Operator eigenvectors;
};

// Tr(rho A) for Hermitian A; throws if the trace picks up an imaginary
// residue beyond tolerance.
double expectation(const DensityState& rho, const Operator& a,
                   double residue_tol = tol::imag_residue);

// Energy-basis dephasing channel: sum_i |i><i| rho |i><i|.
DensityState dephase(const DensityState& rho, const Spectrum& basis);

// rho -> U rho U†.
DensityState evolve(const DensityState& rho, const Operator& u);

Spectrum spectral(const Operator& h);

// Haar-like random states (Gaussian purification) and unitaries
// (Gram-Schmidt of a Gaussian matrix); deterministic per seed.
DensityState random_state(std::size_t dim, std::uint64_t seed);
Operator random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace qwork::qcore
