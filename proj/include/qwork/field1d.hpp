#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// 1-D time-dependent Schrodinger evolution on a periodic grid: Strang-split
// steps with a spectral kinetic term, parametric time-dependent potentials,
// and spectral observables. Units are hbar = m = 1 unless overridden on the
// PotentialSpec. Single particle on a line; the many-body configuration-space
// sums collapse to one term here and would extend index-wise.
namespace qwork::field1d {

using cdouble = std::complex<double>;

struct Grid1D {
  std::size_t n_points = 0;
  double x_min = 0.0;
  double dx = 0.0;

  static Grid1D make(std::size_t n_points, double x_min, double dx);
  static Grid1D centered(std::size_t n_points, double half_width);

  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
  double length() const { return static_cast<double>(n_points) * dx; }
  // FFT-ordered wavenumbers 2*pi*j / (n*dx), j in [0, n/2) then [-n/2, 0).
  std::vector<double> wavenumbers() const;
};

// Drive schedule lambda(t): holds the initial value before t_begin and the
// final value after t_end. The quintic shape has vanishing first and second
// derivatives at both ends, which is what quasi-static runs want.
struct Protocol {
  enum class Shape { constant, linear, cubic, quintic };

  Shape shape = Shape::constant;
  double v0 = 0.0;
  double v1 = 0.0;
  double t_begin = 0.0;
  double t_end = 1.0;

  static Protocol constant(double value);
  static Protocol ramp(Shape shape, double v0, double v1, double t_begin,
                       double t_end);

  double operator()(double t) const;
  double rate(double t) const;  // d lambda / dt
  bool is_constant() const;
};

class PotentialSpec {
 public:
  enum class Kind { free, harmonic, stiffness_ramp, barrier };

  static PotentialSpec free_particle();
  // V = (m w^2 / 2) (x - c(t))^2 with a driven center.
  static PotentialSpec harmonic(double mass, double omega, Protocol center);
  // V = (m w(t)^2 / 2) (x - c)^2 with a driven stiffness.
  static PotentialSpec stiffness_ramp(double mass, Protocol omega,
                                      double center = 0.0);
  // Rectangular barrier of given height over |x| < width/2.
  static PotentialSpec barrier(double height, double width);

  double operator()(double x, double t) const;
  double grad(double x, double t) const;

  Kind kind() const { return kind_; }
  double mass() const { return mass_; }
  double hbar() const { return hbar_; }
  void set_units(double hbar, double mass);
  double omega(double t) const;       // harmonic kinds only
  double center(double t) const;      // harmonic kinds only
  const Protocol& drive() const { return drive_; }
  bool is_static() const;

 private:
  Kind kind_ = Kind::free;
  double mass_ = 1.0;
  double hbar_ = 1.0;
  double omega_ = 0.0;
  double center_ = 0.0;
  double height_ = 0.0;
  double width_ = 0.0;
  Protocol drive_;
};

struct Wavefunction {
  Grid1D grid;
  std::vector<cdouble> amplitudes;
  double time = 0.0;

  double norm2() const;  // sum |psi|^2 dx
  void normalize();
};

// Normalized Gaussian packet with |psi|^2 position variance sigma0^2 and
// carrier wavenumber k0.
Wavefunction gaussian_packet(const Grid1D& grid, double x0, double sigma0,
                             double k0 = 0.0);

// One Strang step: half potential kick at the mid-step time, full spectral
// kinetic step, half potential kick. Norm-exact; second order in dt.
// dt may be negative (reverse evolution).
void split_step(Wavefunction& psi, const PotentialSpec& v, double dt);

void evolve(Wavefunction& psi, const PotentialSpec& v, double dt,
            std::size_t steps);

double kinetic_expectation(const Wavefunction& psi, const PotentialSpec& v);
double potential_expectation(const Wavefunction& psi, const PotentialSpec& v);
double hamiltonian_expectation(const Wavefunction& psi, const PotentialSpec& v);

// Spectral derivatives d^m psi / dx^m for m = 1..orders; out[m-1] sized n.
void spectral_derivatives(const Wavefunction& psi, std::size_t orders,
                          std::vector<std::vector<cdouble>>& out);

struct HoBasis {
  std::vector<Wavefunction> states;
  std::vector<double> energies;  // hbar w (n + 1/2)
};

// Hermite-function eigenstates of the harmonic well, grid-normalized.
// Throws if the top state is not resolved (norm or orthogonality failure).
HoBasis ho_eigenstates(const Grid1D& grid, double mass, double omega,
                       std::size_t n_max, double center = 0.0,
                       double hbar = 1.0);

// Snapshot as CSV rows "x,re,im,density" (full double precision).
void write_csv(const Wavefunction& psi, std::ostream& out);

}  // namespace qwork::field1d
