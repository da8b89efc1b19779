#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwork/field1d.hpp"
#include "qwork/tolerances.hpp"

// Bohmian layer over field1d: amplitude/phase fields, quantum potential and
// force, guidance-equation velocity, local energy, quantum-equilibrium
// sampling, and trajectories co-evolved with psi.
namespace qwork::bohmdyn {

using field1d::Grid1D;
using field1d::PotentialSpec;
using field1d::Wavefunction;

// Pointwise fields derived from psi. grad_s and E_local come from spectral
// derivatives of psi; Q and the quantum force from spectral derivatives of
// rho = |psi|^2 (smooth across nodes, where |psi| itself has kinks). Points
// with rho below node_eps * max(rho) are masked and hold zeros.
struct BohmFields {
  std::vector<double> amplitude;      // R = |psi|
  std::vector<double> rho;            // |psi|^2
  std::vector<double> grad_s;         // hbar Im(psi* psi') / rho
  std::vector<double> quantum_potential;
  std::vector<double> force;          // -(V + Q)'
  std::vector<double> local_energy;   // Re(psi* H psi) / rho
  std::vector<std::uint8_t> valid;
  double rho_max = 0.0;
};

BohmFields bohm_fields(const Wavefunction& psi, const PotentialSpec& v,
                       double node_eps = tol::node_guard);

// Max over masked-valid points of |E_local - ((grad S)^2/2m + V + Q)|: the
// quantum Hamilton-Jacobi equation as a pointwise identity between the two
// independent spectral routes (psi-derivatives vs rho-derivatives).
double qhj_residual_max(const Wavefunction& psi, const PotentialSpec& v,
                        double node_eps = tol::node_guard);

// n i.i.d. positions from the |psi|^2 dx histogram (inverse CDF, linear
// within cells); deterministic per seed.
std::vector<double> sample_quantum_equilibrium(const Wavefunction& psi,
                                               std::size_t n,
                                               std::uint64_t seed);

struct Trajectory {
  std::size_t id = 0;
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> potential_samples;
  std::vector<double> quantum_samples;
  std::vector<double> local_energy_samples;
  std::vector<double> force_samples;
  // dE/dt along the path per step interval, recorded as the fixed-position
  // time derivative of V + Q at the step midpoint (equal by the
  // Hamilton-Jacobi chain rule; only when record_stride == 1 and
  // sample_fields). Feeds the integral-form W^E.
  std::vector<double> dEdt_mid;
  std::size_t node_events = 0;      // masked-cell lookups served nearest-valid
  std::size_t force_fallbacks = 0;  // of which: recorded force samples
};

struct IntegrateOptions {
  std::size_t record_stride = 1;  // record every k-th step (+ first and last)
  bool sample_fields = true;      // record V/Q/E/force along the path
  double node_eps = tol::node_guard;
};

// Co-evolves psi (half-step split-step, so RK4 half stages see the true
// mid-step field) and all trajectories under dx/dt = v(x, t) with cubic
// spatial interpolation. Throws if a trajectory leaves the trusted interior
// (within 5 dx of a domain edge).
std::vector<Trajectory> integrate_trajectories(const Wavefunction& psi0,
                                               const PotentialSpec& v,
                                               const std::vector<double>& x0,
                                               double t_final, double dt,
                                               const IntegrateOptions& opts = {});

// Kolmogorov-Smirnov distance between sampled positions and the |psi|^2 CDF.
double ks_distance(std::vector<double> positions, const Wavefunction& psi);

// Spec-shaped overload: positions taken from each trajectory at the record
// closest to psi.time.
double equivariance_check(const std::vector<Trajectory>& trajectories,
                          const Wavefunction& psi);

}  // namespace qwork::bohmdyn
