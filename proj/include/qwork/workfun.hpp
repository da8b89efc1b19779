#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qwork/bohmdyn.hpp"

// Work functionals over Bohmian trajectories: mechanical work W_M (force
// integrated along the path), energetic work W_E (change of the local total
// energy), their decomposition W_E = W_M + dV + dQ, power densities, ensemble
// expectations, and the classical/quantum power split.
namespace qwork::workfun {

using bohmdyn::Trajectory;
using field1d::PotentialSpec;
using field1d::Wavefunction;

// Composite Simpson on uniformly spaced samples; a 3/8 tail handles odd
// interval counts.
double simpson_uniform(const std::vector<double>& f, double dt);

// W_M = int F v dt over the recorded force and velocity samples. Throws when
// more than masked_fraction_limit of the samples were served from
// nearest-valid cells (unreliable integral).
double mechanical_work(const Trajectory& traj,
                       double masked_fraction_limit = 0.01);

// Endpoint form: E_local at the final record minus the first.
double energetic_work(const Trajectory& traj);

// Integral form int (dE/dt)|_x dt, from the recorded midpoint samples;
// agreement with the endpoint form checks the Hamilton-Jacobi chain rule.
double energetic_work_integral(const Trajectory& traj);

struct WorkRecord {
  double mechanical = 0.0;
  double energetic = 0.0;
  double delta_kinetic = 0.0;
  double delta_potential = 0.0;
  double delta_quantum = 0.0;
  std::size_t traj_id = 0;

  double work_energy_residual() const { return mechanical - delta_kinetic; }
  double decomposition_residual() const {
    return energetic - (mechanical + delta_potential + delta_quantum);
  }
};

WorkRecord work_decomposition(const Trajectory& traj, const PotentialSpec& v);

// <P> = int |psi|^2 F v dx over masked-valid points.
double expected_power(const Wavefunction& psi, const PotentialSpec& v);

// <dQ/dx> = int |psi|^2 Q' dx, evaluated division-free as
// -(hbar^2/2m) int (R''' R - R' R'') dx with spectral derivatives of
// R = |psi|; vanishes for packets that decay at the boundary. Nodeless
// interior packets only (R must be smooth).
double expected_quantum_force_gradient(const Wavefunction& psi,
                                       const PotentialSpec& v);

struct EnsembleWork {
  double mean_mechanical = 0.0;
  double mean_energetic = 0.0;
  double se_mechanical = 0.0;
  double se_energetic = 0.0;
  std::vector<double> weights;
  std::vector<WorkRecord> per_traj;
};

// Weighted means (uniform when weights is empty); weights must sum to 1.
EnsembleWork ensemble_work(std::vector<WorkRecord> records,
                           std::vector<double> weights = {});

enum class WorkKind { mechanical, energetic };

// <e^{-beta W}> over the ensemble, compensated summation.
double exponential_average(const EnsembleWork& ensemble, double beta,
                           WorkKind kind);

// Time-integrated ensemble power terms (int <-V' v> dt, int <Q' v> dt) over
// uniformly spaced psi snapshots; classical minus quantum equals <W_M>.
std::pair<double, double> power_split(const std::vector<Wavefunction>& psi_series,
                                      const PotentialSpec& v);

}  // namespace qwork::workfun
