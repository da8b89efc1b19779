#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwork/field1d.hpp"
#include "qwork/workfun.hpp"

// Thermal ensembles and fluctuation-theorem machinery: classical canonical
// sampling and driven trajectory work, quantum Gibbs mixtures over harmonic
// eigenstates, free-energy references, and Jarzynski estimators for the
// classical and Bohmian work definitions.
namespace qwork::statmech {

using field1d::Protocol;

struct CanonicalSpec {
  double beta = 1.0;
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
};

// Drive on a harmonic system: either the trap center or the stiffness.
struct ProtocolSpec {
  enum class Kind { translation, stiffness };
  Kind kind = Kind::translation;
  Protocol drive;
  double t_span = 1.0;
};

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

// i.i.d. Gaussian phase points of the canonical harmonic ensemble at the
// protocol's initial parameters; deterministic per seed.
std::vector<PhasePoint> classical_gibbs_sample(const CanonicalSpec& spec,
                                               const ProtocolSpec& protocol,
                                               std::size_t n,
                                               std::uint64_t seed);

struct ClassicalRun {
  double work = 0.0;     // int lambda_dot dH/dlambda dt
  double delta_h = 0.0;  // H_final(z_T) - H_initial(z_0)
  PhasePoint final_point;
};

// Leapfrog Hamiltonian trajectory with the drive evaluated at half steps.
ClassicalRun classical_trajectory(const CanonicalSpec& spec,
                                  const ProtocolSpec& protocol, PhasePoint z0,
                                  double dt);

double classical_work(const CanonicalSpec& spec, const ProtocolSpec& protocol,
                      PhasePoint z0, double dt);

struct JarzynskiResult {
  double estimate = 0.0;   // <e^{-beta W}>
  double exact = 0.0;      // e^{-beta dF}
  double stderr_est = 0.0; // jackknife
  double mean_work = 0.0;
  double se_work = 0.0;
  double delta_f = 0.0;
  std::size_t n = 0;
  std::vector<double> works;  // per-sample W
};

JarzynskiResult classical_jarzynski(const CanonicalSpec& spec,
                                    const ProtocolSpec& protocol,
                                    std::size_t n, std::uint64_t seed,
                                    double dt);

// Gibbs weights p_n over harmonic eigenstates n <= n_max; throws when the
// discarded tail exceeds 1e-10.
std::vector<double> quantum_gibbs_mixture(double beta, double omega,
                                          std::size_t n_max, double hbar = 1.0);

enum class HoKind { classical, quantum };

// dF between harmonic wells omega1 -> omega2 at inverse temperature beta.
double free_energy_diff(HoKind kind, double beta, double omega1, double omega2,
                        double hbar = 1.0);

// Jackknife standard error of the mean of samples.
double jackknife_se(const std::vector<double>& samples);

struct BohmianJarzynskiConfig {
  double beta = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  ProtocolSpec protocol;          // stiffness or translation drive
  std::size_t grid_points = 1024;
  double grid_half_width = 15.0;
  double dt = 0.005;
  std::size_t n_max = 12;         // Gibbs truncation
  std::size_t n_traj = 400;       // trajectories per eigenstate
  std::uint64_t seed = 1;
  workfun::WorkKind work_kind = workfun::WorkKind::energetic;
};

struct EigenstateContribution {
  std::size_t level = 0;
  double weight = 0.0;
  double mean_exp_work = 0.0;
  double se_exp_work = 0.0;
  double mean_work = 0.0;
};

struct BohmianJarzynskiResult {
  double estimate = 0.0;
  double exact = 0.0;
  double stderr_est = 0.0;
  double gap_sigmas = 0.0;
  // Trajectories whose force records were too node-afflicted for a reliable
  // W_M integral (mechanical runs only); excluded from the means.
  std::size_t excluded = 0;
  std::vector<EigenstateContribution> per_level;
  // per-trajectory samples: (level, traj id, W, e^{-beta W})
  struct Sample {
    std::size_t level;
    std::size_t traj_id;
    double work;
    double exp_work;
  };
  std::vector<Sample> samples;
};

// Quantum Gibbs mixture of eigenstate pure states, each with a
// quantum-equilibrium trajectory ensemble evolved under the protocol;
// <e^{-beta W}> compared against e^{-beta dF}.
BohmianJarzynskiResult bohmian_jarzynski(const BohmianJarzynskiConfig& config);

}  // namespace qwork::statmech
