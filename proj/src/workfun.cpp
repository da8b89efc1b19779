#include "qwork/workfun.hpp"

#include <cmath>
#include <stdexcept>

#include "qwork/kernels.hpp"

namespace qwork::workfun {

double simpson_uniform(const std::vector<double>& f, double dt) {
  const std::size_t m = f.size();
  if (m < 2) return 0.0;
  const std::size_t intervals = m - 1;
  if (intervals == 1) return 0.5 * dt * (f[0] + f[1]);

  double acc = 0.0;
  std::size_t even_end = intervals;
  if (intervals % 2 == 1) {
    even_end = intervals - 3;
    // 3/8 rule on the last three intervals.
    const std::size_t k = m - 4;
    acc += 3.0 * dt / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  for (std::size_t i = 0; i + 2 <= even_end; i += 2)
    acc += dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  return acc;
}

namespace {

double record_dt(const Trajectory& traj) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("work functional: trajectory too short");
  return traj.times[1] - traj.times[0];
}

void require_field_samples(const Trajectory& traj) {
  if (traj.force_samples.size() != traj.times.size() ||
      traj.local_energy_samples.size() != traj.times.size())
    throw std::invalid_argument(
        "work functional: trajectory lacks field samples (sample_fields?)");
}

}  // namespace

double mechanical_work(const Trajectory& traj, double masked_fraction_limit) {
  require_field_samples(traj);
  const double dt = record_dt(traj);
  const std::size_t m = traj.times.size();
  const double masked_fraction =
      static_cast<double>(traj.force_fallbacks) / static_cast<double>(m);
  if (masked_fraction > masked_fraction_limit)
    throw std::runtime_error(
        "mechanical_work: too many masked-force samples for a reliable "
        "integral");

  std::vector<double> integrand(m);
  for (std::size_t k = 0; k < m; ++k)
    integrand[k] = traj.force_samples[k] * traj.velocities[k];
  return simpson_uniform(integrand, dt);
}

double energetic_work(const Trajectory& traj) {
  require_field_samples(traj);
  return traj.local_energy_samples.back() - traj.local_energy_samples.front();
}

double energetic_work_integral(const Trajectory& traj) {
  if (traj.dEdt_mid.empty())
    throw std::invalid_argument(
        "energetic_work_integral: no dE/dt records (record_stride 1 required)");
  const double dt = record_dt(traj);
  // Midpoint rule: the samples already sit at interval midpoints.
  return kernels::sum(traj.dEdt_mid.data(), traj.dEdt_mid.size()) * dt;
}

WorkRecord work_decomposition(const Trajectory& traj, const PotentialSpec& v) {
  require_field_samples(traj);
  WorkRecord rec;
  rec.traj_id = traj.id;
  rec.mechanical = mechanical_work(traj);
  rec.energetic = energetic_work(traj);
  const double v1 = traj.velocities.front(), v2 = traj.velocities.back();
  rec.delta_kinetic = 0.5 * v.mass() * (v2 * v2 - v1 * v1);
  rec.delta_potential =
      traj.potential_samples.back() - traj.potential_samples.front();
  rec.delta_quantum =
      traj.quantum_samples.back() - traj.quantum_samples.front();
  return rec;
}

double expected_power(const Wavefunction& psi, const PotentialSpec& v) {
  const bohmdyn::BohmFields f = bohmdyn::bohm_fields(psi, v);
  const std::size_t n = psi.grid.n_points;
  std::vector<double> integrand(n, 0.0);
  const double inv_mass = 1.0 / v.mass();
  for (std::size_t i = 0; i < n; ++i)
    if (f.valid[i])
      integrand[i] = f.rho[i] * f.force[i] * f.grad_s[i] * inv_mass;
  return kernels::sum(integrand.data(), n) * psi.grid.dx;
}

double expected_quantum_force_gradient(const Wavefunction& psi,
                                       const PotentialSpec& v) {
  const std::size_t n = psi.grid.n_points;
  // rho dQ/dx = -(hbar^2/2m) (R''' R - R' R''); no divisions, so the machine
  // tails contribute nothing and the quadrature is spectrally accurate.
  std::vector<field1d::cdouble> r_complex(n);
  for (std::size_t i = 0; i < n; ++i)
    r_complex[i] = std::abs(psi.amplitudes[i]);
  Wavefunction r_field{psi.grid, std::move(r_complex), psi.time};
  std::vector<std::vector<field1d::cdouble>> dr;
  field1d::spectral_derivatives(r_field, 3, dr);

  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = r_field.amplitudes[i].real();
    integrand[i] = dr[2][i].real() * r - dr[0][i].real() * dr[1][i].real();
  }
  const double c_q = v.hbar() * v.hbar() / (2.0 * v.mass());
  return -c_q * kernels::sum(integrand.data(), n) * psi.grid.dx;
}

EnsembleWork ensemble_work(std::vector<WorkRecord> records,
                           std::vector<double> weights) {
  const std::size_t n = records.size();
  if (n == 0) throw std::invalid_argument("ensemble_work: empty ensemble");
  if (weights.empty())
    weights.assign(n, 1.0 / static_cast<double>(n));
  if (weights.size() != n)
    throw std::invalid_argument("ensemble_work: weight count mismatch");
  const double wsum = kernels::sum(weights.data(), n);
  if (std::abs(wsum - 1.0) > 1e-10)
    throw std::invalid_argument("ensemble_work: weights do not sum to 1");

  EnsembleWork out;
  out.per_traj = std::move(records);
  out.weights = std::move(weights);

  std::vector<double> wm(n), we(n);
  for (std::size_t i = 0; i < n; ++i) {
    wm[i] = out.weights[i] * out.per_traj[i].mechanical;
    we[i] = out.weights[i] * out.per_traj[i].energetic;
  }
  out.mean_mechanical = kernels::sum(wm.data(), n);
  out.mean_energetic = kernels::sum(we.data(), n);

  for (std::size_t i = 0; i < n; ++i) {
    const double dm = out.per_traj[i].mechanical - out.mean_mechanical;
    const double de = out.per_traj[i].energetic - out.mean_energetic;
    wm[i] = out.weights[i] * out.weights[i] * dm * dm;
    we[i] = out.weights[i] * out.weights[i] * de * de;
  }
  out.se_mechanical = std::sqrt(kernels::sum(wm.data(), n));
  out.se_energetic = std::sqrt(kernels::sum(we.data(), n));
  return out;
}

double exponential_average(const EnsembleWork& ensemble, double beta,
                           WorkKind kind) {
  const std::size_t n = ensemble.per_traj.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = kind == WorkKind::mechanical
                         ? ensemble.per_traj[i].mechanical
                         : ensemble.per_traj[i].energetic;
    terms[i] = ensemble.weights[i] * std::exp(-beta * w);
  }
  return kernels::sum(terms.data(), n);
}

std::pair<double, double> power_split(
    const std::vector<Wavefunction>& psi_series, const PotentialSpec& v) {
  if (psi_series.size() < 2)
    throw std::invalid_argument("power_split: need at least two snapshots");
  const double dt = psi_series[1].time - psi_series[0].time;
  if (!(dt > 0.0))
    throw std::invalid_argument("power_split: snapshots must advance in time");

  std::vector<double> classical_series, quantum_series;
  classical_series.reserve(psi_series.size());
  quantum_series.reserve(psi_series.size());
  const double inv_mass = 1.0 / v.mass();

  for (const Wavefunction& psi : psi_series) {
    const bohmdyn::BohmFields f = bohmdyn::bohm_fields(psi, v);
    const std::size_t n = psi.grid.n_points;
    std::vector<double> c_term(n, 0.0), q_term(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!f.valid[i]) continue;
      const double vel = f.grad_s[i] * inv_mass;
      const double grad_v = v.grad(psi.grid.x(i), psi.time);
      const double grad_q = -f.force[i] - grad_v;
      c_term[i] = f.rho[i] * (-grad_v) * vel;
      q_term[i] = f.rho[i] * grad_q * vel;
    }
    classical_series.push_back(kernels::sum(c_term.data(), n) * psi.grid.dx);
    quantum_series.push_back(kernels::sum(q_term.data(), n) * psi.grid.dx);
  }
  return {simpson_uniform(classical_series, dt),
          simpson_uniform(quantum_series, dt)};
}

}  // namespace qwork::workfun
