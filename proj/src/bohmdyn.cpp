#include "qwork/bohmdyn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qwork/fft.hpp"
#include "qwork/kernels.hpp"
#include "qwork/rng.hpp"

namespace qwork::bohmdyn {

using field1d::cdouble;

namespace {

// Spectral d^m/dx^m of an arbitrary complex array on the grid.
void derivatives_raw(const std::vector<cdouble>& data, const Grid1D& grid,
                     std::size_t orders,
                     std::vector<std::vector<cdouble>>& out) {
  const std::size_t n = grid.n_points;
  std::vector<cdouble> k_space(n), scratch(n);
  fft::forward(data.data(), k_space.data(), n);
  const std::vector<double> k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);

  out.assign(orders, std::vector<cdouble>(n));
  std::vector<cdouble> powers = std::move(k_space);
  for (std::size_t m = 1; m <= orders; ++m) {
    for (std::size_t i = 0; i < n; ++i) powers[i] *= cdouble{0.0, k[i]};
    fft::inverse(powers.data(), scratch.data(), n);
    auto& dst = out[m - 1];
    for (std::size_t i = 0; i < n; ++i) dst[i] = scratch[i] * inv_n;
  }
}

}  // namespace

BohmFields bohm_fields(const Wavefunction& psi, const PotentialSpec& v,
                       double node_eps) {
  const std::size_t n = psi.grid.n_points;
  const double hbar = v.hbar();
  const double mass = v.mass();
  const double c_q = hbar * hbar / (2.0 * mass);

  BohmFields f;
  f.rho.resize(n);
  kernels::density(psi.amplitudes.data(), f.rho.data(), n);
  f.rho_max = *std::max_element(f.rho.begin(), f.rho.end());
  if (!(f.rho_max > 0.0))
    throw std::runtime_error("bohm_fields: zero wavefunction");

  std::vector<std::vector<cdouble>> dpsi;
  derivatives_raw(psi.amplitudes, psi.grid, 2, dpsi);

  std::vector<cdouble> rho_c(n);
  for (std::size_t i = 0; i < n; ++i) rho_c[i] = f.rho[i];
  std::vector<std::vector<cdouble>> drho;
  derivatives_raw(rho_c, psi.grid, 3, drho);

  f.amplitude.resize(n);
  f.grad_s.assign(n, 0.0);
  f.quantum_potential.assign(n, 0.0);
  f.force.assign(n, 0.0);
  f.local_energy.assign(n, 0.0);
  f.valid.assign(n, 0);

  const double threshold = node_eps * f.rho_max;
  std::size_t n_valid = 0;
  for (std::size_t i = 0; i < n; ++i) {
    f.amplitude[i] = std::sqrt(f.rho[i]);
    if (f.rho[i] < threshold) continue;
    f.valid[i] = 1;
    ++n_valid;

    const cdouble conj_psi = std::conj(psi.amplitudes[i]);
    const double rho_i = f.rho[i];
    const double x = psi.grid.x(i);

    f.grad_s[i] = hbar * (conj_psi * dpsi[0][i]).imag() / rho_i;

    // Q and Q' from the log-derivatives of rho: u = rho'/rho, w = rho''/rho;
    // Q = -c (w/2 - u^2/4), Q' = -c (rho'''/(2 rho) - u w + u^3/2).
    const double u = drho[0][i].real() / rho_i;
    const double w = drho[1][i].real() / rho_i;
    f.quantum_potential[i] = -c_q * (0.5 * w - 0.25 * u * u);
    const double q_grad =
        -c_q * (0.5 * drho[2][i].real() / rho_i - u * w + 0.5 * u * u * u);
    f.force[i] = -(v.grad(x, psi.time) + q_grad);

    f.local_energy[i] =
        -c_q * (conj_psi * dpsi[1][i]).real() / rho_i + v(x, psi.time);
  }
  if (n_valid == 0)
    throw std::runtime_error("bohm_fields: all points below the node guard");
  return f;
}

double qhj_residual_max(const Wavefunction& psi, const PotentialSpec& v,
                        double node_eps) {
  const BohmFields f = bohm_fields(psi, v, node_eps);
  const double inv_2m = 1.0 / (2.0 * v.mass());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.valid.size(); ++i) {
    if (!f.valid[i]) continue;
    const double hj = f.grad_s[i] * f.grad_s[i] * inv_2m +
                      v(psi.grid.x(i), psi.time) + f.quantum_potential[i];
    worst = std::max(worst, std::abs(f.local_energy[i] - hj));
  }
  return worst;
}

namespace {

// CDF over cell edges; cell i covers [x(i) - dx/2, x(i) + dx/2) with mass
// rho_i dx. Shared by the sampler and the KS statistic.
struct CellCdf {
  const Grid1D* grid;
  std::vector<double> edges;  // size n+1, edges[0] = 0, edges[n] = 1

  explicit CellCdf(const Wavefunction& psi) : grid(&psi.grid) {
    const std::size_t n = psi.grid.n_points;
    std::vector<double> rho(n);
    kernels::density(psi.amplitudes.data(), rho.data(), n);
    edges.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      edges[i + 1] = edges[i] + std::max(rho[i], 0.0);
    const double total = edges[n];
    for (double& e : edges) e /= total;
  }

  double x_left(std::size_t i) const {
    return grid->x(i) - 0.5 * grid->dx;
  }

  // Piecewise-linear CDF evaluated at x.
  double operator()(double x) const {
    const std::size_t n = grid->n_points;
    const double u = (x - x_left(0)) / grid->dx;
    if (u <= 0.0) return 0.0;
    if (u >= static_cast<double>(n)) return 1.0;
    const auto cell = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(cell);
    return edges[cell] + frac * (edges[cell + 1] - edges[cell]);
  }

  // Inverse CDF with linear interpolation inside the chosen cell.
  double inverse(double p) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), p);
    std::size_t cell = it == edges.begin()
                           ? 0
                           : static_cast<std::size_t>(it - edges.begin()) - 1;
    cell = std::min(cell, grid->n_points - 1);
    const double span = edges[cell + 1] - edges[cell];
    const double frac = span > 0.0 ? (p - edges[cell]) / span : 0.5;
    return x_left(cell) + grid->dx * std::clamp(frac, 0.0, 1.0);
  }
};

}  // namespace

std::vector<double> sample_quantum_equilibrium(const Wavefunction& psi,
                                               std::size_t n,
                                               std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("sample_quantum_equilibrium: n must be >= 1");
  const CellCdf cdf(psi);
  rng::Stream stream(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = cdf.inverse(stream.uniform());
  return xs;
}

double ks_distance(std::vector<double> positions, const Wavefunction& psi) {
  if (positions.empty())
    throw std::invalid_argument("ks_distance: no positions");
  const CellCdf cdf(psi);
  std::sort(positions.begin(), positions.end());
  const auto n = static_cast<double>(positions.size());
  double d = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double f = cdf(positions[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(hi - f)));
  }
  return d;
}

double equivariance_check(const std::vector<Trajectory>& trajectories,
                          const Wavefunction& psi) {
  if (trajectories.size() < 1000)
    throw std::invalid_argument("equivariance_check: need >= 1000 trajectories");
  std::vector<double> xs;
  xs.reserve(trajectories.size());
  for (const Trajectory& traj : trajectories) {
    // Record closest in time to psi.time.
    std::size_t best = 0;
    double best_gap = std::abs(traj.times.front() - psi.time);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      const double gap = std::abs(traj.times[k] - psi.time);
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    xs.push_back(traj.positions[best]);
  }
  return ks_distance(std::move(xs), psi);
}

namespace {

struct Snapshot {
  std::vector<double> velocity;
  std::vector<std::uint8_t> valid;
};

// Velocity field only (one forward + one inverse transform).
Snapshot velocity_snapshot(const Wavefunction& psi, const PotentialSpec& v,
                           double node_eps) {
  const std::size_t n = psi.grid.n_points;
  Snapshot snap;
  snap.velocity.assign(n, 0.0);
  snap.valid.assign(n, 0);

  std::vector<double> rho(n);
  kernels::density(psi.amplitudes.data(), rho.data(), n);
  const double rho_max = *std::max_element(rho.begin(), rho.end());
  const double threshold = node_eps * rho_max;

  std::vector<std::vector<cdouble>> dpsi;
  derivatives_raw(psi.amplitudes, psi.grid, 1, dpsi);
  const double scale = v.hbar() / v.mass();
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i] < threshold) continue;
    snap.valid[i] = 1;
    snap.velocity[i] =
        scale * (std::conj(psi.amplitudes[i]) * dpsi[0][i]).imag() / rho[i];
  }
  return snap;
}

Snapshot snapshot_from_fields(const BohmFields& f, double mass) {
  Snapshot snap;
  const std::size_t n = f.grad_s.size();
  snap.velocity.assign(n, 0.0);
  snap.valid = f.valid;
  for (std::size_t i = 0; i < n; ++i)
    if (f.valid[i]) snap.velocity[i] = f.grad_s[i] / mass;
  return snap;
}

// 4-point Lagrange interpolation at fractional grid position; falls back to
// the nearest valid cell when the stencil touches masked points.
double sample_array(const std::vector<double>& arr,
                    const std::vector<std::uint8_t>& valid, const Grid1D& grid,
                    double x, std::size_t* events) {
  const std::size_t n = grid.n_points;
  const double u = (x - grid.x_min) / grid.dx;
  const auto i0 = static_cast<std::ptrdiff_t>(std::floor(u));
  const double t = u - static_cast<double>(i0);

  const auto sn = static_cast<std::ptrdiff_t>(n);
  auto wrap = [sn](std::ptrdiff_t i) {
    i %= sn;
    return static_cast<std::size_t>(i < 0 ? i + sn : i);
  };
  const std::size_t im1 = wrap(i0 - 1), ic = wrap(i0), ip1 = wrap(i0 + 1),
                    ip2 = wrap(i0 + 2);

  if (valid[im1] && valid[ic] && valid[ip1] && valid[ip2]) {
    const double w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return w_m1 * arr[im1] + w_0 * arr[ic] + w_1 * arr[ip1] + w_2 * arr[ip2];
  }

  // Nearest valid cell, scanning outward.
  if (events) ++(*events);
  const std::size_t base = t < 0.5 ? ic : ip1;
  for (std::ptrdiff_t radius = 0; radius < sn; ++radius) {
    const std::size_t lo = wrap(static_cast<std::ptrdiff_t>(base) - radius);
    const std::size_t hi = wrap(static_cast<std::ptrdiff_t>(base) + radius);
    if (valid[lo]) return arr[lo];
    if (valid[hi]) return arr[hi];
  }
  throw std::runtime_error("sample_array: no valid cells");
}

}  // namespace

std::vector<Trajectory> integrate_trajectories(const Wavefunction& psi0,
                                               const PotentialSpec& v,
                                               const std::vector<double>& x0,
                                               double t_final, double dt,
                                               const IntegrateOptions& opts) {
  if (!(dt > 0.0))
    throw std::invalid_argument("integrate_trajectories: dt must be positive");
  if (!(t_final > psi0.time))
    throw std::invalid_argument("integrate_trajectories: t_final in the past");
  if (opts.record_stride == 0)
    throw std::invalid_argument("integrate_trajectories: zero record stride");
  const Grid1D& grid = psi0.grid;
  const double interior_lo = grid.x_min + 5.0 * grid.dx;
  const double interior_hi =
      grid.x_min + grid.length() - 5.0 * grid.dx;
  for (double x : x0)
    if (x <= interior_lo || x >= interior_hi)
      throw std::invalid_argument(
          "integrate_trajectories: start outside the trusted interior");

  const auto steps = static_cast<std::size_t>(
      std::llround((t_final - psi0.time) / dt));
  if (steps == 0)
    throw std::invalid_argument("integrate_trajectories: zero steps");
  const double dt_eff = (t_final - psi0.time) / static_cast<double>(steps);

  std::vector<Trajectory> trajs(x0.size());
  for (std::size_t j = 0; j < x0.size(); ++j) trajs[j].id = j;
  std::vector<double> xs = x0;

  Wavefunction psi = psi0;
  const double mass = v.mass();
  const bool record_dEdt = opts.sample_fields && opts.record_stride == 1;
  auto is_record_step = [&](std::size_t step) {
    return step % opts.record_stride == 0 || step == steps;
  };

  // Full fields are only computed at steps that record (or every step when
  // the dE/dt series is wanted); plain propagation needs just the velocity.
  BohmFields fields_t;
  Snapshot snap_t;
  if (opts.sample_fields) {
    fields_t = bohm_fields(psi, v, opts.node_eps);
    snap_t = snapshot_from_fields(fields_t, mass);
  } else {
    snap_t = velocity_snapshot(psi, v, opts.node_eps);
  }

  auto record = [&](std::size_t step_index, const BohmFields& f,
                    const Snapshot& snap) {
    const double t_now = psi0.time + static_cast<double>(step_index) * dt_eff;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      Trajectory& traj = trajs[j];
      const double x = xs[j];
      traj.times.push_back(t_now);
      traj.positions.push_back(x);
      traj.velocities.push_back(
          sample_array(snap.velocity, snap.valid, grid, x, &traj.node_events));
      if (opts.sample_fields) {
        traj.potential_samples.push_back(v(x, t_now));
        traj.quantum_samples.push_back(sample_array(
            f.quantum_potential, f.valid, grid, x, &traj.node_events));
        traj.local_energy_samples.push_back(
            sample_array(f.local_energy, f.valid, grid, x, &traj.node_events));
        traj.force_samples.push_back(sample_array(f.force, f.valid, grid, x,
                                                  &traj.force_fallbacks));
      }
    }
  };

  for (std::size_t step = 0; step < steps; ++step) {
    if (is_record_step(step)) record(step, fields_t, snap_t);

    // psi advances in two half steps so the RK4 half stages see the true
    // mid-step velocity field.
    field1d::split_step(psi, v, 0.5 * dt_eff);
    const Snapshot snap_mid = velocity_snapshot(psi, v, opts.node_eps);
    field1d::split_step(psi, v, 0.5 * dt_eff);

    BohmFields fields_next;
    Snapshot snap_next;
    const bool full_next =
        opts.sample_fields && (record_dEdt || is_record_step(step + 1));
    if (full_next) {
      fields_next = bohm_fields(psi, v, opts.node_eps);
      snap_next = snapshot_from_fields(fields_next, mass);
    } else {
      snap_next = velocity_snapshot(psi, v, opts.node_eps);
    }

    for (std::size_t j = 0; j < xs.size(); ++j) {
      Trajectory& traj = trajs[j];
      const double x = xs[j];
      const double k1 =
          sample_array(snap_t.velocity, snap_t.valid, grid, x,
                       &traj.node_events);
      const double k2 =
          sample_array(snap_mid.velocity, snap_mid.valid, grid,
                       x + 0.5 * dt_eff * k1, &traj.node_events);
      const double k3 =
          sample_array(snap_mid.velocity, snap_mid.valid, grid,
                       x + 0.5 * dt_eff * k2, &traj.node_events);
      const double k4 =
          sample_array(snap_next.velocity, snap_next.valid, grid,
                       x + dt_eff * k3, &traj.node_events);
      const double x_new = x + dt_eff / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (x_new <= interior_lo || x_new >= interior_hi)
        throw std::runtime_error(
            "integrate_trajectories: trajectory " + std::to_string(j) +
            " left the trusted interior at t = " +
            std::to_string(psi.time) + " (x = " + std::to_string(x_new) + ")");

      if (record_dEdt) {
        // dE/dt along the trajectory equals the fixed-x time derivative of
        // V + Q (Hamilton-Jacobi chain rule); sample it at the step midpoint.
        const double x_mid = 0.5 * (x + x_new);
        const double t_now = psi.time - dt_eff;
        const double q_before = sample_array(
            fields_t.quantum_potential, fields_t.valid, grid, x_mid,
            &traj.node_events);
        const double q_after = sample_array(
            fields_next.quantum_potential, fields_next.valid, grid, x_mid,
            &traj.node_events);
        const double dv = v(x_mid, t_now + dt_eff) - v(x_mid, t_now);
        traj.dEdt_mid.push_back((q_after - q_before + dv) / dt_eff);
      }
      xs[j] = x_new;
    }

    fields_t = std::move(fields_next);
    snap_t = std::move(snap_next);
  }

  record(steps, fields_t, snap_t);
  return trajs;
}

}  // namespace qwork::bohmdyn
