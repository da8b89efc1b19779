#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwork/bohmdyn.hpp"
#include "qwork/field1d.hpp"

using namespace qwork::bohmdyn;
using namespace qwork::field1d;

namespace {

constexpr double kPi = 3.14159265358979323846;

Grid1D default_grid() { return Grid1D::centered(1024, 15.0); }

PotentialSpec harmonic_static(double omega) {
  return PotentialSpec::harmonic(1.0, omega, Protocol::constant(0.0));
}

}  // namespace

TEST_SUITE_BEGIN("bohmdyn");

TEST_CASE("ground-state fields: no flow, constant total potential, no force") {
  const Grid1D grid = default_grid();
  const auto v = harmonic_static(1.0);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 0);
  const BohmFields f = bohm_fields(basis.states[0], v);

  double grad_s_max = 0.0, qv_dev = 0.0, force_max = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    if (!f.valid[i]) continue;
    grad_s_max = std::max(grad_s_max, std::abs(f.grad_s[i]));
    qv_dev = std::max(qv_dev, std::abs(f.quantum_potential[i] +
                                       v(grid.x(i), 0.0) - 0.5));
    force_max = std::max(force_max, std::abs(f.force[i]));
  }
  CHECK(grad_s_max < 1e-8);
  CHECK(qv_dev < 1e-6);      // Q + V = hbar w / 2 on valid points
  CHECK(force_max < 1e-6);
}

TEST_CASE("free Gaussian at t = 0: no flow and the analytic quantum potential") {
  const Grid1D grid = default_grid();
  const auto v = PotentialSpec::free_particle();
  const double sigma0 = 1.0;
  const auto psi = gaussian_packet(grid, 0.0, sigma0);
  const BohmFields f = bohm_fields(psi, v);

  const double c = 1.0 / (4.0 * sigma0 * sigma0);
  for (std::size_t i = 0; i < grid.n_points; i += 16) {
    if (!f.valid[i]) continue;
    const double x = grid.x(i);
    CHECK(std::abs(f.grad_s[i]) < 1e-8);
    const double q_exact = c * (1.0 - x * x / (2.0 * sigma0 * sigma0));
    CHECK(std::abs(f.quantum_potential[i] - q_exact) < 1e-6);
  }
}

TEST_CASE("broad carrier packet: grad S matches hbar k0 at the center") {
  const Grid1D grid = Grid1D::centered(1024, 30.0);
  const auto v = PotentialSpec::free_particle();
  const double k0 = 2.0;
  const auto psi = gaussian_packet(grid, 0.0, 3.0, k0);
  const BohmFields f = bohm_fields(psi, v);
  const std::size_t center = grid.n_points / 2;
  CHECK(std::abs(f.grad_s[center] - k0) / k0 < 1e-4);
}

TEST_CASE("quantum Hamilton-Jacobi residual on the three reference states") {
  const Grid1D grid = default_grid();
  const auto vh = harmonic_static(1.0);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 1);

  CHECK(qhj_residual_max(basis.states[0], vh) < 1e-6);
  CHECK(qhj_residual_max(basis.states[1], vh) < 1e-6);  // node at the origin

  const auto vf = PotentialSpec::free_particle();
  Wavefunction packet = gaussian_packet(grid, 0.0, 1.0);
  evolve(packet, vf, 1e-3, 1000);
  CHECK(qhj_residual_max(packet, vf) < 1e-6);
}

TEST_CASE("quantum equilibrium sampling: mean, KS, determinism") {
  const Grid1D grid = default_grid();
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 0);
  const std::size_t n = 10000;

  const auto xs = sample_quantum_equilibrium(basis.states[0], n, 77);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  const double sigma = std::sqrt(0.5);  // ground-state position std
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));

  CHECK(ks_distance(xs, basis.states[0]) <
        1.63 / std::sqrt(static_cast<double>(n)));

  const auto again = sample_quantum_equilibrium(basis.states[0], n, 77);
  CHECK(xs == again);
}

TEST_CASE("ground-state trajectories stay put") {
  const Grid1D grid = Grid1D::centered(512, 12.0);
  const auto v = harmonic_static(1.0);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 0);

  IntegrateOptions opts;
  opts.sample_fields = false;
  opts.record_stride = 100;
  const std::vector<double> x0 = {-0.8, -0.2, 0.5, 1.1};
  const auto trajs = integrate_trajectories(basis.states[0], v, x0,
                                            2.0 * kPi, 2.5e-4, opts);
  for (std::size_t j = 0; j < trajs.size(); ++j)
    for (double x : trajs[j].positions)
      CHECK(std::abs(x - x0[j]) < 1e-8);
}

TEST_CASE("free Gaussian trajectories follow x0 sigma(t)/sigma0") {
  const Grid1D grid = Grid1D::centered(2048, 20.0);
  const auto v = PotentialSpec::free_particle();
  const double sigma0 = 1.0;
  const auto psi = gaussian_packet(grid, 0.0, sigma0);

  const std::vector<double> x0 = {-2.0, -1.0, -0.3, 0.4, 1.0, 2.2};
  const double t_final = 2.0;
  const auto trajs = integrate_trajectories(psi, v, x0, t_final, 0.01);
  const double spread =
      std::sqrt(1.0 + std::pow(t_final / (2.0 * sigma0 * sigma0), 2));
  for (std::size_t j = 0; j < x0.size(); ++j) {
    const double exact = x0[j] * spread;
    CHECK(std::abs(trajs[j].positions.back() - exact) / std::abs(exact) < 1e-4);
  }
}

TEST_CASE("trajectory RK4 converges at least 8x under dt halving") {
  const Grid1D grid = Grid1D::centered(2048, 20.0);
  const auto v = PotentialSpec::free_particle();
  const auto psi = gaussian_packet(grid, 0.0, 1.0);
  const std::vector<double> x0 = {1.0};
  const double t_final = 2.0;
  const double exact = x0[0] * std::sqrt(1.0 + 1.0);  // sigma(2)/sigma(0)

  IntegrateOptions opts;
  opts.sample_fields = false;
  opts.record_stride = 1000000;  // endpoints only
  auto end_error = [&](double dt) {
    const auto trajs = integrate_trajectories(psi, v, x0, t_final, dt, opts);
    return std::abs(trajs[0].positions.back() - exact);
  };
  const double coarse = end_error(0.5);
  const double fine = end_error(0.25);
  CHECK(coarse / fine >= 8.0);
}

TEST_CASE("non-crossing: sorted starts stay sorted under driving") {
  const Grid1D grid = default_grid();
  const double t_final = 3.0;
  const auto center =
      Protocol::ramp(Protocol::Shape::cubic, 0.0, 1.0, 0.0, t_final);
  const auto v = PotentialSpec::harmonic(1.0, 1.0, center);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 0);

  auto x0 = sample_quantum_equilibrium(basis.states[0], 200, 5);
  std::sort(x0.begin(), x0.end());
  IntegrateOptions opts;
  opts.sample_fields = false;
  const auto trajs = integrate_trajectories(basis.states[0], v, x0, t_final,
                                            2e-3, opts);
  for (std::size_t k = 0; k < trajs[0].positions.size(); ++k)
    for (std::size_t j = 1; j < trajs.size(); ++j)
      CHECK(trajs[j].positions[k] > trajs[j - 1].positions[k]);
}

TEST_CASE("equivariance: free spreading keeps the ensemble |psi(t)|^2") {
  const Grid1D grid = Grid1D::centered(1024, 20.0);
  const auto v = PotentialSpec::free_particle();
  const double sigma0 = 1.0;
  const auto psi0 = gaussian_packet(grid, 0.0, sigma0);
  const std::size_t n = 10000;
  const double t_final = 2.0;  // 2 m sigma0^2 / hbar

  const auto x0 = sample_quantum_equilibrium(psi0, n, 13);
  IntegrateOptions opts;
  opts.sample_fields = false;
  opts.record_stride = 1000000;
  const auto trajs = integrate_trajectories(psi0, v, x0, t_final, 5e-3, opts);

  Wavefunction psi_t = psi0;
  evolve(psi_t, v, 5e-3, 400);
  const double ks = equivariance_check(trajs, psi_t);
  const double sigma_t =
      sigma0 * std::sqrt(1.0 + std::pow(t_final / (2.0 * sigma0 * sigma0), 2));
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)) +
                 2.0 * grid.dx / sigma_t);
}

TEST_CASE("Newton's law holds along driven trajectories") {
  const Grid1D grid = default_grid();
  const double t_final = 2.0;
  const auto center =
      Protocol::ramp(Protocol::Shape::quintic, 0.0, 1.0, 0.0, t_final);
  const auto v = PotentialSpec::harmonic(1.0, 1.0, center);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 0);

  const std::vector<double> x0 = {-0.5, 0.3};
  const double dt = 1e-3;
  const auto trajs = integrate_trajectories(basis.states[0], v, x0, t_final, dt);
  for (const auto& traj : trajs) {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.times.size(); ++k) {
      const double accel =
          (traj.velocities[k + 1] - traj.velocities[k - 1]) / (2.0 * dt);
      worst = std::max(worst, std::abs(accel - traj.force_samples[k]));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("node guard: fields masked near the excited-state node") {
  const Grid1D grid = default_grid();
  const auto v = harmonic_static(1.0);
  const auto basis = ho_eigenstates(grid, 1.0, 1.0, 1);
  const BohmFields f = bohm_fields(basis.states[1], v);

  const std::size_t center = grid.n_points / 2;  // node at x = 0
  CHECK_FALSE(f.valid[center]);
  // Valid points dominate.
  std::size_t n_valid = 0;
  for (auto b : f.valid) n_valid += b;
  CHECK(n_valid > grid.n_points / 4);
}

TEST_CASE("input validation") {
  const Grid1D grid = Grid1D::centered(128, 8.0);
  const auto v = PotentialSpec::free_particle();
  const auto psi = gaussian_packet(grid, 0.0, 0.7);
  CHECK_THROWS_AS(
      integrate_trajectories(psi, v, {7.99}, 1.0, 0.01),
      std::invalid_argument);  // outside the trusted interior
  CHECK_THROWS_AS(integrate_trajectories(psi, v, {0.0}, -1.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_quantum_equilibrium(psi, 0, 1), std::invalid_argument);
}

TEST_SUITE_END();
