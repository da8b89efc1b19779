#include <doctest.h>

#include <cmath>
#include <vector>

#include "qwork/field1d.hpp"
#include "qwork/statmech.hpp"

using namespace qwork::statmech;
using qwork::field1d::Protocol;

namespace {

ProtocolSpec translation(double distance, double t_span,
                         Protocol::Shape shape = Protocol::Shape::linear) {
  ProtocolSpec p;
  p.kind = ProtocolSpec::Kind::translation;
  p.t_span = t_span;
  p.drive = Protocol::ramp(shape, 0.0, distance, 0.0, t_span);
  return p;
}

ProtocolSpec stiffness(double w1, double w2, double t_span) {
  ProtocolSpec p;
  p.kind = ProtocolSpec::Kind::stiffness;
  p.t_span = t_span;
  p.drive = Protocol::ramp(Protocol::Shape::quintic, w1, w2, 0.0, t_span);
  return p;
}

ProtocolSpec static_protocol(double omega) {
  ProtocolSpec p;
  p.kind = ProtocolSpec::Kind::stiffness;
  p.t_span = 1.0;
  p.drive = Protocol::constant(omega);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("statmech");

TEST_CASE("canonical sampling: equipartition, energy, determinism") {
  CanonicalSpec spec;
  spec.beta = 1.0;
  const auto protocol = static_protocol(1.0);
  const std::size_t n = 100000;
  const auto points = classical_gibbs_sample(spec, protocol, n, 42);

  double var_x = 0.0, var_p = 0.0, mean_h = 0.0;
  for (const auto& z : points) {
    var_x += z.x * z.x;
    var_p += z.p * z.p;
    mean_h += 0.5 * z.p * z.p + 0.5 * z.x * z.x;
  }
  var_x /= static_cast<double>(n);
  var_p /= static_cast<double>(n);
  mean_h /= static_cast<double>(n);

  const double band = 4.0 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(std::abs(var_x - 1.0) < band);
  CHECK(std::abs(var_p - 1.0) < band);
  // <H> = kT for the 1-D oscillator; SE of the mean ~ 1/sqrt(n).
  CHECK(std::abs(mean_h - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));

  const auto again = classical_gibbs_sample(spec, protocol, 100, 42);
  const auto first = classical_gibbs_sample(spec, protocol, 100, 42);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(again[i].x == first[i].x);
    CHECK(again[i].p == first[i].p);
  }
}

TEST_CASE("classical work: static drive does nothing, W tracks dH") {
  CanonicalSpec spec;
  spec.beta = 1.0;
  CHECK(classical_work(spec, static_protocol(1.0), {0.7, -0.3}, 1e-3) == 0.0);

  // Work bookkeeping |W - dH| stays at the integrator's O(dt^2).
  const auto protocol = translation(2.0, 4.0);
  for (const PhasePoint z0 : {PhasePoint{0.5, 0.2}, PhasePoint{-1.1, 0.8}}) {
    const auto run = classical_trajectory(spec, protocol, z0, 4.0 / 4000.0);
    CHECK(std::abs(run.work - run.delta_h) < 1e-4);
  }
}

TEST_CASE("classical work: quasi-static drag does vanishing work") {
  CanonicalSpec spec;
  spec.beta = 1.0;
  auto mean_work = [&](double t_span) {
    const auto protocol = translation(2.0, t_span);
    const auto points = classical_gibbs_sample(spec, protocol, 100, 11);
    double acc = 0.0;
    for (const auto& z : points)
      acc += classical_work(spec, protocol, z, t_span / 3000.0);
    return acc / 100.0;
  };
  const double fast = mean_work(2.0);
  const double mid = mean_work(8.0);
  const double slow = mean_work(32.0);
  CHECK(mid < fast);
  CHECK(slow < mid);
  CHECK(std::abs(slow) < 0.01);
}

TEST_CASE("classical Jarzynski: dragged trap and stiffness ramp") {
  CanonicalSpec spec;
  spec.beta = 1.0;

  const auto drag = classical_jarzynski(spec, translation(2.0, 4.0), 4000, 19,
                                        4.0 / 4000.0);
  CHECK(std::abs(drag.estimate - 1.0) < 4.0 * drag.stderr_est);
  CHECK(drag.exact == doctest::Approx(1.0));
  CHECK(drag.mean_work >= drag.delta_f);

  const auto stiff = classical_jarzynski(spec, stiffness(1.0, 1.5, 8.0), 4000,
                                         23, 8.0 / 4000.0);
  CHECK(stiff.delta_f == doctest::Approx(std::log(1.5)));
  CHECK(stiff.exact == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(stiff.estimate - stiff.exact) < 4.0 * stiff.stderr_est);
  CHECK(stiff.mean_work >= stiff.delta_f);

  // n below the floor is rejected.
  CHECK_THROWS_AS(classical_jarzynski(spec, translation(2.0, 4.0), 10, 1, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("quantum Gibbs mixture: limits and the geometric form") {
  // beta -> infinity: the ground state carries everything.
  const auto cold = quantum_gibbs_mixture(50.0, 1.0, 2);
  CHECK(cold[0] == doctest::Approx(1.0).epsilon(1e-12));

  // beta hbar w = 1: p_n = (1 - e^-1) e^-n.
  const auto warm = quantum_gibbs_mixture(1.0, 1.0, 30);
  const double q = std::exp(-1.0);
  for (std::size_t k = 0; k < 10; ++k)
    CHECK(warm[k] ==
          doctest::Approx((1.0 - q) * std::pow(q, static_cast<double>(k)))
              .epsilon(1e-10));

  double total = 0.0, mean_e = 0.0;
  for (std::size_t k = 0; k < warm.size(); ++k) {
    total += warm[k];
    mean_e += warm[k] * (static_cast<double>(k) + 0.5);
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  const double coth = 1.0 / std::tanh(0.5);
  CHECK(std::abs(mean_e - 0.5 * coth) < 1e-8);

  // Tail above 1e-10 is rejected.
  CHECK_THROWS_AS(quantum_gibbs_mixture(1.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("free energy differences") {
  CHECK(free_energy_diff(HoKind::classical, 2.0, 1.0, 1.0) == 0.0);
  CHECK(free_energy_diff(HoKind::quantum, 2.0, 1.3, 1.3) == 0.0);
  CHECK(free_energy_diff(HoKind::classical, 2.0, 1.0, 1.5) ==
        doctest::Approx(std::log(1.5) / 2.0));

  // Quantum -> classical as beta hbar w -> 0, with the known first
  // correction beta hbar^2 (w2^2 - w1^2) / 24.
  const double beta = 0.01, w1 = 1.0, w2 = 1.5;
  const double dq = free_energy_diff(HoKind::quantum, beta, w1, w2);
  const double dc = free_energy_diff(HoKind::classical, beta, w1, w2);
  const double correction = beta * (w2 * w2 - w1 * w1) / 24.0;
  CHECK(std::abs(dq - dc - correction) < 1e-8);
}

TEST_CASE("jackknife SE matches the classical SE of a mean") {
  std::vector<double> xs = {0.1, 0.5, -0.3, 1.2, 0.8, -0.6, 0.0, 0.4};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double classic =
      std::sqrt(ss / static_cast<double>(xs.size() * (xs.size() - 1)));
  CHECK(jackknife_se(xs) == doctest::Approx(classic).epsilon(1e-12));
}

TEST_CASE("bohmian jarzynski: static protocol is exactly trivial") {
  BohmianJarzynskiConfig config;
  config.beta = 2.0;
  config.protocol = static_protocol(1.0);
  config.grid_points = 512;
  config.grid_half_width = 12.0;
  config.dt = 0.01;
  config.n_max = 12;
  config.n_traj = 40;
  config.seed = 4;
  config.work_kind = qwork::workfun::WorkKind::energetic;

  const auto r = bohmian_jarzynski(config);
  CHECK(r.exact == doctest::Approx(1.0));
  CHECK(std::abs(r.estimate - 1.0) < 1e-6);
}

TEST_CASE("bohmian jarzynski: mechanical work path over a short ramp") {
  // Exercises the strided force records and the node-exclusion guard with
  // excited eigenstates in the mixture.
  BohmianJarzynskiConfig config;
  config.beta = 2.5;
  config.protocol = stiffness(1.0, 1.2, 1.5);
  config.grid_points = 512;
  config.grid_half_width = 12.0;
  config.dt = 2.5e-3;
  config.n_max = 10;
  config.n_traj = 30;
  config.seed = 6;
  config.work_kind = qwork::workfun::WorkKind::mechanical;

  const auto r = bohmian_jarzynski(config);
  CHECK(std::isfinite(r.estimate));
  CHECK(r.exact == doctest::Approx(std::exp(
                       -2.5 * free_energy_diff(HoKind::quantum, 2.5, 1.0, 1.2))));
  // W_M per trajectory stays small for eigenstate ensembles (velocities
  // vanish at both ends), so the estimate sits near 1, away from exact.
  CHECK(r.estimate > 0.8);
  CHECK(r.estimate < 1.2);
  CHECK(r.excluded < config.n_traj);  // at most a few node-afflicted paths
  CHECK(r.per_level.size() == config.n_max + 1);
}

TEST_CASE("bohmian jarzynski rejects translation protocols") {
  BohmianJarzynskiConfig config;
  config.protocol = translation(1.0, 1.0);
  CHECK_THROWS_AS(bohmian_jarzynski(config), std::invalid_argument);
}

TEST_SUITE_END();
