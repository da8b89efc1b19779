#include "qwork/statmech.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwork/bohmdyn.hpp"
#include "qwork/kernels.hpp"
#include "qwork/rng.hpp"

namespace qwork::statmech {

namespace {

double omega_at(const CanonicalSpec& spec, const ProtocolSpec& protocol,
                double t) {
  return protocol.kind == ProtocolSpec::Kind::stiffness ? protocol.drive(t)
                                                        : spec.omega;
}

double center_at(const ProtocolSpec& protocol, double t) {
  return protocol.kind == ProtocolSpec::Kind::translation ? protocol.drive(t)
                                                          : 0.0;
}

double hamiltonian(const CanonicalSpec& spec, const ProtocolSpec& protocol,
                   const PhasePoint& z, double t) {
  const double w = omega_at(spec, protocol, t);
  const double d = z.x - center_at(protocol, t);
  return 0.5 * z.p * z.p / spec.mass + 0.5 * spec.mass * w * w * d * d;
}

double grad_v(const CanonicalSpec& spec, const ProtocolSpec& protocol,
              double x, double t) {
  const double w = omega_at(spec, protocol, t);
  return spec.mass * w * w * (x - center_at(protocol, t));
}

// dH/dlambda at the current drive value.
double dh_dlambda(const CanonicalSpec& spec, const ProtocolSpec& protocol,
                  double x, double t) {
  if (protocol.kind == ProtocolSpec::Kind::translation)
    return -spec.mass * spec.omega * spec.omega * (x - protocol.drive(t));
  const double w = protocol.drive(t);
  const double d = x - 0.0;
  return spec.mass * w * d * d;
}

}  // namespace

std::vector<PhasePoint> classical_gibbs_sample(const CanonicalSpec& spec,
                                               const ProtocolSpec& protocol,
                                               std::size_t n,
                                               std::uint64_t seed) {
  if (!(spec.beta > 0.0))
    throw std::invalid_argument("classical_gibbs_sample: beta must be > 0");
  const double w0 = omega_at(spec, protocol, 0.0);
  const double c0 = center_at(protocol, 0.0);
  const double sigma_x = 1.0 / std::sqrt(spec.beta * spec.mass * w0 * w0);
  const double sigma_p = std::sqrt(spec.mass / spec.beta);

  rng::Stream stream(seed);
  std::vector<PhasePoint> points(n);
  for (PhasePoint& z : points) {
    z.x = c0 + sigma_x * stream.normal();
    z.p = sigma_p * stream.normal();
  }
  return points;
}

ClassicalRun classical_trajectory(const CanonicalSpec& spec,
                                  const ProtocolSpec& protocol, PhasePoint z0,
                                  double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("classical_trajectory: dt must be > 0");
  const auto steps =
      static_cast<std::size_t>(std::llround(protocol.t_span / dt));
  if (steps == 0)
    throw std::invalid_argument("classical_trajectory: zero steps");
  const double h = protocol.t_span / static_cast<double>(steps);

  ClassicalRun run;
  const double h0 = hamiltonian(spec, protocol, z0, 0.0);
  PhasePoint z = z0;
  double work = 0.0, comp = 0.0;  // compensated accumulation

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    // leapfrog: kick / drift / kick with the time-dependent force
    z.p -= 0.5 * h * grad_v(spec, protocol, z.x, t);
    const double x_old = z.x;
    z.x += h * z.p / spec.mass;
    z.p -= 0.5 * h * grad_v(spec, protocol, z.x, t + h);

    // work quadrature at the step midpoint
    const double t_mid = t + 0.5 * h;
    const double x_mid = 0.5 * (x_old + z.x);
    const double term =
        h * protocol.drive.rate(t_mid) * dh_dlambda(spec, protocol, x_mid, t_mid);
    const double s = work + term;
    comp += std::abs(work) >= std::abs(term) ? (work - s) + term
                                             : (term - s) + work;
    work = s;
    if (!std::isfinite(z.x) || !std::isfinite(z.p))
      throw std::runtime_error("classical_trajectory: non-finite state");
  }

  run.work = work + comp;
  run.delta_h = hamiltonian(spec, protocol, z, protocol.t_span) - h0;
  run.final_point = z;
  return run;
}

double classical_work(const CanonicalSpec& spec, const ProtocolSpec& protocol,
                      PhasePoint z0, double dt) {
  return classical_trajectory(spec, protocol, z0, dt).work;
}

double jackknife_se(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  const double total = kernels::sum(samples.data(), n);
  const double mean = total / static_cast<double>(n);
  // Delete-one means; for the plain mean this reduces to the classical SE,
  // kept in jackknife form so heavier estimators can reuse it.
  double ss = 0.0;
  for (double s : samples) {
    const double loo = (total - s) / static_cast<double>(n - 1);
    ss += (loo - mean) * (loo - mean);
  }
  const double dn = static_cast<double>(n);
  return std::sqrt((dn - 1.0) / dn * ss);
}

JarzynskiResult classical_jarzynski(const CanonicalSpec& spec,
                                    const ProtocolSpec& protocol,
                                    std::size_t n, std::uint64_t seed,
                                    double dt) {
  if (n < 1000)
    throw std::invalid_argument("classical_jarzynski: n must be >= 1000");
  const auto points = classical_gibbs_sample(spec, protocol, n, seed);

  JarzynskiResult result;
  result.n = n;
  result.works.resize(n);
  std::vector<double> exp_works(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = classical_trajectory(spec, protocol, points[i], dt).work;
    result.works[i] = w;
    exp_works[i] = std::exp(-spec.beta * w);
  }

  const double dn = static_cast<double>(n);
  result.estimate = kernels::sum(exp_works.data(), n) / dn;
  result.mean_work = kernels::sum(result.works.data(), n) / dn;
  result.stderr_est = jackknife_se(exp_works);
  result.se_work = jackknife_se(result.works);

  if (protocol.kind == ProtocolSpec::Kind::stiffness)
    result.delta_f = free_energy_diff(HoKind::classical, spec.beta,
                                      protocol.drive(0.0),
                                      protocol.drive(protocol.t_span));
  else
    result.delta_f = 0.0;  // translation leaves Z unchanged
  result.exact = std::exp(-spec.beta * result.delta_f);
  return result;
}

std::vector<double> quantum_gibbs_mixture(double beta, double omega,
                                          std::size_t n_max, double hbar) {
  if (!(beta > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("quantum_gibbs_mixture: beta, omega must be > 0");
  const double q = std::exp(-beta * hbar * omega);
  // Discarded tail fraction is q^{n_max + 1} for the geometric weights.
  const double tail = std::pow(q, static_cast<double>(n_max + 1));
  if (tail > 1e-10)
    throw std::invalid_argument(
        "quantum_gibbs_mixture: truncation tail " + std::to_string(tail) +
        " exceeds 1e-10; raise n_max");

  std::vector<double> weights(n_max + 1);
  double z = 0.0;
  for (std::size_t k = 0; k <= n_max; ++k) {
    weights[k] = std::exp(-beta * hbar * omega * (static_cast<double>(k) + 0.5));
    z += weights[k];
  }
  for (double& w : weights) w /= z;
  return weights;
}

double free_energy_diff(HoKind kind, double beta, double omega1, double omega2,
                        double hbar) {
  if (!(beta > 0.0) || !(omega1 > 0.0) || !(omega2 > 0.0))
    throw std::invalid_argument("free_energy_diff: parameters must be > 0");
  if (kind == HoKind::classical) return std::log(omega2 / omega1) / beta;
  return std::log(std::sinh(0.5 * beta * hbar * omega2) /
                  std::sinh(0.5 * beta * hbar * omega1)) /
         beta;
}

BohmianJarzynskiResult bohmian_jarzynski(const BohmianJarzynskiConfig& config) {
  const ProtocolSpec& protocol = config.protocol;
  const double omega1 = protocol.kind == ProtocolSpec::Kind::stiffness
                            ? protocol.drive(0.0)
                            : 0.0;
  if (protocol.kind != ProtocolSpec::Kind::stiffness)
    throw std::invalid_argument(
        "bohmian_jarzynski: stiffness protocols only (translation leaves the "
        "spectrum unchanged; use the classical route there)");
  const double omega2 = protocol.drive(protocol.t_span);

  const auto weights = quantum_gibbs_mixture(config.beta, omega1,
                                             config.n_max, config.hbar);

  const field1d::Grid1D grid =
      field1d::Grid1D::centered(config.grid_points, config.grid_half_width);
  field1d::PotentialSpec v = field1d::PotentialSpec::stiffness_ramp(
      config.mass, protocol.drive, 0.0);
  v.set_units(config.hbar, config.mass);

  const field1d::HoBasis basis = field1d::ho_eigenstates(
      grid, config.mass, omega1, config.n_max, 0.0, config.hbar);

  BohmianJarzynskiResult result;
  result.exact = std::exp(
      -config.beta * free_energy_diff(HoKind::quantum, config.beta, omega1,
                                      omega2, config.hbar));

  const bool endpoint_only = config.work_kind == workfun::WorkKind::energetic;
  double estimate = 0.0, variance = 0.0;

  for (std::size_t level = 0; level <= config.n_max; ++level) {
    const auto x0 = bohmdyn::sample_quantum_equilibrium(
        basis.states[level], config.n_traj,
        rng::derive_seed(config.seed, level));

    const auto steps =
        static_cast<std::size_t>(std::llround(protocol.t_span / config.dt));
    bohmdyn::IntegrateOptions opts;
    opts.sample_fields = true;
    // Endpoint work needs only the first and last records; the W_M integral
    // samples every few steps, which keeps memory flat on long ramps.
    if (endpoint_only)
      opts.record_stride = steps + 1;
    else
      opts.record_stride = steps % 4 == 0 ? 4 : (steps % 2 == 0 ? 2 : 1);
    const auto trajs = bohmdyn::integrate_trajectories(
        basis.states[level], v, x0, protocol.t_span, config.dt, opts);

    std::vector<double> exp_works, works;
    exp_works.reserve(trajs.size());
    works.reserve(trajs.size());
    for (std::size_t j = 0; j < trajs.size(); ++j) {
      double w = 0.0;
      if (endpoint_only) {
        w = workfun::energetic_work(trajs[j]);
      } else {
        try {
          w = workfun::mechanical_work(trajs[j]);
        } catch (const std::runtime_error&) {
          ++result.excluded;  // node-afflicted force record
          continue;
        }
      }
      works.push_back(w);
      exp_works.push_back(std::exp(-config.beta * w));
      result.samples.push_back({level, j, w, exp_works.back()});
    }
    if (exp_works.empty())
      throw std::runtime_error(
          "bohmian_jarzynski: every trajectory of level " +
          std::to_string(level) + " was node-afflicted");

    EigenstateContribution contrib;
    contrib.level = level;
    contrib.weight = weights[level];
    contrib.mean_exp_work = kernels::sum(exp_works.data(), exp_works.size()) /
                            static_cast<double>(exp_works.size());
    contrib.se_exp_work = jackknife_se(exp_works);
    contrib.mean_work = kernels::sum(works.data(), works.size()) /
                        static_cast<double>(works.size());
    result.per_level.push_back(contrib);

    estimate += weights[level] * contrib.mean_exp_work;
    variance +=
        weights[level] * weights[level] * contrib.se_exp_work * contrib.se_exp_work;
  }

  result.estimate = estimate;
  result.stderr_est = std::sqrt(variance);
  const double gap = std::abs(result.estimate - result.exact);
  result.gap_sigmas =
      result.stderr_est > 0.0 ? gap / result.stderr_est
                              : (gap == 0.0 ? 0.0 : 1e308);
  return result;
}

}  // namespace qwork::statmech
