#include "qwork/field1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qwork/fft.hpp"
#include "qwork/kernels.hpp"
#include "qwork/tolerances.hpp"

namespace qwork::field1d {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid1D Grid1D::make(std::size_t n_points, double x_min, double dx) {
  if (!is_power_of_two(n_points) || n_points < 64)
    throw std::invalid_argument("Grid1D: n_points must be a power of two >= 64");
  if (!(dx > 0.0)) throw std::invalid_argument("Grid1D: dx must be positive");
  return Grid1D{n_points, x_min, dx};
}

Grid1D Grid1D::centered(std::size_t n_points, double half_width) {
  const double dx = 2.0 * half_width / static_cast<double>(n_points);
  return make(n_points, -half_width, dx);
}

std::vector<double> Grid1D::wavenumbers() const {
  const std::size_t n = n_points;
  std::vector<double> k(n);
  const double dk = 2.0 * kPi / length();
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<std::ptrdiff_t>(j);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    k[j] = dk * static_cast<double>(sj <= sn / 2 - 1 ? sj : sj - sn);
  }
  return k;
}

Protocol Protocol::constant(double value) {
  Protocol p;
  p.shape = Shape::constant;
  p.v0 = p.v1 = value;
  return p;
}

Protocol Protocol::ramp(Shape shape, double v0, double v1, double t_begin,
                        double t_end) {
  if (!(t_end > t_begin))
    throw std::invalid_argument("Protocol: t_end must exceed t_begin");
  Protocol p;
  p.shape = shape;
  p.v0 = v0;
  p.v1 = v1;
  p.t_begin = t_begin;
  p.t_end = t_end;
  return p;
}

double Protocol::operator()(double t) const {
  if (shape == Shape::constant) return v0;
  const double span = t_end - t_begin;
  const double s = std::clamp((t - t_begin) / span, 0.0, 1.0);
  double f = s;
  switch (shape) {
    case Shape::linear: break;
    case Shape::cubic: f = s * s * (3.0 - 2.0 * s); break;
    case Shape::quintic: f = s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); break;
    default: break;
  }
  return v0 + (v1 - v0) * f;
}

double Protocol::rate(double t) const {
  if (shape == Shape::constant) return 0.0;
  const double span = t_end - t_begin;
  const double s = (t - t_begin) / span;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double df = 1.0;
  switch (shape) {
    case Shape::linear: break;
    case Shape::cubic: df = 6.0 * s * (1.0 - s); break;
    case Shape::quintic: df = 30.0 * s * s * (1.0 - s) * (1.0 - s); break;
    default: break;
  }
  return (v1 - v0) * df / span;
}

bool Protocol::is_constant() const {
  return shape == Shape::constant || v0 == v1;
}

PotentialSpec PotentialSpec::free_particle() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::harmonic(double mass, double omega,
                                      Protocol center) {
  PotentialSpec v;
  v.kind_ = Kind::harmonic;
  v.mass_ = mass;
  v.omega_ = omega;
  v.drive_ = center;
  return v;
}

PotentialSpec PotentialSpec::stiffness_ramp(double mass, Protocol omega,
                                            double center) {
  PotentialSpec v;
  v.kind_ = Kind::stiffness_ramp;
  v.mass_ = mass;
  v.center_ = center;
  v.drive_ = omega;
  return v;
}

PotentialSpec PotentialSpec::barrier(double height, double width) {
  PotentialSpec v;
  v.kind_ = Kind::barrier;
  v.height_ = height;
  v.width_ = width;
  return v;
}

void PotentialSpec::set_units(double hbar, double mass) {
  if (!(hbar > 0.0) || !(mass > 0.0))
    throw std::invalid_argument("PotentialSpec: units must be positive");
  hbar_ = hbar;
  mass_ = mass;
}

double PotentialSpec::omega(double t) const {
  return kind_ == Kind::stiffness_ramp ? drive_(t) : omega_;
}

double PotentialSpec::center(double t) const {
  return kind_ == Kind::harmonic ? drive_(t) : center_;
}

bool PotentialSpec::is_static() const {
  if (kind_ == Kind::free || kind_ == Kind::barrier) return true;
  return drive_.is_constant();
}

double PotentialSpec::operator()(double x, double t) const {
  switch (kind_) {
    case Kind::free: return 0.0;
    case Kind::harmonic: {
      const double d = x - drive_(t);
      return 0.5 * mass_ * omega_ * omega_ * d * d;
    }
    case Kind::stiffness_ramp: {
      const double w = drive_(t);
      const double d = x - center_;
      return 0.5 * mass_ * w * w * d * d;
    }
    case Kind::barrier:
      return std::abs(x) < 0.5 * width_ ? height_ : 0.0;
  }
  return 0.0;
}

double PotentialSpec::grad(double x, double t) const {
  switch (kind_) {
    case Kind::free: return 0.0;
    case Kind::harmonic: return mass_ * omega_ * omega_ * (x - drive_(t));
    case Kind::stiffness_ramp: {
      const double w = drive_(t);
      return mass_ * w * w * (x - center_);
    }
    case Kind::barrier: return 0.0;  // flat almost everywhere
  }
  return 0.0;
}

double Wavefunction::norm2() const {
  std::vector<double> rho(amplitudes.size());
  kernels::density(amplitudes.data(), rho.data(), amplitudes.size());
  return kernels::sum(rho.data(), rho.size()) * grid.dx;
}

void Wavefunction::normalize() {
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw std::runtime_error("Wavefunction: zero norm");
  kernels::scale_inplace(amplitudes.data(), 1.0 / std::sqrt(n2),
                         amplitudes.size());
}

Wavefunction gaussian_packet(const Grid1D& grid, double x0, double sigma0,
                             double k0) {
  if (!(sigma0 > 0.0))
    throw std::invalid_argument("gaussian_packet: sigma0 must be positive");
  Wavefunction psi{grid, std::vector<cdouble>(grid.n_points), 0.0};
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double envelope =
        std::exp(-(x - x0) * (x - x0) / (4.0 * sigma0 * sigma0));
    psi.amplitudes[i] = std::polar(envelope, k0 * x);
  }
  psi.normalize();
  return psi;
}

void split_step(Wavefunction& psi, const PotentialSpec& v, double dt) {
  if (dt == 0.0) throw std::invalid_argument("split_step: dt must be nonzero");
  const std::size_t n = psi.grid.n_points;
  const double hbar = v.hbar();
  const double t_mid = psi.time + 0.5 * dt;

  // Half potential kick, evaluated at the mid-step time.
  std::vector<cdouble> kick(n);
  for (std::size_t i = 0; i < n; ++i)
    kick[i] = std::polar(1.0, -v(psi.grid.x(i), t_mid) * dt / (2.0 * hbar));
  kernels::cmul_inplace(psi.amplitudes.data(), kick.data(), n);

  // Full kinetic step in k-space. The phase table only depends on
  // (n, dx, hbar dt / m), so cache it across steps.
  static thread_local std::vector<cdouble> k_space, back, kin;
  static thread_local std::size_t kin_n = 0;
  static thread_local double kin_coeff_cached = 0.0, kin_dx = 0.0;
  k_space.resize(n);
  back.resize(n);
  fft::forward(psi.amplitudes.data(), k_space.data(), n);
  const double kin_coeff = -hbar * dt / (2.0 * v.mass());
  if (kin_n != n || kin_coeff_cached != kin_coeff || kin_dx != psi.grid.dx) {
    const std::vector<double> k = psi.grid.wavenumbers();
    kin.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      kin[i] = std::polar(1.0, kin_coeff * k[i] * k[i]);
    kin_n = n;
    kin_coeff_cached = kin_coeff;
    kin_dx = psi.grid.dx;
  }
  kernels::cmul_inplace(k_space.data(), kin.data(), n);
  fft::inverse(k_space.data(), back.data(), n);
  psi.amplitudes.assign(back.begin(), back.end());
  kernels::scale_inplace(psi.amplitudes.data(), 1.0 / static_cast<double>(n),
                         n);

  kernels::cmul_inplace(psi.amplitudes.data(), kick.data(), n);
  psi.time += dt;

  if (!std::isfinite(psi.amplitudes[0].real()))
    throw std::runtime_error("split_step: non-finite amplitudes (grid/dt?)");
}

void evolve(Wavefunction& psi, const PotentialSpec& v, double dt,
            std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) split_step(psi, v, dt);
}

double kinetic_expectation(const Wavefunction& psi, const PotentialSpec& v) {
  const std::size_t n = psi.grid.n_points;
  std::vector<cdouble> k_space(n);
  fft::forward(psi.amplitudes.data(), k_space.data(), n);
  std::vector<double> spec(n), weight(n);
  kernels::density(k_space.data(), spec.data(), n);
  const std::vector<double> k = psi.grid.wavenumbers();
  const double coeff =
      v.hbar() * v.hbar() / (2.0 * v.mass()) * psi.grid.dx /
      static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = coeff * k[i] * k[i];
  return kernels::dot(spec.data(), weight.data(), n);
}

double potential_expectation(const Wavefunction& psi, const PotentialSpec& v) {
  const std::size_t n = psi.grid.n_points;
  std::vector<double> rho(n), pot(n);
  kernels::density(psi.amplitudes.data(), rho.data(), n);
  for (std::size_t i = 0; i < n; ++i) pot[i] = v(psi.grid.x(i), psi.time);
  return kernels::dot(rho.data(), pot.data(), n) * psi.grid.dx;
}

double hamiltonian_expectation(const Wavefunction& psi,
                               const PotentialSpec& v) {
  return kinetic_expectation(psi, v) + potential_expectation(psi, v);
}

void spectral_derivatives(const Wavefunction& psi, std::size_t orders,
                          std::vector<std::vector<cdouble>>& out) {
  const std::size_t n = psi.grid.n_points;
  std::vector<cdouble> k_space(n), scratch(n);
  fft::forward(psi.amplitudes.data(), k_space.data(), n);
  const std::vector<double> k = psi.grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);

  out.assign(orders, std::vector<cdouble>(n));
  std::vector<cdouble> powers = k_space;
  for (std::size_t m = 1; m <= orders; ++m) {
    for (std::size_t i = 0; i < n; ++i)
      powers[i] *= cdouble{0.0, k[i]};  // one more factor of (ik)
    fft::inverse(powers.data(), scratch.data(), n);
    auto& dst = out[m - 1];
    for (std::size_t i = 0; i < n; ++i) dst[i] = scratch[i] * inv_n;
  }
}

HoBasis ho_eigenstates(const Grid1D& grid, double mass, double omega,
                       std::size_t n_max, double center, double hbar) {
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
    throw std::invalid_argument("ho_eigenstates: parameters must be positive");
  const std::size_t n = grid.n_points;
  const double alpha = std::sqrt(mass * omega / hbar);  // 1/length scale

  HoBasis basis;
  basis.states.reserve(n_max + 1);
  basis.energies.reserve(n_max + 1);

  // Normalized Hermite functions by the stable three-term recurrence.
  std::vector<double> h_prev(n), h_curr(n), h_next(n);
  for (std::size_t level = 0; level <= n_max; ++level) {
    Wavefunction psi{grid, std::vector<cdouble>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = alpha * (grid.x(i) - center);
      if (level == 0) {
        h_curr[i] = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
      } else if (level == 1) {
        h_next[i] = std::sqrt(2.0) * xi * h_curr[i];
      } else {
        const auto dn = static_cast<double>(level);
        h_next[i] = std::sqrt(2.0 / dn) * xi * h_curr[i] -
                    std::sqrt((dn - 1.0) / dn) * h_prev[i];
      }
    }
    if (level >= 1) {
      h_prev.swap(h_curr);
      h_curr.swap(h_next);
    }
    for (std::size_t i = 0; i < n; ++i)
      psi.amplitudes[i] = std::sqrt(alpha) * h_curr[i];

    const double n2 = psi.norm2();
    if (std::abs(n2 - 1.0) > 1e-6)
      throw std::runtime_error(
          "ho_eigenstates: level " + std::to_string(level) +
          " not resolved on the grid (norm^2 = " + std::to_string(n2) + ")");
    psi.normalize();
    basis.states.push_back(std::move(psi));
    basis.energies.push_back(hbar * omega * (static_cast<double>(level) + 0.5));
  }

  // Orthogonality spot check against the previous level.
  for (std::size_t level = 1; level <= n_max; ++level) {
    cdouble overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      overlap += std::conj(basis.states[level - 1].amplitudes[i]) *
                 basis.states[level].amplitudes[i];
    if (std::abs(overlap) * grid.dx > 1e-8)
      throw std::runtime_error("ho_eigenstates: orthogonality failure at level " +
                               std::to_string(level));
  }
  return basis;
}

void write_csv(const Wavefunction& psi, std::ostream& out) {
  out << "x,re,im,density\n";
  char buf[160];
  for (std::size_t i = 0; i < psi.grid.n_points; ++i) {
    const cdouble z = psi.amplitudes[i];
    std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e,%.16e\n", psi.grid.x(i),
                  z.real(), z.imag(), std::norm(z));
    out << buf;
  }
}

}  // namespace qwork::field1d
