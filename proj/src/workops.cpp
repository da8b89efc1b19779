#include "qwork/workops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwork::workops {

void ProcessSpec::validate() const {
  if (h_initial.dim() != u.dim() || u.dim() != h_final.dim())
    throw std::invalid_argument("ProcessSpec: dimension mismatch");
  if (!h_initial.is_hermitian() || !h_final.is_hermitian())
    throw std::invalid_argument("ProcessSpec: Hamiltonian is not Hermitian");
  if (!u.is_unitary())
    throw std::invalid_argument("ProcessSpec: U is not unitary");
}

double work_grouping_tolerance(const Spectrum& initial,
                               const Spectrum& final_) {
  double emax = 0.0;
  for (double e : initial.eigenvalues) emax = std::max(emax, std::abs(e));
  for (double e : final_.eigenvalues) emax = std::max(emax, std::abs(e));
  return 1e-9 * emax;
}

WorkDistribution make_distribution(std::vector<std::pair<double, double>> raw,
                                   double delta_w) {
  std::sort(raw.begin(), raw.end());
  WorkDistribution dist;
  std::size_t i = 0;
  while (i < raw.size()) {
    // Cluster values whose consecutive gaps stay within delta_w.
    double mass = raw[i].second;
    double weighted = raw[i].first * raw[i].second;
    std::size_t j = i + 1;
    while (j < raw.size() && raw[j].first - raw[j - 1].first <= delta_w) {
      mass += raw[j].second;
      weighted += raw[j].first * raw[j].second;
      ++j;
    }
    i = j;
    // Transitions the Born rule assigns no weight to are not outcomes.
    if (mass <= 1e-14) continue;
    dist.values.push_back(weighted / mass);
    dist.probs.push_back(mass);
  }

  double total = 0.0;
  for (double p : dist.probs) {
    if (p < -1e-12)
      throw std::runtime_error("WorkDistribution: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::prob_sum)
    throw std::runtime_error("WorkDistribution: probabilities do not sum to 1");
  return dist;
}

Operator unitary_work_operator(const ProcessSpec& p) {
  p.validate();
  return p.u.adjoint() * p.h_final * p.u - p.h_initial;
}

namespace {

// |<f|U|i>|^2 over the two spectral bases.
std::vector<std::vector<double>> transition_probabilities(
    const ProcessSpec& p, const Spectrum& si, const Spectrum& sf) {
  const std::size_t d = p.dim();
  std::vector<std::vector<double>> prob(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t f = 0; f < d; ++f) {
      qcore::cdouble amp = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          amp += std::conj(sf.eigenvectors.at(a, f)) * p.u.at(a, b) *
                 si.eigenvectors.at(b, i);
      prob[i][f] = std::norm(amp);
    }
  return prob;
}

}  // namespace

Operator tpm_work_operator(const ProcessSpec& p) {
  p.validate();
  const Spectrum si = qcore::spectral(p.h_initial);
  const Spectrum sf = qcore::spectral(p.h_final);
  const auto prob = transition_probabilities(p, si, sf);
  const std::size_t d = p.dim();

  Operator out(d);
  for (std::size_t i = 0; i < d; ++i) {
    double w_mean = 0.0;
    for (std::size_t f = 0; f < d; ++f)
      w_mean += (sf.eigenvalues[f] - si.eigenvalues[i]) * prob[i][f];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        out.at(a, b) += w_mean * si.eigenvectors.at(a, i) *
                        std::conj(si.eigenvectors.at(b, i));
  }
  return out;
}

WorkDistribution tpm_distribution(const ProcessSpec& p,
                                  const DensityState& rho) {
  p.validate();
  if (rho.dim() != p.dim())
    throw std::invalid_argument("tpm_distribution: dimension mismatch");
  const Spectrum si = qcore::spectral(p.h_initial);
  const Spectrum sf = qcore::spectral(p.h_final);
  const auto prob = transition_probabilities(p, si, sf);
  const std::size_t d = p.dim();

  std::vector<std::pair<double, double>> raw;
  raw.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    // Born-rule weight of |i> in rho.
    qcore::cdouble rho_ii = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        rho_ii += std::conj(si.eigenvectors.at(a, i)) * rho.matrix().at(a, b) *
                  si.eigenvectors.at(b, i);
    for (std::size_t f = 0; f < d; ++f)
      raw.emplace_back(sf.eigenvalues[f] - si.eigenvalues[i],
                       rho_ii.real() * prob[i][f]);
  }
  return make_distribution(std::move(raw), work_grouping_tolerance(si, sf));
}

double expected_work(const WorkDistribution& dist) {
  double w = 0.0;
  for (std::size_t i = 0; i < dist.values.size(); ++i)
    w += dist.values[i] * dist.probs[i];
  return w;
}

ProcessSpec ngt_process(double eps, double eps_prime) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ProcessSpec p;
  p.h_initial = Operator(2);
  p.h_initial.at(1, 1) = eps;
  p.h_final = Operator(2);
  p.h_final.at(1, 1) = eps_prime;
  // U = |0><+| + |1><-|
  p.u = Operator(2);
  p.u.at(0, 0) = inv_sqrt2;
  p.u.at(0, 1) = inv_sqrt2;
  p.u.at(1, 0) = inv_sqrt2;
  p.u.at(1, 1) = -inv_sqrt2;
  return p;
}

NgtReport ngt_counterexample(double eps, double eps_prime) {
  const ProcessSpec p = ngt_process(eps, eps_prime);
  NgtReport report;
  report.eps = eps;
  report.eps_prime = eps_prime;
  report.w_unitary = unitary_work_operator(p);
  report.w_tpm = tpm_work_operator(p);
  report.difference = report.w_unitary - report.w_tpm;
  report.offdiag_magnitude = report.difference.max_offdiag_abs();
  report.operators_agree = report.difference.max_abs() < 1e-12;
  return report;
}

JarzynskiIdentity tpm_jarzynski(const ProcessSpec& p, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("tpm_jarzynski: beta <= 0");
  p.validate();
  const Spectrum si = qcore::spectral(p.h_initial);
  const Spectrum sf = qcore::spectral(p.h_final);
  const auto prob = transition_probabilities(p, si, sf);
  const std::size_t d = p.dim();

  double z_initial = 0.0, z_final = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    z_initial += std::exp(-beta * si.eigenvalues[i]);
    z_final += std::exp(-beta * sf.eigenvalues[i]);
  }

  JarzynskiIdentity result;
  for (std::size_t i = 0; i < d; ++i) {
    const double thermal = std::exp(-beta * si.eigenvalues[i]) / z_initial;
    for (std::size_t f = 0; f < d; ++f)
      result.estimate +=
          thermal * prob[i][f] *
          std::exp(-beta * (sf.eigenvalues[f] - si.eigenvalues[i]));
  }
  result.exact = z_final / z_initial;
  return result;
}

}  // namespace qwork::workops
