#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qwork/qcore.hpp"

// Work operators for a driven process (H, U, H'): the Heisenberg-picture
// unitary-condition operator U†H'U - H, the two-point-measurement (TPM)
// operator and work distribution, the two-level counterexample where they
// disagree, and the exact TPM Jarzynski identity.
namespace qwork::workops {

using qcore::DensityState;
using qcore::Operator;
using qcore::Spectrum;

struct ProcessSpec {
  Operator h_initial;
  Operator u;
  Operator h_final;

  void validate() const;  // Hermitian H's, unitary U, matching dims
  std::size_t dim() const { return h_initial.dim(); }
};

// Discrete work values with probabilities; values strictly ascending,
// entries closer than the grouping tolerance merged with summed probability.
struct WorkDistribution {
  std::vector<double> values;
  std::vector<double> probs;
};

// Grouping tolerance for work values: resolves distinct transitions while
// merging floating-point duplicates.
double work_grouping_tolerance(const Spectrum& initial, const Spectrum& final_);

WorkDistribution make_distribution(std::vector<std::pair<double, double>> raw,
                                   double delta_w);

// U†H'U - H.
Operator unitary_work_operator(const ProcessSpec& p);

// sum_{i,f} (E_f - E_i) |<f|U|i>|^2 |i><i|, diagonal in the H eigenbasis.
Operator tpm_work_operator(const ProcessSpec& p);

// P(W) = sum over transitions with E_f - E_i = W of <i|rho|i> |<f|U|i>|^2.
WorkDistribution tpm_distribution(const ProcessSpec& p, const DensityState& rho);

double expected_work(const WorkDistribution& dist);

// Two-level counterexample: H = eps|1><1|, H' = eps'|1><1|, U the Hadamard
// mapping |+> -> |0>, |-> -> |1>. The two work operators share a diagonal but
// the unitary-condition one keeps off-diagonal terms of magnitude |eps'|/2.
struct NgtReport {
  double eps = 0.0;
  double eps_prime = 0.0;
  Operator w_unitary;
  Operator w_tpm;
  Operator difference;
  double offdiag_magnitude = 0.0;   // max |off-diagonal| of the difference
  bool operators_agree = false;     // eps' = 0 degenerate-agreement case
};

NgtReport ngt_counterexample(double eps, double eps_prime);

ProcessSpec ngt_process(double eps, double eps_prime);

// TPM exponentiated-work average vs Z'/Z; the two agree to machine precision
// by column-unitarity.
struct JarzynskiIdentity {
  double estimate = 0.0;
  double exact = 0.0;
};

JarzynskiIdentity tpm_jarzynski(const ProcessSpec& p, double beta);

}  // namespace qwork::workops
