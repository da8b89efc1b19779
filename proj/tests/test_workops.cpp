#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwork/io.hpp"
#include "qwork/qcore.hpp"
#include "qwork/rng.hpp"
#include "qwork/workops.hpp"

using namespace qwork::workops;
using qwork::qcore::DensityState;
using qwork::qcore::Operator;
using qwork::rng::Stream;

namespace {

Operator random_hermitian(std::size_t dim, Stream& stream) {
  Operator g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      g.at(i, j) = {stream.normal(), stream.normal()};
  return (g + g.adjoint()).scaled(0.5);
}

ProcessSpec random_process(std::size_t dim, Stream& stream) {
  ProcessSpec p;
  p.h_initial = random_hermitian(dim, stream);
  p.h_final = random_hermitian(dim, stream);
  p.u = qwork::qcore::random_unitary(dim, stream.next_u64());
  return p;
}

ProcessSpec trivial_process(std::size_t dim, const Operator& h) {
  return ProcessSpec{h, Operator::identity(dim), h};
}

DensityState basis_state(std::size_t dim, std::size_t level) {
  Operator m(dim);
  m.at(level, level) = 1.0;
  return DensityState(std::move(m));
}

}  // namespace

TEST_SUITE_BEGIN("workops");

TEST_CASE("unitary work operator: trivial process and counterexample forms") {
  Operator h(2);
  h.at(1, 1) = 1.0;
  CHECK(unitary_work_operator(trivial_process(2, h)).max_abs() < 1e-15);

  // eps = 1, eps' = 2 -> [[1, -1], [-1, 0]]
  const auto w = unitary_work_operator(ngt_process(1.0, 2.0));
  CHECK(std::abs(w.at(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(w.at(0, 1) + 1.0) < 1e-14);
  CHECK(std::abs(w.at(1, 0) + 1.0) < 1e-14);
  CHECK(std::abs(w.at(1, 1)) < 1e-14);

  // eps' = 0 -> diag(0, -eps), off-diagonals vanish
  const auto w0 = unitary_work_operator(ngt_process(0.7, 0.0));
  CHECK(std::abs(w0.at(0, 0)) < 1e-14);
  CHECK(std::abs(w0.at(1, 1) + 0.7) < 1e-14);
  CHECK(w0.max_offdiag_abs() < 1e-14);
}

TEST_CASE("tpm work operator: counterexample diag(1, 0); agreement at eps'=0") {
  const auto w = tpm_work_operator(ngt_process(1.0, 2.0));
  CHECK(std::abs(w.at(0, 0) - 1.0) < 1e-13);
  CHECK(std::abs(w.at(1, 1)) < 1e-13);
  CHECK(w.max_offdiag_abs() < 1e-13);

  Operator h(2);
  h.at(1, 1) = 1.0;
  CHECK(tpm_work_operator(trivial_process(2, h)).max_abs() < 1e-13);

  const auto wt = tpm_work_operator(ngt_process(0.7, 0.0));
  const auto wu = unitary_work_operator(ngt_process(0.7, 0.0));
  CHECK((wt - wu).max_abs() < 1e-13);
}

TEST_CASE("tpm distribution: counterexample from both initial levels") {
  const ProcessSpec p = ngt_process(1.0, 2.0);

  const auto from_ground = tpm_distribution(p, basis_state(2, 0));
  REQUIRE(from_ground.values.size() == 2);
  CHECK(from_ground.values[0] == doctest::Approx(0.0));
  CHECK(from_ground.values[1] == doctest::Approx(2.0));
  CHECK(from_ground.probs[0] == doctest::Approx(0.5));
  CHECK(from_ground.probs[1] == doctest::Approx(0.5));

  const auto from_excited = tpm_distribution(p, basis_state(2, 1));
  REQUIRE(from_excited.values.size() == 2);
  CHECK(from_excited.values[0] == doctest::Approx(-1.0));
  CHECK(from_excited.values[1] == doctest::Approx(1.0));
  CHECK(from_excited.probs[0] == doctest::Approx(0.5));
  CHECK(from_excited.probs[1] == doctest::Approx(0.5));
}

TEST_CASE("tpm distribution: identity process concentrates at W = 0") {
  Operator h(3);
  h.at(0, 0) = 0.3;
  h.at(1, 1) = 1.1;
  h.at(2, 2) = 2.0;
  const auto dist =
      tpm_distribution(trivial_process(3, h), qwork::qcore::random_state(3, 8));
  REQUIRE(dist.values.size() == 1);
  CHECK(dist.values[0] == doctest::Approx(0.0));
  CHECK(dist.probs[0] == doctest::Approx(1.0));
}

TEST_CASE("expected work of known distributions") {
  WorkDistribution d;
  d.values = {0.0, 2.0};
  d.probs = {0.5, 0.5};
  CHECK(expected_work(d) == doctest::Approx(1.0));

  d.values = {0.0};
  d.probs = {1.0};
  CHECK(expected_work(d) == doctest::Approx(0.0));

  // counterexample with the maximally mixed state: 0.5*(mean{0,2}) +
  // 0.5*(mean{-1,1}) = 0.5
  Operator half(2);
  half.at(0, 0) = 0.5;
  half.at(1, 1) = 0.5;
  const auto dist = tpm_distribution(ngt_process(1.0, 2.0), DensityState(half));
  CHECK(expected_work(dist) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ngt counterexample report") {
  const auto report = ngt_counterexample(1.0, 2.0);
  CHECK(report.offdiag_magnitude == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_FALSE(report.operators_agree);

  const auto agree = ngt_counterexample(0.4, 0.0);
  CHECK(agree.offdiag_magnitude < 1e-14);
  CHECK(agree.operators_agree);

  Stream stream(21);
  for (int rep = 0; rep < 25; ++rep) {
    const double eps = -3.0 + 6.0 * stream.uniform();
    const double eps_prime = -3.0 + 6.0 * stream.uniform();
    const auto r = ngt_counterexample(eps, eps_prime);
    CHECK(std::abs(r.offdiag_magnitude - 0.5 * std::abs(eps_prime)) < 1e-12);
    // diagonals of the two operators agree for all (eps, eps')
    CHECK(std::abs(r.difference.at(0, 0)) < 1e-12);
    CHECK(std::abs(r.difference.at(1, 1)) < 1e-12);
  }
}

TEST_CASE("tpm jarzynski: closed form on the counterexample") {
  const auto r = tpm_jarzynski(ngt_process(1.0, 2.0), 1.0);
  const double expected = (1.0 + std::exp(-2.0)) / (1.0 + std::exp(-1.0));
  CHECK(r.estimate == doctest::Approx(expected).epsilon(1e-14));
  CHECK(r.exact == doctest::Approx(expected).epsilon(1e-14));

  Operator h(2);
  h.at(1, 1) = 0.8;
  const auto trivial = tpm_jarzynski(trivial_process(2, h), 2.5);
  CHECK(trivial.estimate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trivial.exact == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(tpm_jarzynski(ngt_process(1.0, 2.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("tpm jarzynski identity holds exactly for random processes") {
  Stream stream(33);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t dim = 2 + rep % 7;
    const ProcessSpec p = random_process(dim, stream);
    for (double beta : {0.1, 0.7, 1.0, 5.0, 10.0}) {
      const auto r = tpm_jarzynski(p, beta);
      CHECK(std::abs(r.estimate - r.exact) <=
            1e-12 * std::max(1.0, std::abs(r.exact)));
    }
  }
}

TEST_CASE("dephasing reconciliation: exact at the expectation level") {
  Stream stream(55);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t dim = 2 + rep % 7;
    const ProcessSpec p = random_process(dim, stream);
    const DensityState rho = qwork::qcore::random_state(dim, stream.next_u64());
    const auto basis = qwork::qcore::spectral(p.h_initial);

    const double lhs = qwork::qcore::expectation(
        qwork::qcore::dephase(rho, basis), unitary_work_operator(p));
    const double rhs = qwork::qcore::expectation(rho, tpm_work_operator(p));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("expected TPM work equals expectation of the TPM operator") {
  Stream stream(77);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t dim = 2 + rep % 7;
    const ProcessSpec p = random_process(dim, stream);
    const DensityState rho = qwork::qcore::random_state(dim, stream.next_u64());
    const double via_dist = expected_work(tpm_distribution(p, rho));
    const double via_op = qwork::qcore::expectation(rho, tpm_work_operator(p));
    CHECK(std::abs(via_dist - via_op) < 1e-10);
  }
}

TEST_CASE("states without energy coherence: both operators agree") {
  Stream stream(91);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t dim = 2 + rep % 7;
    const ProcessSpec p = random_process(dim, stream);
    const auto basis = qwork::qcore::spectral(p.h_initial);
    const DensityState rho = qwork::qcore::dephase(
        qwork::qcore::random_state(dim, stream.next_u64()), basis);
    const double via_unitary =
        qwork::qcore::expectation(rho, unitary_work_operator(p));
    const double via_tpm = qwork::qcore::expectation(rho, tpm_work_operator(p));
    CHECK(std::abs(via_unitary - via_tpm) < 1e-10);
  }
}

TEST_CASE("tpm distribution preserves the transition moments") {
  // Independent oracle: moments computed from the raw (i, f) transition sums
  // must survive grouping and filtering.
  Stream stream(131);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t dim = 2 + rep % 7;
    const ProcessSpec p = random_process(dim, stream);
    const DensityState rho = qwork::qcore::random_state(dim, stream.next_u64());

    const auto si = qwork::qcore::spectral(p.h_initial);
    const auto sf = qwork::qcore::spectral(p.h_final);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      qwork::qcore::cdouble rho_ii = 0.0;
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
          rho_ii += std::conj(si.eigenvectors.at(a, i)) *
                    rho.matrix().at(a, b) * si.eigenvectors.at(b, i);
      for (std::size_t f = 0; f < dim; ++f) {
        qwork::qcore::cdouble amp = 0.0;
        for (std::size_t a = 0; a < dim; ++a)
          for (std::size_t b = 0; b < dim; ++b)
            amp += std::conj(sf.eigenvectors.at(a, f)) * p.u.at(a, b) *
                   si.eigenvectors.at(b, i);
        const double w = sf.eigenvalues[f] - si.eigenvalues[i];
        const double prob = rho_ii.real() * std::norm(amp);
        m0 += prob;
        m1 += prob * w;
        m2 += prob * w * w;
      }
    }

    const auto dist = tpm_distribution(p, rho);
    double d0 = 0.0, d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 0; k < dist.values.size(); ++k) {
      d0 += dist.probs[k];
      d1 += dist.probs[k] * dist.values[k];
      d2 += dist.probs[k] * dist.values[k] * dist.values[k];
    }
    CHECK(std::abs(d0 - m0) < 1e-12);
    CHECK(std::abs(d1 - m1) < 1e-10);
    CHECK(std::abs(d2 - m2) < 1e-9);
  }
}

TEST_CASE("work value grouping merges degenerate gaps") {
  // E = {0, 1}, E' = {1, 2} -> W in {1, 2, 0, 1}: the two W = 1 transitions
  // merge into one entry.
  Operator h(2), hp(2);
  h.at(1, 1) = 1.0;
  hp.at(0, 0) = 1.0;
  hp.at(1, 1) = 2.0;
  ProcessSpec p{h, qwork::qcore::random_unitary(2, 3), hp};
  const auto dist = tpm_distribution(p, qwork::qcore::random_state(2, 9));
  CHECK(dist.values.size() == 3);
  double total = 0.0;
  for (double q : dist.probs) total += q;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < dist.values.size(); ++i)
    CHECK(dist.values[i] > dist.values[i - 1]);
}

TEST_CASE("operator JSON round trip") {
  const auto report = ngt_counterexample(1.3, -0.4);
  const auto j = qwork::io::operator_to_json(report.w_unitary);
  const Operator back = qwork::io::operator_from_json(j);
  CHECK((back - report.w_unitary).max_abs() == 0.0);
}

TEST_CASE("work distribution CSV emitter") {
  const auto dist =
      tpm_distribution(ngt_process(1.0, 2.0), basis_state(2, 0));
  const std::string csv = qwork::io::distribution_csv(dist);
  CHECK(csv.rfind("value,prob\n", 0) == 0);
  // header + one row per outcome, full-precision scientific cells
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("2.0000000000000000e+00,") != std::string::npos);
}

TEST_SUITE_END();
