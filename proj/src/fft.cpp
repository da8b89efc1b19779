#include "qwork/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace qwork::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

// FFTW_UNALIGNED lets the cached plans run on whatever buffers callers hand
// in via fftw_execute_dft.
const PlanPair& plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  fftw_complex* buf_in = fftw_alloc_complex(n);
  fftw_complex* buf_out = fftw_alloc_complex(n);
  if (!buf_in || !buf_out) throw std::bad_alloc();
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf_in, buf_out, FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf_in, buf_out, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf_in);
  fftw_free(buf_out);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(const cdouble* in, cdouble* out, std::size_t n) {
  if (in == out) throw std::invalid_argument("fft: in-place not supported");
  const PlanPair& p = plans_for(n);
  fftw_execute_dft(p.fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void inverse(const cdouble* in, cdouble* out, std::size_t n) {
  if (in == out) throw std::invalid_argument("fft: in-place not supported");
  const PlanPair& p = plans_for(n);
  fftw_execute_dft(p.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace qwork::fft
