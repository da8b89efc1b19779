#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Array kernels for the grid inner loops: a scalar reference implementation
// plus SIMD variants (AVX2 on x86-64, NEON on aarch64) selected at runtime.
// Pointwise kernels are bitwise-identical across backends (no FP contraction);
// reductions reassociate and are equivalence-tested to tolerance instead.
namespace qwork::kernels {

using cdouble = std::complex<double>;

struct Ops {
  // a[i] *= b[i]
  void (*cmul_inplace)(cdouble* a, const cdouble* b, std::size_t n);
  // a[i] *= s
  void (*scale_inplace)(cdouble* a, double s, std::size_t n);
  // out[i] = |psi[i]|^2
  void (*density)(const cdouble* psi, double* out, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // Neumaier-compensated sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
const Ops& active();               // backend chosen at startup (QWORK_KERNELS overrides)
std::string_view backend_name();
bool set_backend(std::string_view name);  // "scalar" | "avx2" | "neon"; false if unavailable

inline void cmul_inplace(cdouble* a, const cdouble* b, std::size_t n) {
  active().cmul_inplace(a, b, n);
}
inline void scale_inplace(cdouble* a, double s, std::size_t n) {
  active().scale_inplace(a, s, n);
}
inline void density(const cdouble* psi, double* out, std::size_t n) {
  active().density(psi, out, n);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }

}  // namespace qwork::kernels
