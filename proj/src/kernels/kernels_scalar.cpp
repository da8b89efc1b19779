#include "qwork/kernels.hpp"

#include <cmath>

namespace qwork::kernels {
namespace {

void cmul_inplace_scalar(cdouble* a, const cdouble* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void scale_inplace_scalar(cdouble* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = {a[i].real() * s, a[i].imag() * s};
}

void density_scalar(const cdouble* psi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = psi[i].real(), im = psi[i].imag();
    out[i] = re * re + im * im;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s + a[i];
    if (std::abs(s) >= std::abs(a[i]))
      c += (s - t) + a[i];
    else
      c += (a[i] - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{cmul_inplace_scalar, scale_inplace_scalar,
                       density_scalar,      dot_scalar,
                       sum_scalar,          "scalar"};
  return ops;
}

}  // namespace qwork::kernels
