#include <arm_neon.h>

#include <cmath>

#include "qwork/kernels.hpp"

// NEON variants (aarch64, 2 doubles per vector). Same no-FMA rounding as the
// scalar reference for the pointwise kernels.
namespace qwork::kernels {
namespace {

void cmul_inplace_neon(cdouble* a, const cdouble* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);  // [ar ai]
    const float64x2_t vb = vld1q_f64(pb + 2 * i);  // [br bi]
    const float64x2_t b_re = vdupq_laneq_f64(vb, 0);
    const float64x2_t b_im = vdupq_laneq_f64(vb, 1);
    const float64x2_t a_sw = vextq_f64(va, va, 1);          // [ai ar]
    const float64x2_t t0 = vmulq_f64(va, b_re);             // [ar*br ai*br]
    const float64x2_t t1 = vmulq_f64(a_sw, b_im);           // [ai*bi ar*bi]
    const float64x2_t sign = {-1.0, 1.0};
    vst1q_f64(pa + 2 * i, vaddq_f64(t0, vmulq_f64(t1, sign)));
  }
}

void scale_inplace_neon(cdouble* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(pa + 2 * i, vmulq_f64(vld1q_f64(pa + 2 * i), vs));
}

void density_neon(const cdouble* psi, double* out, std::size_t n) {
  const auto* p = reinterpret_cast<const double*>(psi);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(p + 2 * i);
    const float64x2_t m = vmulq_f64(v, v);
    out[i] = vgetq_lane_f64(m, 0) + vgetq_lane_f64(m, 1);
  }
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double result = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

double sum_neon(const double* a, std::size_t n) {
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

const Ops& neon_ops() {
  static const Ops ops{cmul_inplace_neon, scale_inplace_neon, density_neon,
                       dot_neon,          sum_neon,           "neon"};
  return ops;
}

}  // namespace qwork::kernels
