#include <immintrin.h>

#include <cmath>

#include "qwork/kernels.hpp"

// AVX2 variants. Complex arithmetic uses mul/addsub only (no FMA), matching
// the scalar reference rounding exactly; reductions keep four lanes and merge
// at the end.
namespace qwork::kernels {
namespace {

void cmul_inplace_avx2(cdouble* a, const cdouble* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(vb);         // [br0 br0 br1 br1]
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);    // [bi0 bi0 bi1 bi1]
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);    // [ai0 ar0 ai1 ar1]
    const __m256d t0 = _mm256_mul_pd(va, b_re);
    const __m256d t1 = _mm256_mul_pd(a_sw, b_im);
    _mm256_storeu_pd(pa + 2 * i, _mm256_addsub_pd(t0, t1));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void scale_inplace_avx2(cdouble* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(pa + 2 * i,
                     _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i), vs));
  }
  for (; i < n; ++i) a[i] = {a[i].real() * s, a[i].imag() * s};
}

void density_avx2(const cdouble* psi, double* out, std::size_t n) {
  const auto* p = reinterpret_cast<const double*>(psi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(p + 2 * i);      // z0 z1
    const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);  // z2 z3
    const __m256d m0 = _mm256_mul_pd(v0, v0);
    const __m256d m1 = _mm256_mul_pd(v1, v1);
    // hadd interleaves 128-bit lanes: [|z0| |z2| |z1| |z3|]^2 -> permute back
    const __m256d h = _mm256_hadd_pd(m0, m1);
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; i < n; ++i) {
    const double re = psi[i].real(), im = psi[i].imag();
    out[i] = re * re + im * im;
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

double sum_avx2(const double* a, std::size_t n) {
  // Four-lane Neumaier: per-lane running sum and compensation.
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(
      static_cast<long long>(0x7fffffffffffffffULL)));
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(a + i);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d big_s =
        _mm256_cmp_pd(_mm256_and_pd(s, absmask), _mm256_and_pd(x, absmask),
                      _CMP_GE_OQ);
    const __m256d corr_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d corr_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(corr_x, corr_s, big_s));
    s = t;
  }
  alignas(32) double ls[4], lc[4];
  _mm256_store_pd(ls, s);
  _mm256_store_pd(lc, c);
  double acc = 0.0, comp = 0.0;
  auto accumulate = [&](double x) {
    const double t = acc + x;
    if (std::abs(acc) >= std::abs(x))
      comp += (acc - t) + x;
    else
      comp += (x - t) + acc;
    acc = t;
  };
  for (int k = 0; k < 4; ++k) accumulate(ls[k]);
  for (; i < n; ++i) accumulate(a[i]);
  return acc + (comp + (lc[0] + lc[1] + lc[2] + lc[3]));
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{cmul_inplace_avx2, scale_inplace_avx2, density_avx2,
                       dot_avx2,          sum_avx2,           "avx2"};
  return ops;
}

}  // namespace qwork::kernels
