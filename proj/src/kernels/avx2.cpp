#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace seqspace::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i];
  return s;
}

double sum_squares_avx2(const double* a, std::size_t n) { return dot_avx2(a, a, n); }

double max_avx2(const double* a, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(a + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::max(r, a[i]);
  return r;
}

// |z| = big * sqrt(1 + (small/big)^2), with big == 0 mapped to 0.
void moduli_avx2(const std::complex<double>* z, double* out, std::size_t n) {
  const double* raw = reinterpret_cast<const double*>(z);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // v0 = re0 im0 re1 im1, v1 = re2 im2 re3 im3
    __m256d v0 = _mm256_loadu_pd(raw + 2 * i);
    __m256d v1 = _mm256_loadu_pd(raw + 2 * i + 4);
    __m256d re = _mm256_unpacklo_pd(v0, v1);  // re0 re2 re1 re3
    __m256d im = _mm256_unpackhi_pd(v0, v1);  // im0 im2 im1 im3
    re = _mm256_andnot_pd(sign_mask, re);
    im = _mm256_andnot_pd(sign_mask, im);
    __m256d big = _mm256_max_pd(re, im);
    __m256d small = _mm256_min_pd(re, im);
    __m256d is_zero = _mm256_cmp_pd(big, zero, _CMP_EQ_OQ);
    __m256d safe_big = _mm256_blendv_pd(big, one, is_zero);
    __m256d ratio = _mm256_div_pd(small, safe_big);
    __m256d r = _mm256_mul_pd(big, _mm256_sqrt_pd(_mm256_fmadd_pd(ratio, ratio, one)));
    r = _mm256_blendv_pd(r, zero, is_zero);
    // restore order 0 1 2 3 from 0 2 1 3
    r = _mm256_permute4x64_pd(r, 0xD8);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = std::hypot(z[i].real(), z[i].imag());
}

void blend_avx2(double alpha, const double* x, double beta, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

constexpr KernelTable kAvx2{
    "avx2", dot_avx2, sum_avx2, sum_squares_avx2, max_avx2, moduli_avx2, blend_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace seqspace::kernels::detail
