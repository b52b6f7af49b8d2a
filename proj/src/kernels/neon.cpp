#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace seqspace::kernels::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i];
  return s;
}

double sum_squares_neon(const double* a, std::size_t n) { return dot_neon(a, a, n); }

double max_neon(const double* a, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vld1q_f64(a + i));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::max(r, a[i]);
  return r;
}

void moduli_neon(const std::complex<double>* z, double* out, std::size_t n) {
  const double* raw = reinterpret_cast<const double*>(z);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t v = vld2q_f64(raw + 2 * i);  // val[0] = re, val[1] = im
    float64x2_t re = vabsq_f64(v.val[0]);
    float64x2_t im = vabsq_f64(v.val[1]);
    float64x2_t big = vmaxq_f64(re, im);
    float64x2_t small = vminq_f64(re, im);
    uint64x2_t is_zero = vceqq_f64(big, zero);
    float64x2_t safe_big = vbslq_f64(is_zero, one, big);
    float64x2_t ratio = vdivq_f64(small, safe_big);
    float64x2_t r = vmulq_f64(big, vsqrtq_f64(vfmaq_f64(one, ratio, ratio)));
    vst1q_f64(out + i, vbslq_f64(is_zero, zero, r));
  }
  for (; i < n; ++i) out[i] = std::hypot(z[i].real(), z[i].imag());
}

void blend_neon(double alpha, const double* x, double beta, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t r = vmulq_n_f64(vld1q_f64(y + i), beta);
    vst1q_f64(y + i, vfmaq_n_f64(r, vld1q_f64(x + i), alpha));
  }
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

constexpr KernelTable kNeon{
    "neon", dot_neon, sum_neon, sum_squares_neon, max_neon, moduli_neon, blend_neon,
};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace seqspace::kernels::detail
