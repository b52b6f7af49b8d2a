#include <algorithm>
#include <cmath>

#include "seqspace/kernels.hpp"

namespace seqspace::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double sum_squares_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double max_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, a[i]);
  return m;
}

void moduli_scalar(const std::complex<double>* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::hypot(z[i].real(), z[i].imag());
}

void blend_scalar(double alpha, const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

constexpr KernelTable kScalar{
    "scalar", dot_scalar, sum_scalar, sum_squares_scalar, max_scalar, moduli_scalar, blend_scalar,
};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace seqspace::kernels
