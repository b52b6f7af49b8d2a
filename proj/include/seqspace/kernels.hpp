#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Data-parallel inner loops. Every variant computes the same quantity as the
// scalar reference up to summation order; the equivalence is tested for each
// variant that the running CPU supports.
namespace seqspace::kernels {

struct KernelTable {
  const char* name;
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  /// max_i a[i]; 0 for n == 0 (inputs are nonnegative moduli)
  double (*max_value)(const double* a, std::size_t n);
  /// out[i] = |z[i]| without intermediate overflow
  void (*moduli)(const std::complex<double>* z, double* out, std::size_t n);
  /// y[i] = alpha * x[i] + beta * y[i]
  void (*blend)(double alpha, const double* x, double beta, double* y, std::size_t n);
};

const KernelTable& scalar();

/// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2();
const KernelTable* neon();

/// The fastest supported table, chosen once. SEQSPACE_KERNELS=scalar in the
/// environment forces the reference implementation.
const KernelTable& active();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);

/// sum_i a[i]^p for nonnegative a; p = 1 and p = 2 go through the vector
/// kernels, other exponents through pow.
double power_sum(std::span<const double> a, double p);

}  // namespace seqspace::kernels
