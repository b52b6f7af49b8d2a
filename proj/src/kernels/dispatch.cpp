#include <cstdlib>
#include <cstring>

#include "seqspace/sequence.hpp"
#include "tables.hpp"

namespace seqspace::kernels {

const KernelTable* avx2() {
#if defined(SEQSPACE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() {
#if defined(SEQSPACE_HAVE_NEON)
  return &detail::neon_table();  // Advanced SIMD is mandatory on AArch64
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("SEQSPACE_KERNELS");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar();
  if (const KernelTable* t = avx2()) return *t;
  if (const KernelTable* t = neon()) return *t;
  return scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar()};
  if (const KernelTable* t = avx2()) out.push_back(t);
  if (const KernelTable* t = neon()) out.push_back(t);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

double power_sum(std::span<const double> a, double p) {
  if (p == 1.0) return active().sum(a.data(), a.size());
  if (p == 2.0) return active().sum_squares(a.data(), a.size());
  double s = 0.0;
  for (double v : a) s += pow_abs(v, p);
  return s;
}

}  // namespace seqspace::kernels
