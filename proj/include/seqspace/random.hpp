#pragma once

#include <cstdint>

#include "seqspace/sequence.hpp"

namespace seqspace {

/// Counter-based generator: the n-th draw of a stream is a pure function of
/// (seed, stream, n). Child streams from split() are independent of the order
/// in which siblings are consumed, so sampling loops can be reordered or run
/// in parallel without changing results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  CounterRng split(std::uint64_t child) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n) for n >= 1.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal by Box-Muller; consumes two uniforms per call.
  double normal() noexcept;
  /// Circular complex Gaussian with unit variance per component.
  Complex complex_normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqspace
