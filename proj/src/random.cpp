#include "seqspace/random.hpp"

#include <cmath>
#include <numbers>

namespace seqspace {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix(mix(seed + kGolden) ^ (stream * 0xD1B54A32D192ED03ULL + 1))) {}

CounterRng CounterRng::split(std::uint64_t child) const noexcept {
  CounterRng out(0);
  out.key_ = mix(key_ ^ mix(child + 0x632BE59BD9B4E019ULL));
  return out;
}

std::uint64_t CounterRng::next_u64() noexcept {
  return mix(key_ + kGolden * ++counter_);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

double CounterRng::normal() noexcept {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() noexcept {
  double re = normal();
  double im = normal();
  return {re, im};
}

}  // namespace seqspace
