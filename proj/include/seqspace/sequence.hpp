#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace seqspace {

using Complex = std::complex<double>;

/// Sequence and matrix indices are 1-based at every public interface.
using Index = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Conjugate exponent pair. q is +infinity exactly when p == 1.
struct SpaceParams {
  double p = 2.0;
  double q = 2.0;

  static SpaceParams from_p(double p);

  bool q_infinite() const noexcept { return q == kInfinity; }
};

/// A complex sequence known on indices 1..N.
///
/// When `finite_support()` is set the sequence is an element of the finite
/// sequences: every value beyond size() is zero. Otherwise the stored values
/// are a truncation of a sequence whose tail is unknown.
class TruncatedSequence {
 public:
  TruncatedSequence() = default;
  explicit TruncatedSequence(std::vector<Complex> values, bool finite_support = true);

  static TruncatedSequence zeros(Index size, bool finite_support = true);
  static TruncatedSequence unit(Index k, Index size);
  static TruncatedSequence from_real(std::span<const double> values, bool finite_support = true);
  static TruncatedSequence from_real(std::initializer_list<double> values, bool finite_support = true);

  Index size() const noexcept { return values_.size(); }
  bool finite_support() const noexcept { return finite_support_; }
  void set_finite_support(bool value) noexcept { finite_support_ = value; }

  /// 1-based access. Beyond size() a finitely supported sequence reads as 0;
  /// any other out-of-range access is an index error.
  Complex operator()(Index n) const;
  Complex& at(Index n);

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  /// Largest index with a nonzero value, 0 for the zero sequence.
  Index support_bound() const noexcept;
  bool is_zero() const noexcept { return support_bound() == 0; }

  std::vector<double> moduli() const;

  /// Zero-padded or cut to `size` entries; cutting a finitely supported
  /// sequence keeps the flag only when nothing nonzero is dropped.
  TruncatedSequence resized(Index size) const;

  TruncatedSequence scaled(Complex factor) const;

  friend TruncatedSequence operator+(const TruncatedSequence& a, const TruncatedSequence& b);
  friend TruncatedSequence operator-(const TruncatedSequence& a, const TruncatedSequence& b);

 private:
  std::vector<Complex> values_;
  bool finite_support_ = true;
};

/// |v|^p with exact zero and a log-domain path for tiny moduli.
double pow_abs(double modulus, double p);

}  // namespace seqspace
