#include "seqspace/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqspace/error.hpp"
#include "seqspace/kernels.hpp"

namespace seqspace {

SpaceParams SpaceParams::from_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    fail(ErrorKind::parameter, "exponent p must be a finite real >= 1, got " + std::to_string(p));
  }
  if (p == 1.0) return {1.0, kInfinity};
  return {p, p / (p - 1.0)};
}

TruncatedSequence::TruncatedSequence(std::vector<Complex> values, bool finite_support)
    : values_(std::move(values)), finite_support_(finite_support) {}

TruncatedSequence TruncatedSequence::zeros(Index size, bool finite_support) {
  return TruncatedSequence(std::vector<Complex>(size), finite_support);
}

TruncatedSequence TruncatedSequence::unit(Index k, Index size) {
  if (k < 1 || k > size) fail(ErrorKind::index, "unit vector index out of range");
  TruncatedSequence e = zeros(size);
  e.values_[k - 1] = 1.0;
  return e;
}

TruncatedSequence TruncatedSequence::from_real(std::span<const double> values, bool finite_support) {
  std::vector<Complex> v(values.begin(), values.end());
  return TruncatedSequence(std::move(v), finite_support);
}

TruncatedSequence TruncatedSequence::from_real(std::initializer_list<double> values, bool finite_support) {
  return from_real(std::span<const double>(values.begin(), values.size()), finite_support);
}

Complex TruncatedSequence::operator()(Index n) const {
  if (n < 1) fail(ErrorKind::index, "sequence indices start at 1");
  if (n > values_.size()) {
    if (finite_support_) return 0.0;
    fail(ErrorKind::index, "index " + std::to_string(n) + " beyond the known prefix of an infinite-support sequence");
  }
  return values_[n - 1];
}

Complex& TruncatedSequence::at(Index n) {
  if (n < 1 || n > values_.size()) fail(ErrorKind::index, "sequence index out of range");
  return values_[n - 1];
}

Index TruncatedSequence::support_bound() const noexcept {
  for (Index i = values_.size(); i > 0; --i) {
    if (values_[i - 1] != Complex(0.0)) return i;
  }
  return 0;
}

std::vector<double> TruncatedSequence::moduli() const {
  std::vector<double> out(values_.size());
  kernels::active().moduli(values_.data(), out.data(), values_.size());
  return out;
}

TruncatedSequence TruncatedSequence::resized(Index size) const {
  std::vector<Complex> v(values_.begin(), values_.begin() + std::min(size, values_.size()));
  v.resize(size);
  bool finite = finite_support_ && support_bound() <= size;
  return TruncatedSequence(std::move(v), finite);
}

TruncatedSequence TruncatedSequence::scaled(Complex factor) const {
  TruncatedSequence out = *this;
  for (auto& v : out.values_) v *= factor;
  return out;
}

namespace {

template <class Op>
TruncatedSequence combine(const TruncatedSequence& a, const TruncatedSequence& b, Op op) {
  Index n = std::max(a.size(), b.size());
  std::vector<Complex> v(n);
  for (Index i = 1; i <= n; ++i) {
    Complex av = i <= a.size() ? a(i) : (a.finite_support() ? Complex(0.0) : a(i));
    Complex bv = i <= b.size() ? b(i) : (b.finite_support() ? Complex(0.0) : b(i));
    v[i - 1] = op(av, bv);
  }
  return TruncatedSequence(std::move(v), a.finite_support() && b.finite_support());
}

}  // namespace

TruncatedSequence operator+(const TruncatedSequence& a, const TruncatedSequence& b) {
  return combine(a, b, [](Complex x, Complex y) { return x + y; });
}

TruncatedSequence operator-(const TruncatedSequence& a, const TruncatedSequence& b) {
  return combine(a, b, [](Complex x, Complex y) { return x - y; });
}

double pow_abs(double modulus, double p) {
  double m = std::fabs(modulus);
  if (m == 0.0) return 0.0;
  if (p == 1.0) return m;
  if (p == 2.0) return m * m;
  if (m < 1e-300) return std::exp(p * std::log(m));
  return std::pow(m, p);
}

}  // namespace seqspace
