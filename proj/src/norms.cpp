#include "seqspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqspace/error.hpp"
#include "seqspace/kernels.hpp"

namespace seqspace {

namespace {

void require_exponent(double p) {
  if (p == kInfinity) return;
  SpaceParams::from_p(p);
}

double root(double sum, double p) {
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

double lp_norm(std::span<const double> moduli, double p) {
  require_exponent(p);
  if (p == kInfinity) return kernels::active().max_value(moduli.data(), moduli.size());
  return root(kernels::power_sum(moduli, p), p);
}

double lp_norm(const TruncatedSequence& x, double p) {
  const auto moduli = x.moduli();
  return lp_norm(moduli, p);
}

NormReport weighted_norm(const MatrixDescriptor& m, const TruncatedSequence& x, double p, Index truncation) {
  require_exponent(p);
  const bool lower = m.lower_triangular();
  const bool finite = x.finite_support();
  if (!lower && !finite) {
    fail(ErrorKind::truncation_unsound,
         "rows of " + m.name() + " are infinite sums; x must be finitely supported");
  }
  if (!finite && truncation > x.size()) {
    fail(ErrorKind::index, "x is known only on 1.." + std::to_string(x.size()) + " but N = " +
                               std::to_string(truncation));
  }
  const Index support = finite ? x.support_bound() : x.size();
  const auto moduli = x.moduli();
  const auto& k = kernels::active();

  NormReport report;
  report.truncation = truncation;
  double total = 0.0;
  for (Index n = 1; n <= truncation; ++n) {
    const Index kmax = lower ? std::min(n, support) : support;
    if (kmax == 0) continue;
    const auto row = m.row_moduli(n, kmax);
    const double s = k.dot(row.data(), moduli.data(), kmax);
    total = p == kInfinity ? std::max(total, s) : total + pow_abs(s, p);
  }
  report.value = p == kInfinity ? total : root(total, p);

  if (!finite) return report;
  const auto bw = m.lower_bandwidth();
  if (support == 0 || (bw && support + *bw <= truncation)) {
    report.sound = true;
    report.tail_bound = 0.0;
    return report;
  }
  if (p != kInfinity && m.first_column_dominated()) {
    if (auto column_tail = m.first_column_tail(p, truncation)) {
      double l1 = 0.0;
      for (double v : moduli) l1 += v;
      const double bound = pow_abs(l1, p) * *column_tail;
      report.tail_bound = bound;
      report.sound = bound <= 1e-9 * total;
    }
  }
  return report;
}

WeightedNorm::WeightedNorm(const MatrixDescriptor& m, double p, Index truncation, Index width)
    : p_(p), width_(width) {
  require_exponent(p);
  if (!m.lower_triangular() && width == 0) fail(ErrorKind::parameter, "width must be positive");
  offsets_.reserve(truncation + 1);
  offsets_.push_back(0);
  for (Index n = 1; n <= truncation; ++n) {
    const Index kmax = m.lower_triangular() ? std::min(n, width) : width;
    const auto row = m.row_moduli(n, kmax);
    entries_.insert(entries_.end(), row.begin(), row.end());
    offsets_.push_back(entries_.size());
  }
}

double WeightedNorm::operator()(std::span<const double> moduli) const {
  const auto& k = kernels::active();
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < offsets_.size(); ++n) {
    const std::size_t len = std::min(offsets_[n + 1] - offsets_[n], moduli.size());
    if (len == 0) continue;
    const double s = k.dot(entries_.data() + offsets_[n], moduli.data(), len);
    total = p_ == kInfinity ? std::max(total, s) : total + pow_abs(s, p_);
  }
  return p_ == kInfinity ? total : root(total, p_);
}

double WeightedNorm::operator()(const TruncatedSequence& x) const {
  if (x.support_bound() > width_) fail(ErrorKind::parameter, "sequence support exceeds the cached width");
  auto moduli = x.moduli();
  moduli.resize(std::min<std::size_t>(moduli.size(), width_));
  return (*this)(moduli);
}

DerivedWeights DerivedWeights::from_weights(std::vector<double> a, double p) {
  DerivedWeights w;
  w.p = p;
  w.q = SpaceParams::from_p(p).q;
  w.A.resize(a.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) fail(ErrorKind::domain, "weights must be positive");
    w.A[i] = (s += a[i]);
  }
  w.tail.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w.tail[i] = 1.0 / w.A[i];
  w.a = std::move(a);
  return w;
}

DerivedWeights derive_weights(const MatrixDescriptor& m, const SpaceParams& params, Index truncation,
                              TailMode mode) {
  if (truncation < 1) fail(ErrorKind::parameter, "truncation must be >= 1");
  const double p = params.p;
  if (m.diagonal_summability(p) == Summability::divergent) {
    fail(ErrorKind::divergence, "diagonal of " + m.name() + " is not l^p-summable for p = " + std::to_string(p));
  }
  DerivedWeights w;
  w.p = p;
  w.q = params.q;
  const auto d = m.diagonal_powers(p, truncation);

  double anchor = 0.0;
  w.truncated = true;
  if (mode == TailMode::best) {
    if (auto closed = m.diagonal_tail_closed_form(p, truncation + 1)) {
      anchor = *closed;
      w.truncated = false;
    }
  }
  w.tail.resize(truncation);
  double acc = anchor;
  for (Index n = truncation; n >= 1; --n) w.tail[n - 1] = (acc += d[n - 1]);
  if (!(w.tail[0] <= 1e300)) fail(ErrorKind::divergence, "diagonal tail sum overflows");
  for (Index n = 1; n <= truncation; ++n) {
    if (!(w.tail[n - 1] > 0.0)) {
      fail(ErrorKind::domain, "diagonal tail of " + m.name() + " vanishes at n = " + std::to_string(n));
    }
  }

  w.a.resize(truncation);
  w.A.resize(truncation);
  for (Index n = 1; n <= truncation; ++n) {
    const double t = w.tail[n - 1];
    w.A[n - 1] = 1.0 / t;
    // 1/T_n - 1/T_{n-1} = (d_{n-1} / T_{n-1}) / T_n, without cancellation.
    w.a[n - 1] = n == 1 ? 1.0 / t : (d[n - 2] / w.tail[n - 2]) / t;
  }

  if (!params.q_infinite()) {
    const double r = params.q / p;
    w.b.resize(truncation);
    w.B.resize(truncation);
    w.b_hat.resize(truncation);
    double running = 0.0;
    for (Index n = 1; n <= truncation; ++n) {
      const double t = w.tail[n - 1];
      w.B[n - 1] = std::pow(t, -r);
      w.b[n - 1] = n == 1 ? w.B[0]
                          : w.B[n - 1] * -std::expm1(r * std::log1p(-d[n - 2] / w.tail[n - 2]));
      running = std::max(running, w.b[n - 1]);
      w.b_hat[n - 1] = running;
    }
  }
  return w;
}

TruncatedSequence least_decreasing_majorant(const TruncatedSequence& x) {
  if (!x.finite_support()) {
    fail(ErrorKind::truncation_unsound, "the majorant of an infinite-support sequence is not computable");
  }
  auto moduli = x.moduli();
  double running = 0.0;
  for (std::size_t i = moduli.size(); i > 0; --i) {
    running = std::max(running, moduli[i - 1]);
    moduli[i - 1] = running;
  }
  return TruncatedSequence::from_real(moduli);
}

double d_norm(const DerivedWeights& w, const TruncatedSequence& x) {
  if (!x.finite_support() || x.support_bound() > w.size()) {
    fail(ErrorKind::truncation_unsound, "d_norm needs x finitely supported within the weight window");
  }
  const TruncatedSequence hat = least_decreasing_majorant(x);
  double total = 0.0;
  for (Index n = 1; n <= x.support_bound(); ++n) total += w.a[n - 1] * pow_abs(hat(n).real(), w.p);
  return root(total, w.p);
}

double d_norm(const MatrixDescriptor& m, const TruncatedSequence& x, const SpaceParams& params, Index truncation) {
  return d_norm(derive_weights(m, params, truncation), x);
}

double g_norm(const DerivedWeights& w, const TruncatedSequence& z, double inner) {
  if (!(inner >= 1.0)) fail(ErrorKind::parameter, "inner exponent must be >= 1");
  double best = 0.0;
  double acc = 0.0;
  for (Index n = 1; n <= w.size(); ++n) {
    const double modulus = std::abs(z(n));
    double partial;
    if (inner == kInfinity) {
      acc = std::max(acc, modulus);
      partial = acc;
    } else {
      acc += pow_abs(modulus, inner);
      partial = root(acc, inner);
    }
    const double normalizer = w.p == 1.0 ? w.A[n - 1] : std::pow(w.A[n - 1], 1.0 / w.p);
    best = std::max(best, partial / normalizer);
  }
  return best;
}

double g_norm(const MatrixDescriptor& m, const TruncatedSequence& z, const SpaceParams& params,
              Index truncation, double inner) {
  return g_norm(derive_weights(m, params, truncation), z, inner);
}

double g_norm(const MatrixDescriptor& m, const TruncatedSequence& z, const SpaceParams& params,
              Index truncation) {
  return g_norm(m, z, params, truncation, params.q);
}

}  // namespace seqspace
