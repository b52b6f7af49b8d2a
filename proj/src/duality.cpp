#include "seqspace/duality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqspace/error.hpp"
#include "seqspace/norms.hpp"

namespace seqspace {

namespace {

double slope(const std::vector<Index>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(static_cast<double>(xs[i]));
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(static_cast<double>(xs[i])) - mx;
    num += dx * (std::log(ys[i]) - my);
    den += dx * dx;
  }
  return num / den;
}

double column_sum(const MatrixDescriptor& t, Index k, double q, Index truncation) {
  double total = 0.0;
  for (Index n = 1; n <= truncation; ++n) total += pow_abs(std::abs(t.entry(n, k)), q);
  return total;
}

}  // namespace

Complex pairing(const TruncatedSequence& y, const TruncatedSequence& x, Index truncation, bool conjugate) {
  Complex total = 0.0;
  for (Index n = 1; n <= truncation; ++n) total += (conjugate ? std::conj(y(n)) : y(n)) * x(n);
  return total;
}

DualCheckReport holder_bound_check(const MatrixDescriptor& m, const TruncatedSequence& x, const TruncatedSequence& y,
                                   const SpaceParams& params, Index truncation) {
  if (!x.finite_support() || !y.finite_support()) {
    fail(ErrorKind::truncation_unsound, "the Hoelder check needs finitely supported x and y");
  }
  const auto inverse = m.cataloged_inverse();
  if (!inverse) fail(ErrorKind::unsupported, m.name() + " has no cataloged inverse");
  if (truncation < std::max(x.support_bound(), y.support_bound()) + 1) {
    fail(ErrorKind::parameter, "truncation must exceed the supports of x and y");
  }
  const MatrixDescriptor t = inverse->transposed();
  const TruncatedSequence y_abs = TruncatedSequence::from_real(y.moduli());

  DualCheckReport out;
  out.pairing_value = pairing(y, x, truncation);
  out.pairing_abs = std::abs(out.pairing_value);
  out.rhs_bound = weighted_norm(t, y_abs, params.q, truncation).value * weighted_norm(m, x, params.p, truncation).value;
  out.slack = out.rhs_bound - out.pairing_abs;
  out.ok = out.slack >= -1e-9;
  if (m.flags().diagonal && !params.q_infinite()) {
    out.partial_dual_norm = diagonal_dual_norm(m, y, params, truncation).closed_form;
  }
  return out;
}

DiagonalDualNorm diagonal_dual_norm(const MatrixDescriptor& m, const TruncatedSequence& y, const SpaceParams& params,
                                    Index truncation, Index samples, CounterRng rng) {
  if (!m.flags().diagonal) fail(ErrorKind::precondition, m.name() + " is not diagonal");
  if (params.q_infinite()) fail(ErrorKind::parameter, "the diagonal dual norm needs p > 1");
  if (!y.finite_support() && y.size() < truncation) fail(ErrorKind::index, "y is not known on 1..N");
  const double p = params.p;
  const double q = params.q;
  const auto diag = m.diagonal_powers(1.0, truncation);
  for (Index n = 1; n <= truncation; ++n) {
    if (!(diag[n - 1] > 0.0)) fail(ErrorKind::singular, m.name() + " has a zero diagonal entry at n = " + std::to_string(n));
  }

  DiagonalDualNorm out;
  std::vector<Complex> extremal(truncation);
  double total = 0.0;
  for (Index n = 1; n <= truncation; ++n) {
    const Complex yn = y(n);
    const double modulus = std::abs(yn);
    if (modulus == 0.0) continue;
    const double dq = std::pow(diag[n - 1], q);
    total += std::pow(modulus, q) / dq;
    extremal[n - 1] = std::pow(modulus, q - 2.0) * std::conj(yn) / dq;
  }
  out.closed_form = std::pow(total, 1.0 / q);
  out.extremal = TruncatedSequence(std::move(extremal));
  if (!out.extremal.is_zero()) {
    out.bruteforce =
        std::abs(pairing(y, out.extremal, truncation)) / weighted_norm(m, out.extremal, p, truncation).value;
  }
  for (Index i = 0; i < samples; ++i) {
    CounterRng draw = rng.split(i);
    std::vector<Complex> x(truncation);
    for (auto& c : x) c = draw.complex_normal();
    const TruncatedSequence xs(std::move(x));
    const double denom = weighted_norm(m, xs, p, truncation).value;
    if (denom > 0.0) out.max_random_quotient = std::max(out.max_random_quotient, std::abs(pairing(y, xs, truncation)) / denom);
  }
  return out;
}

ColumnGrowth column_growth(const MatrixDescriptor& t, double q, Index truncation) {
  if (truncation < 4) fail(ErrorKind::parameter, "truncation must be >= 4");
  ColumnGrowth out;
  out.columns = {1, truncation / 2, truncation};
  for (Index k : out.columns) out.column_q_sums.push_back(column_sum(t, k, q, truncation));
  out.truncations = {truncation, 2 * truncation, 4 * truncation};
  for (Index n : out.truncations) out.first_column_sums.push_back(column_sum(t, 1, q, n));
  out.growth_slope = slope(out.truncations, out.first_column_sums);
  return out;
}

ColumnGrowth counterexample_diagnostic(Index truncation, double q) {
  return column_growth(MatrixDescriptor::remark_counterexample_inverse().transposed(), q, truncation);
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

MembershipDiagnostic membership_diagnostic(const MatrixDescriptor& m, const TruncatedSequence& x, double p,
                                           std::span<const Index> truncations) {
  for (std::size_t i = 1; i < truncations.size(); ++i) {
    if (truncations[i] <= truncations[i - 1]) fail(ErrorKind::parameter, "truncations must be strictly increasing");
  }
  MembershipDiagnostic out;
  out.truncations.assign(truncations.begin(), truncations.end());
  for (Index n : truncations) out.norms_at_n.push_back(weighted_norm(m, x, p, n).value);
  if (out.norms_at_n.size() < 2) return out;

  std::vector<double> increments;
  for (std::size_t i = 1; i < out.norms_at_n.size(); ++i) increments.push_back(out.norms_at_n[i] - out.norms_at_n[i - 1]);
  if (increments.size() > 3) increments.erase(increments.begin(), increments.end() - 3);

  if (std::all_of(increments.begin(), increments.end(), [](double d) { return d == 0.0; })) {
    out.verdict = Verdict::converging;
    return out;
  }
  if (increments.size() < 2) return out;
  bool all_small = true, all_large = true;
  for (std::size_t i = 1; i < increments.size(); ++i) {
    const double prev = increments[i - 1];
    const double ratio = prev == 0.0 ? (increments[i] == 0.0 ? 0.0 : kInfinity) : increments[i] / prev;
    if (ratio < 0.9) all_large = false;
    else all_small = false;
  }
  if (all_small) out.verdict = Verdict::converging;
  else if (all_large) out.verdict = Verdict::diverging;
  return out;
}

SchauderCheck schauder_monotonicity_check(const MatrixDescriptor& matrix, std::span<const Complex> coefficients,
                                          std::span<const Index> sigma, Index m, Index n, double p,
                                          Index truncation) {
  if (sigma.size() != truncation) fail(ErrorKind::domain, "sigma must list a permutation of 1..N");
  std::vector<bool> seen(truncation + 1, false);
  for (Index s : sigma) {
    if (s < 1 || s > truncation || seen[s]) fail(ErrorKind::domain, "sigma is not a bijection on 1..N");
    seen[s] = true;
  }
  if (!(m <= n && n <= truncation)) fail(ErrorKind::parameter, "need m <= n <= N");
  if (coefficients.size() < n) fail(ErrorKind::parameter, "need at least n coefficients");

  auto partial = [&](Index upto) {
    std::vector<Complex> v(truncation);
    for (Index k = 1; k <= upto; ++k) v[sigma[k - 1] - 1] += coefficients[k - 1];
    return weighted_norm(matrix, TruncatedSequence(std::move(v)), p, truncation).value;
  };
  SchauderCheck out;
  out.lhs = partial(m);
  out.rhs = partial(n);
  out.ok = out.lhs <= out.rhs + 1e-12 * std::max(1.0, out.rhs);
  return out;
}

}  // namespace seqspace
