#include "seqspace/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seqspace/error.hpp"

namespace seqspace {

namespace {

using Vec = std::vector<Complex>;

constexpr Index kGridPoints = 65;
constexpr double kGoldenTolerance = 1e-6;
constexpr Index kMaxDraws = 1000000;

double norm_of(const WeightedNorm& norm, const Vec& v) {
  std::vector<double> moduli(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) moduli[i] = std::abs(v[i]);
  return norm(moduli);
}

Vec combine(Complex a, const Vec& x, Complex b, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

Vec scaled(const Vec& x, double factor) {
  Vec out = x;
  for (auto& v : out) v *= factor;
  return out;
}

Vec gaussian(CounterRng& rng, Index width) {
  Vec v(width);
  for (auto& c : v) c = rng.complex_normal();
  return v;
}

Vec normalized(const WeightedNorm& norm, const Vec& v) {
  const double n = norm_of(norm, v);
  if (!(n > 0.0)) fail(ErrorKind::internal, "cannot normalize a zero vector");
  return scaled(v, 1.0 / n);
}

Vec as_vec(const TruncatedSequence& x, Index width) {
  Vec out(width);
  for (Index i = 1; i <= width; ++i) out[i - 1] = x(i);
  return out;
}

double segment_sup_vec(const WeightedNorm& norm, const Vec& x, const Vec& y) {
  auto phi = [&](double alpha) { return norm_of(norm, combine(alpha, x, 1.0 - alpha, y)); };
  double best = kInfinity;
  Index best_i = 0;
  for (Index i = 0; i < kGridPoints; ++i) {
    const double value = phi(static_cast<double>(i) / (kGridPoints - 1));
    if (value < best) {
      best = value;
      best_i = i;
    }
  }
  const double step = 1.0 / (kGridPoints - 1);
  double lo = std::max(0.0, (static_cast<double>(best_i) - 1.0) * step);
  double hi = std::min(1.0, (static_cast<double>(best_i) + 1.0) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = phi(c);
  double fd = phi(d);
  while (hi - lo > kGoldenTolerance) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = phi(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = phi(d);
    }
  }
  best = std::min({best, fc, fd});
  return 1.0 - best;
}

// Smallest theta on the arc y(theta) = normalize(cos x + sin w), y(pi) = -x,
// with distance(theta) >= target, to bisection precision.
Vec arc_point(const WeightedNorm& norm, const Vec& x, const Vec& w, double rx, double ry, double target) {
  auto point = [&](double theta) {
    if (theta >= std::numbers::pi) return scaled(x, -1.0);
    const Vec v = combine(std::cos(theta), x, std::sin(theta), w);
    const double n = norm_of(norm, v);
    return n > 0.0 ? scaled(v, 1.0 / n) : scaled(x, -1.0);
  };
  auto distance = [&](const Vec& y) { return norm_of(norm, combine(rx, x, -ry, y)); };
  double lo = 0.0;
  double hi = std::numbers::pi;
  Vec best = point(hi);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Vec y = point(mid);
    if (distance(y) >= target) {
      hi = mid;
      best = std::move(y);
    } else {
      lo = mid;
    }
  }
  return best;
}

void require_strict_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::parameter, "strict convexity needs 1 < p < infinity");
}

void require_invertible_lower(const MatrixDescriptor& m, Index truncation) {
  if (!m.lower_triangular()) fail(ErrorKind::precondition, m.name() + " is not lower-triangular");
  const auto diag = m.diagonal_powers(1.0, truncation);
  for (Index n = 1; n <= truncation; ++n) {
    if (!(diag[n - 1] > 0.0)) {
      fail(ErrorKind::precondition, m.name() + " has a zero diagonal entry at n = " + std::to_string(n));
    }
  }
}

}  // namespace

const char* to_string(Constraint constraint) noexcept {
  return constraint == Constraint::unit_sphere ? "sphere" : "geq-one";
}

DominanceCheck dominance_check(const MatrixDescriptor& m, const TruncatedSequence& z, double p, Index truncation) {
  DominanceCheck out;
  out.lhs = weighted_norm(m, z, p, truncation).value;
  out.rhs = lp_norm(apply(m, z, truncation), p);
  out.ok = out.lhs >= out.rhs - 1e-12 * std::max(1.0, out.rhs);
  return out;
}

double segment_sup(const WeightedNorm& norm, const TruncatedSequence& x, const TruncatedSequence& y) {
  const Index width = std::max(x.size(), y.size());
  return segment_sup_vec(norm, as_vec(x, width), as_vec(y, width));
}

ModulusEstimate modulus_scan(const MatrixDescriptor& m, double p, double epsilon, Index pairs, Index truncation,
                             Constraint constraint, CounterRng rng) {
  if (!(epsilon > 0.0 && epsilon <= 2.0)) fail(ErrorKind::parameter, "epsilon must lie in (0, 2]");
  if (pairs < 1) fail(ErrorKind::parameter, "pairs must be >= 1");
  if (truncation < 2) fail(ErrorKind::parameter, "truncation must be >= 2");
  const Index width = std::max<Index>(2, truncation / 2);
  const WeightedNorm norm(m, p, truncation, width);

  ModulusEstimate out;
  out.epsilon = epsilon;
  out.constraint = constraint;
  out.delta_sample = kInfinity;
  out.beta_sample = kInfinity;
  out.delta_max = -kInfinity;
  double delta_total = 0.0;
  Index draws = 0;

  for (Index i = 0; i < pairs; ++i) {
    CounterRng pair_rng = rng.split(i);
    const Vec x_hat = normalized(norm, gaussian(pair_rng, width));
    Vec w;
    if (i % 4 == 3) {
      w = x_hat;
      const Index flip = pair_rng.below(width);
      w[flip] = -w[flip];
    } else {
      w = gaussian(pair_rng, width);
    }

    double rx = 1.0, ry = 1.0;
    if (constraint == Constraint::norm_at_least_one) {
      do {
        if (++draws > kMaxDraws) fail(ErrorKind::sampling_exhausted, "no admissible radii in 1e6 draws");
        rx = pair_rng.uniform(1.0, 1.5);
        ry = pair_rng.uniform(1.0, 1.5);
      } while (!(std::fabs(rx - ry) < epsilon));
    }
    const Vec y_hat = arc_point(norm, x_hat, w, rx, ry, epsilon);
    const Vec x = scaled(x_hat, rx);
    const Vec y = scaled(y_hat, ry);

    const double distance = norm_of(norm, combine(1.0, x, -1.0, y));
    out.distance_error = std::max(out.distance_error, std::fabs(distance - epsilon));
    const double delta = 1.0 - 0.5 * norm_of(norm, combine(1.0, x, 1.0, y));
    const double beta = segment_sup_vec(norm, x, y);
    out.delta_sample = std::min(out.delta_sample, delta);
    out.delta_max = std::max(out.delta_max, delta);
    out.beta_sample = std::min(out.beta_sample, beta);
    delta_total += delta;
    ++out.pair_count;
  }
  out.delta_mean = delta_total / static_cast<double>(out.pair_count);
  return out;
}

StrictProbe strict_convexity_probe(const MatrixDescriptor& m, double p, Index truncation,
                                   std::span<const std::pair<TruncatedSequence, TruncatedSequence>> pairs) {
  require_strict_exponent(p);
  require_invertible_lower(m, truncation);
  Index width = 1;
  for (const auto& [x, y] : pairs) width = std::max({width, x.support_bound(), y.support_bound()});
  if (width > truncation) fail(ErrorKind::parameter, "pair support exceeds the truncation");
  const WeightedNorm norm(m, p, truncation, width);

  StrictProbe out;
  for (const auto& [x, y] : pairs) {
    const Vec xv = normalized(norm, as_vec(x, width));
    const Vec yv = normalized(norm, as_vec(y, width));
    // Equal up to rounding after normalization.
    if (norm_of(norm, combine(1.0, xv, -1.0, yv)) <= 1e-12) continue;
    const double gap = 1.0 - 0.5 * norm_of(norm, combine(1.0, xv, 1.0, yv));
    ++out.pairs_used;
    if (gap < out.min_gap) {
      out.min_gap = gap;
      out.witness.emplace(TruncatedSequence(xv), TruncatedSequence(yv));
    }
  }
  return out;
}

StrictProbe strict_convexity_probe(const MatrixDescriptor& m, double p, Index pairs, Index truncation,
                                   CounterRng rng) {
  require_strict_exponent(p);
  require_invertible_lower(m, truncation);
  const Index width = std::max<Index>(1, truncation / 2);
  std::vector<std::pair<TruncatedSequence, TruncatedSequence>> sample;
  sample.reserve(pairs);
  for (Index i = 0; i < pairs; ++i) {
    CounterRng pair_rng = rng.split(i);
    Vec x = gaussian(pair_rng, width);
    Vec y = gaussian(pair_rng, width);
    sample.emplace_back(TruncatedSequence(std::move(x)), TruncatedSequence(std::move(y)));
  }
  return strict_convexity_probe(m, p, truncation, sample);
}

UniformWitness uniform_convexity_witness(const MatrixDescriptor& m, double p, double epsilon, Index truncation,
                                         const Tolerances& tol) {
  require_strict_exponent(p);
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail(ErrorKind::parameter, "epsilon must lie in (0, 1]");
  if (truncation < 2) fail(ErrorKind::parameter, "truncation must be >= 2");
  require_invertible_lower(m, truncation);

  const double half = epsilon / 2.0;
  const double lead = std::pow(1.0 - std::pow(half, p), 1.0 / p);
  const TruncatedSequence u({Complex(lead), Complex(half)});
  const TruncatedSequence v({Complex(lead), Complex(-half)});

  UniformWitness out;
  out.x0 = solve_lower_triangular(m, u, truncation);
  out.y0 = solve_lower_triangular(m, v, truncation);
  out.norm_x = weighted_norm(m, out.x0, p, truncation).value;
  out.norm_y = weighted_norm(m, out.y0, p, truncation).value;
  out.distance = weighted_norm(m, out.x0 - out.y0, p, truncation).value;
  const WeightedNorm norm(m, p, truncation, truncation);
  out.sup_alpha_value = segment_sup(norm, out.x0.resized(truncation), out.y0.resized(truncation));
  out.analytic_bound = 1.0 - lead;

  out.checks.push_back(check_le("||x0|| >= 1", 1.0, out.norm_x, tol.inequality));
  out.checks.push_back(check_le("||y0|| >= 1", 1.0, out.norm_y, tol.inequality));
  out.checks.push_back(check_le("||x0 - y0|| >= epsilon", epsilon, out.distance, tol.inequality));
  out.checks.push_back(
      check_le("sup_alpha <= 1 - (1 - (epsilon/2)^p)^(1/p)", out.sup_alpha_value, out.analytic_bound, tol.inequality));
  out.bound_ok = all_pass(out.checks);
  return out;
}

}  // namespace seqspace
