#include "seqspace/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seqspace/error.hpp"

namespace seqspace {

namespace {

double root(double sum, double p) {
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

void require_finite_within(const TruncatedSequence& x, Index truncation, const char* what) {
  if (!x.finite_support() || x.support_bound() > truncation) {
    fail(ErrorKind::truncation_unsound, std::string(what) + " needs x finitely supported within 1..N");
  }
}

double max_modulus(const TruncatedSequence& x) {
  double m = 0.0;
  for (const Complex& v : x.values()) m = std::max(m, std::abs(v));
  return m;
}

Check reconstruction_check(const TruncatedSequence& x, const TruncatedSequence& y, const TruncatedSequence& z,
                           double rel_tolerance) {
  const Index n = std::max({x.size(), y.size(), z.size()});
  double err = 0.0;
  for (Index i = 1; i <= n; ++i) err = std::max(err, std::abs(y(i) * z(i) - x(i)));
  return check_le("y*z = x", err, 0.0, rel_tolerance * max_modulus(x));
}

}  // namespace

SummationByParts summation_by_parts_check(std::span<const double> u, std::span<const double> v,
                                          std::span<const double> w, Index truncation) {
  if (u.size() < truncation || v.size() < truncation || w.size() < truncation) {
    fail(ErrorKind::parameter, "sequences must be given on 1..N");
  }
  for (Index i = 0; i < truncation; ++i) {
    if (!(u[i] >= 0.0) || !(v[i] >= 0.0) || !(w[i] >= 0.0)) {
      fail(ErrorKind::domain, "summation by parts needs nonnegative entries");
    }
  }
  SummationByParts out{true, true};
  double su = 0.0, sv = 0.0, swu = 0.0, swv = 0.0;
  for (Index i = 0; i < truncation; ++i) {
    su += u[i];
    sv += v[i];
    swu += u[i] * w[i];
    swv += v[i] * w[i];
    if (su > sv) out.hypothesis_ok = false;
    if (i > 0 && w[i] > w[i - 1]) out.hypothesis_ok = false;
    if (swu > swv + 1e-12) out.conclusion_ok = false;
  }
  return out;
}

std::vector<std::pair<Index, Index>> Partition::finite_blocks() const {
  std::vector<std::pair<Index, Index>> out;
  Index start = 1;
  for (Index end : breakpoints) {
    out.emplace_back(start, end);
    start = end + 1;
  }
  return out;
}

std::vector<double> block_ratios(const TruncatedSequence& x, std::span<const double> a, double p,
                                 const Partition& partition) {
  std::vector<double> out;
  for (auto [lo, hi] : partition.finite_blocks()) {
    double mass = 0.0, weight = 0.0;
    for (Index k = lo; k <= hi; ++k) {
      mass += pow_abs(std::abs(x(k)), p);
      weight += a[k - 1];
    }
    out.push_back(mass / weight);
  }
  return out;
}

PartitionCheck check_partition(const TruncatedSequence& x, std::span<const double> a, double p,
                               const Partition& partition, double tolerance) {
  PartitionCheck out;
  out.prefix_slack = kInfinity;
  out.decrease_gap = kInfinity;
  const auto blocks = partition.finite_blocks();
  const auto ratios = block_ratios(x, a, p, partition);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double ratio = ratios[b];
    const double scale = ratio > 0.0 ? ratio : 1.0;
    double mass = 0.0, weight = 0.0;
    for (Index k = blocks[b].first; k <= blocks[b].second; ++k) {
      mass += pow_abs(std::abs(x(k)), p);
      weight += a[k - 1];
      out.prefix_slack = std::min(out.prefix_slack, (ratio - mass / weight) / scale);
    }
    if (b + 1 < blocks.size()) {
      const double gap = (ratio - ratios[b + 1]) / scale;
      out.decrease_gap = std::min(out.decrease_gap, gap);
      if (gap <= 0.0) out.zero_gap = true;
    }
  }
  out.ok = out.prefix_slack >= -tolerance && out.decrease_gap > -tolerance;
  return out;
}

Partition bennett_partition(const TruncatedSequence& x, std::span<const double> a, double p, Index truncation) {
  if (!(p >= 1.0)) fail(ErrorKind::parameter, "exponent p must be >= 1");
  require_finite_within(x, truncation, "bennett_partition");
  if (a.size() < truncation) fail(ErrorKind::parameter, "weights must cover 1..N");
  for (Index k = 0; k < truncation; ++k) {
    if (!(a[k] > 0.0)) fail(ErrorKind::domain, "weight a_" + std::to_string(k + 1) + " is not positive");
  }

  // Pool adjacent blocks until the ratios strictly decrease; merging on ties
  // makes each breakpoint the last maximizer of the cumulative ratio.
  struct Block {
    Index end;
    double mass;
    double weight;
  };
  std::vector<Block> stack;
  const Index support = x.support_bound();
  for (Index t = 1; t <= support; ++t) {
    stack.push_back({t, pow_abs(std::abs(x(t)), p), a[t - 1]});
    while (stack.size() >= 2) {
      const Block& top = stack.back();
      const Block& prev = stack[stack.size() - 2];
      if (prev.mass * top.weight > top.mass * prev.weight * (1.0 + 1e-12)) break;
      Block merged{top.end, prev.mass + top.mass, prev.weight + top.weight};
      stack.pop_back();
      stack.back() = merged;
    }
  }

  Partition out;
  out.truncation = truncation;
  out.final_block_infinite = true;
  for (const Block& b : stack) out.breakpoints.push_back(b.end);

  const PartitionCheck check = check_partition(x, a, p, out);
  if (!check.ok) {
    fail(ErrorKind::internal, "partition violates the block inequalities (prefix slack " +
                                  std::to_string(check.prefix_slack) + ", gap " +
                                  std::to_string(check.decrease_gap) + ")");
  }
  return out;
}

FactorizationCertificate factor_lp(const TruncatedSequence& x, const DerivedWeights& weights,
                                   const Tolerances& tol) {
  const Index N = weights.size();
  require_finite_within(x, N, "factor_lp");
  if (x.is_zero()) fail(ErrorKind::degenerate_input, "factor_lp needs x != 0");
  const double p = weights.p;

  FactorizationCertificate cert;
  cert.mode = "lp";
  cert.partition = bennett_partition(x, weights.a, p, N);
  const auto ratios = block_ratios(x, weights.a, p, *cert.partition);
  const auto blocks = cert.partition->finite_blocks();

  std::vector<Complex> y(N), z(N);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!(ratios[b] > 0.0)) fail(ErrorKind::internal, "zero-ratio block before the support ends");
    const double level = root(ratios[b], p);
    for (Index j = blocks[b].first; j <= blocks[b].second; ++j) {
      y[j - 1] = level;
      z[j - 1] = x(j) / level;
    }
  }
  cert.y = TruncatedSequence(std::move(y));
  cert.z = TruncatedSequence(std::move(z));

  const double lp = lp_norm(x, p);
  const double dy = d_norm(weights, cert.y);
  const double gz = g_norm(weights, cert.z, p);
  cert.norms = {{"lp_norm(x)", lp}, {"d_norm(y)", dy}, {"g_norm(z)", gz}};

  double rise = 0.0;
  for (Index j = 1; j < x.support_bound(); ++j) rise = std::max(rise, cert.y(j + 1).real() - cert.y(j).real());
  cert.checks.push_back(reconstruction_check(x, cert.y, cert.z, tol.algebraic));
  cert.checks.push_back(check_close("d_norm(y) = ||x||_p", dy, lp, tol.inequality));
  cert.checks.push_back(check_le("g_norm(z, p) <= 1", gz, 1.0, tol.algebraic));
  cert.checks.push_back(check_le("||x||_p <= d_norm(y) * g_norm(z)", lp, dy * gz, tol.inequality * lp));
  cert.checks.push_back(check_le("y nonincreasing", rise, 0.0, 0.0));
  return cert;
}

FactorizationCertificate factor_lp(const TruncatedSequence& x, const MatrixDescriptor& m,
                                   const SpaceParams& params, Index truncation, const Tolerances& tol) {
  require_finite_within(x, truncation, "factor_lp");
  if (x.is_zero()) fail(ErrorKind::degenerate_input, "factor_lp needs x != 0");
  return factor_lp(x, derive_weights(m, params, truncation), tol);
}

std::vector<double> lpM_b_sequence(const TruncatedSequence& x, const MatrixDescriptor& m, double p,
                                   Index truncation) {
  if (!m.lower_triangular()) fail(ErrorKind::precondition, m.name() + " is not lower-triangular");
  require_finite_within(x, truncation, "lpM_b_sequence");
  const auto diag = m.diagonal_powers(1.0, truncation);
  std::vector<double> terms(truncation);
  if (p == 1.0) {
    terms = diag;
  } else {
    const auto moduli = x.moduli();
    const Index support = x.support_bound();
    for (Index k = 1; k <= truncation; ++k) {
      const Index kmax = std::min(k, support);
      double row = 0.0;
      if (kmax > 0) {
        const auto entries = m.row_moduli(k, kmax);
        for (Index j = 0; j < kmax; ++j) row += entries[j] * moduli[j];
      }
      terms[k - 1] = diag[k - 1] * pow_abs(row, p - 1.0);
    }
  }
  std::vector<double> b(truncation);
  double acc = 0.0;
  for (Index n = truncation; n >= 1; --n) b[n - 1] = (acc += terms[n - 1]);
  return b;
}

FactorizationCertificate factor_lpM_construction(const TruncatedSequence& x, const MatrixDescriptor& m,
                                                 const SpaceParams& params, Index truncation,
                                                 const Tolerances& tol) {
  const double p = params.p;
  const Index N = truncation;
  FactorizationCertificate cert;
  cert.mode = "lpM";
  cert.b = lpM_b_sequence(x, m, p, N);
  const DerivedWeights weights = derive_weights(m, params, N, TailMode::truncated);

  double l1 = 0.0;
  for (double v : x.moduli()) l1 += v;
  if (p > 1.0) {
    if (auto mixed = m.mixed_tail(p, N)) cert.tail_bound = pow_abs(l1, p - 1.0) * *mixed;
  } else if (auto closed = m.diagonal_tail_closed_form(1.0, N + 1)) {
    cert.tail_bound = *closed;
  }

  std::vector<Complex> y(N), z(N);
  const bool zero = x.is_zero();
  for (Index n = 1; n <= N && !zero; ++n) {
    const Complex xn = x(n);
    const double bn = cert.b[n - 1];
    if (p == 1.0) {
      if (!(bn > 0.0)) fail(ErrorKind::internal, "b_" + std::to_string(n) + " vanishes");
      z[n - 1] = 1.0 / bn;
      y[n - 1] = xn * bn;
      continue;
    }
    if (xn == Complex(0.0)) continue;
    if (!(bn > 0.0)) fail(ErrorKind::internal, "b_" + std::to_string(n) + " vanishes on the support of x");
    const double modulus = std::abs(xn);
    y[n - 1] = (xn / modulus) * std::pow(modulus * bn, 1.0 / p);
    z[n - 1] = std::pow(modulus, 1.0 / params.q) * std::pow(bn, -1.0 / p);
  }
  cert.y = TruncatedSequence(std::move(y));
  cert.z = TruncatedSequence(std::move(z));

  const double ly = lp_norm(cert.y, p);
  const double wx = weighted_norm(m, x, p, N).value;
  const double gz = g_norm(weights, cert.z, params.q);
  cert.norms = {{"lp_norm(y)", ly}, {"weighted_norm(x)", wx}, {"g_norm(z)", gz}};

  double rise = 0.0;
  Index nonpositive = 0;
  for (Index n = 1; n <= N; ++n) {
    if (n < N) rise = std::max(rise, cert.b[n] - cert.b[n - 1]);
    if (x(n) != Complex(0.0) && !(cert.b[n - 1] > 0.0)) ++nonpositive;
  }
  cert.checks.push_back(reconstruction_check(x, cert.y, cert.z, tol.algebraic));
  cert.checks.push_back(check_le("||y||_p <= ||x||_{M,p}", ly, wx, tol.inequality * wx));
  cert.checks.push_back(check_le("g_norm(z, q) <= 1", gz, 1.0, tol.inequality));
  cert.checks.push_back(check_le("b nonincreasing", rise, 0.0, 0.0));
  cert.checks.push_back(check_le("b positive on support", static_cast<double>(nonpositive), 0.0, 0.0));
  if (p > 1.0 && !zero) {
    const double bound = root(weights.tail[0], p) * pow_abs(wx, p - 1.0);
    cert.checks.push_back(check_le("b_1 <= ||diag||_p ||x||_{M,p}^(p/q)", cert.b[0], bound,
                                   tol.inequality * bound));
  }
  return cert;
}

FactorizationCertificate factor_lpM(const TruncatedSequence& x, const MatrixDescriptor& m,
                                    const SpaceParams& params, Index truncation, const Tolerances& tol) {
  if (!m.lower_triangular()) fail(ErrorKind::precondition, m.name() + " is not lower-triangular");
  if (!m.flags().row_monotone) {
    const auto check = check_row_monotone(m, truncation);
    std::string where;
    if (check.witness) {
      where = " (first violation at row " + std::to_string(check.witness->first) + ", column " +
              std::to_string(check.witness->second) + ")";
    }
    fail(ErrorKind::precondition, m.name() + " is not row-monotone" + where);
  }
  if (m.diagonal_summability(params.p) == Summability::divergent) {
    fail(ErrorKind::precondition, "diagonal of " + m.name() + " is not l^p-summable");
  }
  return factor_lpM_construction(x, m, params, truncation, tol);
}

double psi_functional(const TruncatedSequence& x, std::span<const double> a, const SpaceParams& params,
                      const Partition& partition) {
  if (params.q_infinite()) fail(ErrorKind::unsupported, "psi needs a finite conjugate exponent");
  const double q = params.q;
  double total = 0.0;
  for (auto [lo, hi] : partition.finite_blocks()) {
    double mass = 0.0, weight = 0.0;
    for (Index k = lo; k <= hi; ++k) {
      mass += std::abs(x(k));
      weight += a[k - 1];
    }
    if (mass > 0.0) total += std::pow(weight, 1.0 - q) * pow_abs(mass, q);
  }
  return root(total, q);
}

FactorizationCertificate dual_factor(const TruncatedSequence& x, const MatrixDescriptor& m,
                                     const SpaceParams& params, Index truncation, const Tolerances& tol) {
  if (params.q_infinite()) fail(ErrorKind::parameter, "dual factorization needs p > 1");
  require_finite_within(x, truncation, "dual_factor");
  if (x.is_zero()) fail(ErrorKind::degenerate_input, "dual_factor needs x != 0");
  const double p = params.p;
  const double q = params.q;
  const DerivedWeights weights = derive_weights(m, params, truncation);

  FactorizationCertificate cert;
  cert.mode = "dual";
  cert.partition = bennett_partition(x, weights.a, 1.0, truncation);
  std::vector<Complex> y(truncation), z(truncation);
  double worst_block = 0.0;
  for (auto [lo, hi] : cert.partition->finite_blocks()) {
    double mass = 0.0, weight = 0.0;
    for (Index k = lo; k <= hi; ++k) {
      mass += std::abs(x(k));
      weight += weights.a[k - 1];
    }
    double block_q = 0.0;
    for (Index j = lo; j <= hi; ++j) {
      const double modulus = std::abs(x(j));
      if (modulus == 0.0) continue;
      const double zj = root(modulus * weight / mass, p);
      z[j - 1] = zj;
      y[j - 1] = x(j) / zj;
      block_q += pow_abs(std::abs(y[j - 1]), q);
    }
    const double expected = std::pow(weight, 1.0 - q) * pow_abs(mass, q);
    worst_block = std::max(worst_block, std::fabs(block_q - expected) / expected);
  }
  cert.y = TruncatedSequence(std::move(y));
  cert.z = TruncatedSequence(std::move(z));

  const double psi = psi_functional(x, weights.a, params, *cert.partition);
  const double ly = lp_norm(cert.y, q);
  const double gz = g_norm(weights, cert.z, p);
  cert.norms = {{"psi(x)", psi}, {"lq_norm(y)", ly}, {"g_norm(z)", gz}};
  cert.checks.push_back(reconstruction_check(x, cert.y, cert.z, tol.algebraic));
  cert.checks.push_back(check_close("||y||_q = psi(x)", ly, psi, tol.inequality));
  cert.checks.push_back(check_le("g_norm(z, p) <= 1", gz, 1.0, tol.inequality));
  cert.checks.push_back(check_le("blockwise ||y||_q^q identity", worst_block, 0.0, tol.inequality));
  return cert;
}

WSequence w_sequence(double p, Index truncation) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::domain, "w-sequence needs p > 1");
  if (truncation < 1) fail(ErrorKind::parameter, "truncation must be >= 1");
  const double q = p / (p - 1.0);
  WSequence out;
  out.w.resize(truncation);
  out.w[0] = 1.0;
  for (Index k = 1; k < truncation; ++k) {
    const double kd = static_cast<double>(k);
    out.w[k] = out.w[k - 1] * (kd - 1.0 / p) / kd;
  }
  out.min_margin = kInfinity;
  double partial = 0.0;
  for (Index k = 1; k < truncation; ++k) {
    const double kd = static_cast<double>(k);
    const double wk = out.w[k - 1];
    if (!(out.w[k] > 0.0) || !(out.w[k] < wk)) {
      fail(ErrorKind::internal, "w-sequence is not positive and decreasing at k = " + std::to_string(k));
    }
    partial += wk;
    const double lhs = std::pow(partial, p - 1.0);
    // w_k^(p-1) - w_{k+1}^(p-1) with w_{k+1}/w_k = 1 - 1/(pk)
    const double drop = std::pow(wk, p - 1.0) * -std::expm1((p - 1.0) * std::log1p(-1.0 / (p * kd)));
    const double rhs = std::pow(kd * q, p) * drop;
    const double margin = rhs / lhs;
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.min_margin_at = k;
    }
  }
  if (truncation > 1 && !(out.min_margin > 1.0)) {
    fail(ErrorKind::internal, "w-sequence inequality fails at k = " + std::to_string(out.min_margin_at));
  }
  return out;
}

InfimumGap infimum_gap(const TruncatedSequence& x, const DerivedWeights& weights, Index trials, CounterRng rng,
                       const Tolerances& tol) {
  const FactorizationCertificate cert = factor_lp(x, weights, tol);
  const double p = weights.p;
  InfimumGap out;
  out.lp_norm = lp_norm(x, p);
  out.constructed_product = d_norm(weights, cert.y) * g_norm(weights, cert.z, p);
  if (trials == 0) return out;

  const Index support = x.support_bound();
  double best = kInfinity;
  for (Index t = 0; t < trials; ++t) {
    CounterRng trial = rng.split(t);
    std::vector<Complex> y(support), z(support);
    for (Index n = 1; n <= support; ++n) {
      const Complex xn = x(n);
      const double split = trial.uniform();
      const double phase = 2.0 * std::numbers::pi * trial.uniform();
      if (xn == Complex(0.0)) continue;
      y[n - 1] = std::polar(std::pow(std::abs(xn), split), phase);
      z[n - 1] = xn / y[n - 1];
    }
    const double product =
        d_norm(weights, TruncatedSequence(std::move(y))) * g_norm(weights, TruncatedSequence(std::move(z)), p);
    best = std::min(best, product);
  }
  out.min_random_product = best;
  out.checks.push_back(check_le("||x||_p <= min random product", out.lp_norm, best, tol.inequality * out.lp_norm));
  out.checks.push_back(check_le("constructed <= min random product", out.constructed_product, best,
                                tol.inequality * out.lp_norm));
  return out;
}

InfimumGap infimum_gap(const TruncatedSequence& x, const MatrixDescriptor& m, const SpaceParams& params,
                       Index truncation, Index trials, CounterRng rng, const Tolerances& tol) {
  require_finite_within(x, truncation, "infimum_gap");
  if (x.is_zero()) fail(ErrorKind::degenerate_input, "infimum_gap needs x != 0");
  return infimum_gap(x, derive_weights(m, params, truncation), trials, rng, tol);
}

}  // namespace seqspace
