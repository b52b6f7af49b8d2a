#include "seqspace/verify/battery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>

#include "seqspace/convexity.hpp"
#include "seqspace/duality.hpp"
#include "seqspace/error.hpp"
#include "seqspace/factorization.hpp"
#include "seqspace/matrix.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/random.hpp"
#include "seqspace/verify/oracles.hpp"

namespace seqspace::verify {

namespace {

// Keeps the smallest slack seen and what produced it.
class Tracker {
 public:
  void observe(double slack, const std::string& what) {
    if (std::isnan(slack)) {
      note_failure(what + ": NaN");
      return;
    }
    if (slack < worst_) {
      worst_ = slack;
      worst_what_ = what;
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok) note_failure(what);
  }
  void note_failure(const std::string& what) {
    if (failure_.empty()) failure_ = what;
    ++failures_;
  }
  void info(const std::string& text) { info_ = text; }

  CriterionResult finish(int id) const {
    CriterionResult r;
    const auto& all = criteria();
    const auto it = std::find_if(all.begin(), all.end(), [id](const CriterionInfo& c) { return c.id == id; });
    r.id = id;
    r.name = it->name;
    r.module = it->module;
    r.worst_slack = worst_;
    r.pass = failures_ == 0 && worst_ >= 0.0;
    if (!failure_.empty()) {
      r.detail = failure_ + (failures_ > 1 ? " (+" + std::to_string(failures_ - 1) + " more)" : "");
    } else if (worst_ < 0.0) {
      r.detail = "violated: " + worst_what_;
    } else {
      r.detail = "tightest: " + worst_what_;
    }
    if (!info_.empty()) r.detail += "; " + info_;
    return r;
  }

 private:
  double worst_ = kInfinity;
  std::string worst_what_ = "none";
  std::string failure_;
  std::string info_;
  int failures_ = 0;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// rel - |lhs - rhs| / max(|lhs|, |rhs|, floor); exact agreement gives rel.
double close_slack(double lhs, double rhs, double rel, double floor = 0.0) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), floor});
  return scale == 0.0 ? rel : rel - std::fabs(lhs - rhs) / scale;
}

double check_slack(const std::vector<Check>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return c.slack;
  }
  fail(ErrorKind::internal, "missing check " + name);
}

TruncatedSequence random_sequence(CounterRng& rng, Index max_support) {
  const Index support = 1 + rng.below(max_support);
  std::vector<Complex> v(support);
  for (Index i = 0; i < support; ++i) {
    v[i] = rng.complex_normal();
    if (i + 1 < support && rng.below(6) == 0) v[i] = 0.0;
  }
  return TruncatedSequence(std::move(v));
}

std::string p_label(double p) { return "p=" + fmt(p); }

MatrixDescriptor half_geometric() { return MatrixDescriptor::geometric_diagonal(1.0, 0.5); }

// 1. Norm axioms.
CriterionResult norm_axioms(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root = CounterRng(cfg.seed, 1);
  const Index N = 64;
  const std::vector<MatrixDescriptor> matrices = {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::cesaro(0.5),
                                                  MatrixDescriptor::hilbert(), half_geometric()};
  std::uint64_t stream = 0;
  for (const auto& m : matrices) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const WeightedNorm norm(m, p, N, N);
      const std::string where = m.name() + " " + p_label(p);
      t.require(norm(TruncatedSequence::zeros(N)) == 0.0, where + ": norm of 0 is not 0");
      for (Index k = 1; k <= N; ++k) {
        if (!(norm(TruncatedSequence::unit(k, N)) > 0.0)) t.note_failure(where + ": e_" + std::to_string(k) + " has norm 0");
      }
      CounterRng rng = root.split(stream++);
      for (int i = 0; i < 1000; ++i) {
        const TruncatedSequence x = random_sequence(rng, N);
        const TruncatedSequence y = random_sequence(rng, N);
        const Complex c = rng.complex_normal();
        const double nx = norm(x);
        const double ny = norm(y);
        t.observe(close_slack(norm(x.scaled(c)), std::abs(c) * nx, cfg.tolerances.algebraic),
                  where + " homogeneity");
        const double sum = nx + ny;
        t.observe((sum - norm(x + y)) / sum + cfg.tolerances.inequality, where + " triangle");
      }
    }
  }
  return t.finish(1);
}

// 2. zeta(2) cross-check.
CriterionResult zeta_cross_check(const BatteryConfig&) {
  Tracker t;
  const MatrixDescriptor c1 = MatrixDescriptor::cesaro(1.0);
  const TruncatedSequence e1 = TruncatedSequence::unit(1, 1);
  const double target = std::numbers::pi / std::sqrt(6.0);
  double previous = 0.0;
  double last = 0.0;
  for (Index n : {1, 10, 100, 1000, 10000}) {
    last = weighted_norm(c1, e1, 2.0, n).value;
    t.observe(last - previous, "monotone at N=" + std::to_string(n));
    previous = last;
  }
  t.observe(target - last, "upper end");
  t.observe(last - (target - 1e-4), "lower end");
  t.info("value " + fmt(last) + " vs " + fmt(target));
  return t.finish(2);
}

// 3. Partition against the quadratic oracle.
CriterionResult partition_oracle(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 3);
  const Index N = 128;
  const MatrixDescriptor m = half_geometric();
  for (double p : {1.0, 2.0}) {
    const DerivedWeights w = derive_weights(m, SpaceParams::from_p(p), N);
    CounterRng rng = root.split(static_cast<std::uint64_t>(p));
    for (int i = 0; i < 100; ++i) {
      // Scale by a_k^(1/p) so that blocks of every length occur.
      TruncatedSequence x = random_sequence(rng, N);
      for (Index k = 1; k <= x.size(); ++k) {
        x.at(k) *= std::pow(w.a[k - 1], 1.0 / p) * std::exp(rng.uniform(-1.0, 1.0));
      }
      const Partition part = bennett_partition(x, w.a, p, N);
      std::vector<double> mass(N);
      for (Index k = 1; k <= N; ++k) mass[k - 1] = std::pow(std::abs(x(k)), p);
      const auto expected = greedy_breakpoints(mass, w.a);
      const std::string where = p_label(p) + " sample " + std::to_string(i);
      t.require(part.breakpoints == expected, where + ": breakpoints differ from oracle");
      const PartitionCheck check = check_partition(x, w.a, p, part);
      t.observe(check.prefix_slack + 1e-10, where + " prefix inequality");
      if (part.breakpoints.size() > 1) {
        t.require(!check.zero_gap && check.decrease_gap > 0.0, where + ": ratios not strictly decreasing");
      }
    }
  }
  return t.finish(3);
}

// 4. d-g factorization.
CriterionResult dg_factorization(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 4);
  const Index N = cfg.truncation;
  const std::vector<MatrixDescriptor> matrices = {half_geometric(), MatrixDescriptor::inverse_factorial_diagonal()};
  std::uint64_t stream = 0;
  for (const auto& m : matrices) {
    for (double p : {1.5, 2.0, 3.0}) {
      const DerivedWeights w = derive_weights(m, SpaceParams::from_p(p), N);
      const std::string where = m.name() + " " + p_label(p);
      CounterRng rng = root.split(stream++);
      for (int i = 0; i < 200; ++i) {
        const TruncatedSequence x = random_sequence(rng, N);
        const auto cert = factor_lp(x, w, cfg.tolerances);
        double recon = 0.0, scale = 0.0;
        for (Index k = 1; k <= N; ++k) {
          recon = std::max(recon, std::abs(cert.y(k) * cert.z(k) - x(k)));
          scale = std::max(scale, std::abs(x(k)));
        }
        t.observe(cfg.tolerances.algebraic - recon / scale, where + " reconstruction");
        const double lp = lp_norm(x, p);
        t.observe(close_slack(d_norm(w, cert.y), lp, cfg.tolerances.inequality), where + " d_norm(y) = ||x||_p");
        t.observe(1.0 + cfg.tolerances.algebraic - g_norm(w, cert.z, p), where + " g_norm(z) <= 1");
        const InfimumGap gap = infimum_gap(x, w, 100, rng.split(1000 + i), cfg.tolerances);
        t.observe(*gap.min_random_product - gap.constructed_product + cfg.tolerances.inequality * lp,
                  where + " infimum gap");
      }
    }
  }
  return t.finish(4);
}

// 5. l^p_M factorization.
CriterionResult lpM_factorization(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 5);
  const Index N = 64;
  struct Case {
    MatrixDescriptor m;
    double p;
  };
  const std::vector<Case> cases = {{MatrixDescriptor::cesaro(1.0), 2.0},
                                   {MatrixDescriptor::cesaro(1.0), 3.0},
                                   {MatrixDescriptor::cesaro(0.6), 2.0},
                                   {MatrixDescriptor::power_type(1.0, 1.0), 2.0}};
  std::string summary;
  std::uint64_t stream = 0;
  for (const auto& c : cases) {
    const SpaceParams params = SpaceParams::from_p(c.p);
    const std::string where = c.m.name() + " " + p_label(c.p);
    std::string gate;
    try {
      factor_lpM(TruncatedSequence::unit(1, 1), c.m, params, N);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
      gate = std::string(" [outside hypotheses: ") + e.what() + "]";
    }
    CounterRng rng = root.split(stream++);
    double case_worst = kInfinity;
    for (int i = 0; i < 200; ++i) {
      const TruncatedSequence x = random_sequence(rng, N);
      const auto cert = factor_lpM_construction(x, c.m, params, N, cfg.tolerances);
      const double wx = weighted_norm(c.m, x, c.p, N).value;
      double ly = 0.0;
      for (const auto& [name, value] : cert.norms) {
        if (name == "lp_norm(y)") ly = value;
      }
      const double slacks[] = {(wx * (1.0 + cfg.tolerances.inequality) - ly) / wx,
                               check_slack(cert.checks, "g_norm(z, q) <= 1"),
                               check_slack(cert.checks, "b nonincreasing")};
      t.observe(slacks[0], where + " ||y||_p <= ||x||_{M,p}");
      t.observe(slacks[1], where + " g_norm(z, q) <= 1");
      t.observe(slacks[2], where + " b nonincreasing");
      for (double s : slacks) case_worst = std::min(case_worst, s);
    }
    summary += (summary.empty() ? "" : "; ") + where + (case_worst >= 0.0 ? " ok" : " FAIL " + fmt(case_worst)) + gate;
  }
  t.info(summary);
  return t.finish(5);
}

// 6. w-sequence.
CriterionResult w_sequence_criterion(const BatteryConfig& cfg) {
  Tracker t;
  struct Exponent {
    long num;
    long den;
  };
  for (const Exponent e : {Exponent{3, 2}, Exponent{2, 1}, Exponent{3, 1}}) {
    const double p = static_cast<double>(e.num) / static_cast<double>(e.den);
    const std::string where = p_label(p);
    try {
      const WSequence w = w_sequence(p, 10000);
      for (Index k = 1; k < w.w.size(); ++k) {
        if (!(w.w[k] > 0.0 && w.w[k] < w.w[k - 1])) {
          t.note_failure(where + ": not positive decreasing at " + std::to_string(k + 1));
          break;
        }
      }
      t.observe(w.min_margin - 1.0, where + " margin at k=" + std::to_string(w.min_margin_at));
      const auto exact = exact_w_terms(e.num, e.den, 30);
      for (Index k = 0; k < 30; ++k) {
        t.observe(close_slack(w.w[k], exact[k], cfg.tolerances.algebraic), where + " exact term " + std::to_string(k + 1));
      }
    } catch (const Error& err) {
      t.note_failure(where + ": " + err.what());
    }
  }
  return t.finish(6);
}

// 7. Parallelogram exactness for the identity at p = 2.
CriterionResult convexity_exact(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 7);
  const MatrixDescriptor id = MatrixDescriptor::identity();
  std::uint64_t stream = 0;
  for (double eps : {0.2, 0.6, 1.0, 1.4, 1.8}) {
    const auto est = modulus_scan(id, 2.0, eps, 200, cfg.truncation, Constraint::unit_sphere, root.split(stream++));
    const double exact = 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
    const std::string where = "eps=" + fmt(eps);
    t.observe(cfg.tolerances.inequality - std::fabs(est.delta_sample - exact), where + " min delta");
    t.observe(cfg.tolerances.inequality - std::fabs(est.delta_max - exact), where + " max delta");
    t.observe(est.beta_sample - est.delta_sample, where + " delta <= beta");
  }
  return t.finish(7);
}

// 8. Uniform convexity witness.
CriterionResult convexity_witness(const BatteryConfig& cfg) {
  Tracker t;
  const MatrixDescriptor c1 = MatrixDescriptor::cesaro(1.0);
  for (double p : {1.5, 2.0, 3.0}) {
    for (double eps : {0.25, 0.5, 1.0}) {
      const auto w = uniform_convexity_witness(c1, p, eps, 64, cfg.tolerances);
      for (const auto& c : w.checks) t.observe(c.slack, p_label(p) + " eps=" + fmt(eps) + " " + c.name);
    }
  }
  return t.finish(8);
}

// 9. Strict convexity probe.
CriterionResult strict_probe(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 9);
  std::uint64_t stream = 0;
  for (double alpha : {1.0, 0.5}) {
    const MatrixDescriptor m = MatrixDescriptor::cesaro(alpha);
    for (double p : {1.5, 2.0, 3.0}) {
      const auto probe = strict_convexity_probe(m, p, 1000, 32, root.split(stream++));
      t.require(probe.pairs_used > 0, m.name() + " " + p_label(p) + ": no admissible pairs");
      t.observe(probe.min_gap, m.name() + " " + p_label(p) + " min gap");
      if (!(probe.min_gap > 0.0)) t.note_failure(m.name() + " " + p_label(p) + ": min gap not positive");
    }
  }
  return t.finish(9);
}

// 10. Duality.
CriterionResult duality_criterion(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng root(cfg.seed, 10);
  const Index N = cfg.truncation;
  const std::vector<MatrixDescriptor> matrices = {MatrixDescriptor::cesaro(1.0), half_geometric(),
                                                  MatrixDescriptor::inverse_factorial_diagonal()};
  std::uint64_t stream = 0;
  for (const auto& m : matrices) {
    for (double p : {1.5, 2.0, 3.0}) {
      const SpaceParams params = SpaceParams::from_p(p);
      const std::string where = m.name() + " " + p_label(p);
      CounterRng rng = root.split(stream++);
      for (int i = 0; i < 500; ++i) {
        const TruncatedSequence x = random_sequence(rng, N - 1);
        const TruncatedSequence y = random_sequence(rng, N - 1);
        const auto report = holder_bound_check(m, x, y, params, N);
        t.observe((report.slack + 1e-9 * std::max(1.0, report.rhs_bound)) / std::max(1.0, report.rhs_bound),
                  where + " Hoelder");
        if (m.flags().diagonal) {
          const auto dual = diagonal_dual_norm(m, y, params, N, i < 5 ? 1000 : 0, rng.split(5000 + i));
          t.observe(close_slack(dual.closed_form, dual.bruteforce, cfg.tolerances.inequality),
                    where + " closed form = extremal quotient");
          t.observe((dual.closed_form - dual.max_random_quotient) / dual.closed_form + cfg.tolerances.inequality,
                    where + " extremal dominates random");
        }
      }
    }
  }
  return t.finish(10);
}

// 11. Column growth of the counterexample against the Cesaro inverse.
CriterionResult counterexample_criterion(const BatteryConfig& cfg) {
  Tracker t;
  const ColumnGrowth bad = counterexample_diagnostic(64, 2.0);
  t.observe(bad.growth_slope - 0.9, "counterexample slope");
  const ColumnGrowth good = column_growth(MatrixDescriptor::cesaro_inverse().transposed(), 2.0, 64);
  for (double s : good.first_column_sums) {
    t.observe(close_slack(s, good.first_column_sums.front(), cfg.tolerances.algebraic, 1.0),
              "(C^-1)^T column 1 constant");
  }
  for (std::size_t i = 0; i < good.columns.size(); ++i) {
    const double k = static_cast<double>(good.columns[i]);
    const double expected = k * k + (k - 1.0) * (k - 1.0);
    t.observe(close_slack(good.column_q_sums[i], expected, cfg.tolerances.algebraic, 1.0),
              "(C^-1)^T column " + fmt(k) + " has two terms");
  }
  t.info("slope " + fmt(bad.growth_slope) + "; (C^-1)^T column sums constant");
  return t.finish(11);
}

// 12. Schauder monotonicity.
CriterionResult schauder_criterion(const BatteryConfig& cfg) {
  Tracker t;
  CounterRng rng(cfg.seed, 12);
  const MatrixDescriptor m = MatrixDescriptor::cesaro(0.5);
  const Index N = 32;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Complex> a(N);
    for (auto& c : a) c = rng.complex_normal();
    std::vector<Index> sigma(N);
    std::iota(sigma.begin(), sigma.end(), Index{1});
    for (Index k = N - 1; k > 0; --k) std::swap(sigma[k], sigma[rng.below(k + 1)]);
    Index lo = 1 + rng.below(N);
    Index hi = 1 + rng.below(N);
    if (lo > hi) std::swap(lo, hi);
    const auto r = schauder_monotonicity_check(m, a, sigma, lo, hi, 2.0, N);
    t.observe(r.rhs - r.lhs + 1e-12 * std::max(1.0, r.rhs), "instance " + std::to_string(i));
  }
  return t.finish(12);
}

using Runner = std::function<CriterionResult(const BatteryConfig&)>;

const std::vector<Runner>& runners() {
  static const std::vector<Runner> table = {
      norm_axioms,       zeta_cross_check,  partition_oracle, dg_factorization,        lpM_factorization,
      w_sequence_criterion, convexity_exact, convexity_witness, strict_probe,           duality_criterion,
      counterexample_criterion, schauder_criterion};
  return table;
}

bool selected(const CriterionInfo& info, const std::string& filter) {
  return filter.empty() || std::string(info.module).find(filter) != std::string::npos ||
         std::string(info.name).find(filter) != std::string::npos;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> table = {
      {1, "norm-axioms", "norms-weights"},
      {2, "zeta2-cross-check", "norms-weights"},
      {3, "bennett-partition", "partition-factorization"},
      {4, "factorization-d-g", "partition-factorization"},
      {5, "factorization-lpM", "partition-factorization"},
      {6, "w-sequence", "partition-factorization"},
      {7, "parallelogram-exactness", "convexity"},
      {8, "uniform-convexity-witness", "convexity"},
      {9, "strict-convexity-probe", "convexity"},
      {10, "holder-and-diagonal-dual", "duality"},
      {11, "counterexample-columns", "duality"},
      {12, "schauder-monotonicity", "duality"},
      {13, "determinism", "cli"},
  };
  return table;
}

CriterionResult run_criterion(int id, const BatteryConfig& config) {
  if (id < 1 || id > 12) fail(ErrorKind::parameter, "criterion id out of range");
  try {
    return runners()[static_cast<std::size_t>(id - 1)](config);
  } catch (const Error& e) {
    Tracker t;
    t.note_failure(std::string(to_string(e.kind())) + " error: " + e.what());
    return t.finish(id);
  }
}

std::vector<CriterionResult> run_battery(const BatteryConfig& config) {
  std::vector<int> ids;
  bool determinism = false;
  for (const auto& c : criteria()) {
    if (!selected(c, config.filter)) continue;
    if (c.id == 13) determinism = true;
    else ids.push_back(c.id);
  }
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, config));
  if (determinism) {
    std::vector<int> rerun_ids = ids;
    if (rerun_ids.empty()) {
      for (int id = 1; id <= 12; ++id) rerun_ids.push_back(id);
    }
    std::vector<CriterionResult> first = out;
    std::vector<CriterionResult> second;
    for (int id : rerun_ids) {
      if (ids.empty()) first.push_back(run_criterion(id, config));
      second.push_back(run_criterion(id, config));
    }
    Tracker t;
    t.require(format_report(first) == format_report(second), "reports differ between runs");
    t.observe(0.0, "byte comparison of " + std::to_string(rerun_ids.size()) + " criteria");
    t.info("identical reports for seed " + std::to_string(config.seed));
    out.push_back(t.finish(13));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char slack[32];
  if (std::isinf(r.worst_slack) && r.worst_slack > 0) std::snprintf(slack, sizeof slack, "n/a");
  else std::snprintf(slack, sizeof slack, "%+.3e", r.worst_slack);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s %2d %-26s %-24s slack=%s  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.module.c_str(), slack);
  return std::string(buf) + r.detail;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) out += format_line(r) + "\n";
  return out;
}

}  // namespace seqspace::verify
