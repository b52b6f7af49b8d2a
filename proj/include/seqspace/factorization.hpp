#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqspace/check.hpp"
#include "seqspace/matrix.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/random.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace {

struct SummationByParts {
  bool hypothesis_ok = false;
  bool conclusion_ok = false;
};

/// Hypothesis: prefix sums of u are dominated by those of v and w is
/// nonincreasing. Conclusion: the same domination after weighting by w.
SummationByParts summation_by_parts_check(std::span<const double> u, std::span<const double> v,
                                          std::span<const double> w, Index truncation);

/// Blocks I_n = (i_{n-1}, i_n] of 1..N. When final_block_infinite is set the
/// indices after the last breakpoint form one more block reaching to infinity,
/// on which x vanishes.
struct Partition {
  std::vector<Index> breakpoints;
  bool final_block_infinite = false;
  Index truncation = 0;

  /// Finite blocks as inclusive index ranges.
  std::vector<std::pair<Index, Index>> finite_blocks() const;
};

struct PartitionCheck {
  /// min over finite blocks and their prefixes of (block ratio - prefix ratio), relative.
  double prefix_slack = 0.0;
  /// min over consecutive finite blocks of (ratio_n - ratio_{n+1}), relative.
  double decrease_gap = 0.0;
  bool zero_gap = false;
  bool ok = false;
};

/// Ratios sum_{I}|x|^p / sum_{I} a for every finite block.
std::vector<double> block_ratios(const TruncatedSequence& x, std::span<const double> a, double p,
                                 const Partition& partition);

PartitionCheck check_partition(const TruncatedSequence& x, std::span<const double> a, double p,
                               const Partition& partition, double tolerance = 1e-10);

/// Greedy partition taking at each step the LAST index maximizing the
/// cumulative ratio from the previous breakpoint.
Partition bennett_partition(const TruncatedSequence& x, std::span<const double> a, double p, Index truncation);

struct FactorizationCertificate {
  std::string mode;
  TruncatedSequence y;
  TruncatedSequence z;
  std::optional<Partition> partition;
  std::vector<std::pair<std::string, double>> norms;
  std::vector<Check> checks;
  /// Construction-specific sequence (b_n for lpM).
  std::vector<double> b;
  std::optional<double> tail_bound;

  bool pass() const noexcept { return all_pass(checks); }
};

/// x = y z with y in d_M(p), z in the unit ball of g_M(p).
FactorizationCertificate factor_lp(const TruncatedSequence& x, const MatrixDescriptor& m,
                                   const SpaceParams& params, Index truncation, const Tolerances& tol = {});
FactorizationCertificate factor_lp(const TruncatedSequence& x, const DerivedWeights& weights,
                                   const Tolerances& tol = {});

/// x = y z with y in l^p and z in the unit ball of g_M(q). Checks the matrix
/// predicates first and raises a precondition error naming the first failure.
FactorizationCertificate factor_lpM(const TruncatedSequence& x, const MatrixDescriptor& m,
                                    const SpaceParams& params, Index truncation, const Tolerances& tol = {});

/// The factor_lpM construction without the predicate gate, for studying
/// matrices outside the hypotheses.
FactorizationCertificate factor_lpM_construction(const TruncatedSequence& x, const MatrixDescriptor& m,
                                                 const SpaceParams& params, Index truncation,
                                                 const Tolerances& tol = {});

/// b_n = sum_{k=n}^{N} |m(k,k)| (sum_{j<=k} |m(k,j)| |x_j|)^(p-1), or the
/// plain diagonal tail sum_{k=n}^{N} |m(k,k)| when p = 1.
std::vector<double> lpM_b_sequence(const TruncatedSequence& x, const MatrixDescriptor& m, double p,
                                   Index truncation);

/// (sum_n (sum_{I_n} a)^(1-q) (sum_{I_n} |x|)^q)^(1/q) over the finite blocks.
double psi_functional(const TruncatedSequence& x, std::span<const double> a, const SpaceParams& params,
                      const Partition& partition);

/// x = y z with y in l^q and z in the unit ball of g_M(p), ||y||_q = psi(x).
FactorizationCertificate dual_factor(const TruncatedSequence& x, const MatrixDescriptor& m,
                                     const SpaceParams& params, Index truncation, const Tolerances& tol = {});

struct WSequence {
  std::vector<double> w;
  /// min over k of rhs/lhs in (w_1+...+w_k)^(p-1) < (kq)^p (w_k^(p-1) - w_{k+1}^(p-1)).
  double min_margin = 0.0;
  Index min_margin_at = 0;
};

/// w_1 = 1, w_{k+1} = w_k (k - 1/p) / k.
WSequence w_sequence(double p, Index truncation);

struct InfimumGap {
  double lp_norm = 0.0;
  double constructed_product = 0.0;
  std::optional<double> min_random_product;
  std::vector<Check> checks;
};

/// Compares the constructed factorization against random ones y' z' = x
/// with |y'_n| = |x_n|^t_n, t_n uniform in [0, 1], and a random phase on y'.
InfimumGap infimum_gap(const TruncatedSequence& x, const DerivedWeights& weights, Index trials,
                       CounterRng rng, const Tolerances& tol = {});
InfimumGap infimum_gap(const TruncatedSequence& x, const MatrixDescriptor& m, const SpaceParams& params,
                       Index truncation, Index trials, CounterRng rng, const Tolerances& tol = {});

}  // namespace seqspace
