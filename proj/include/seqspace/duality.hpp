#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seqspace/matrix.hpp"
#include "seqspace/random.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace {

/// sum_{n<=N} y_n x_n. Bilinear; `conjugate` uses conj(y_n) instead.
Complex pairing(const TruncatedSequence& y, const TruncatedSequence& x, Index truncation, bool conjugate = false);

struct DualCheckReport {
  Complex pairing_value;
  double pairing_abs = 0.0;
  double rhs_bound = 0.0;
  double slack = 0.0;
  /// Closed-form dual norm of y when M is diagonal.
  std::optional<double> partial_dual_norm;
  bool ok = false;
};

/// |<y, x>| <= ||y||_{(M^-1)^T, q} ||x||_{M,p} for finitely supported x, y.
DualCheckReport holder_bound_check(const MatrixDescriptor& m, const TruncatedSequence& x, const TruncatedSequence& y,
                                   const SpaceParams& params, Index truncation);

struct DiagonalDualNorm {
  double closed_form = 0.0;
  /// Rayleigh quotient of the extremal vector.
  double bruteforce = 0.0;
  /// Largest quotient |<y, x>| / ||x||_{M,p} over random x; 0 without samples.
  double max_random_quotient = 0.0;
  TruncatedSequence extremal;
};

DiagonalDualNorm diagonal_dual_norm(const MatrixDescriptor& m, const TruncatedSequence& y, const SpaceParams& params,
                                    Index truncation, Index samples = 0, CounterRng rng = CounterRng(0));

struct ColumnGrowth {
  std::vector<Index> columns;
  /// sum_{n<=N} |entry(n, k)|^q for each listed column at the base truncation.
  std::vector<double> column_q_sums;
  std::vector<Index> truncations;
  /// Column-1 sums at N, 2N, 4N.
  std::vector<double> first_column_sums;
  /// Least-squares slope of log(first column sum) against log N.
  double growth_slope = 0.0;
};

/// Column q-sums of `t` for columns {1, N/2, N} and the growth of column 1
/// over N, 2N, 4N.
ColumnGrowth column_growth(const MatrixDescriptor& t, double q, Index truncation);

/// column_growth of the transposed inverse of the remark counterexample.
ColumnGrowth counterexample_diagnostic(Index truncation, double q = 2.0);

enum class Verdict { converging, diverging, inconclusive };
const char* to_string(Verdict verdict) noexcept;

/// Heuristic only: inspects the last three increments of the truncated norms.
struct MembershipDiagnostic {
  std::vector<Index> truncations;
  std::vector<double> norms_at_n;
  Verdict verdict = Verdict::inconclusive;
};

MembershipDiagnostic membership_diagnostic(const MatrixDescriptor& m, const TruncatedSequence& x, double p,
                                           std::span<const Index> truncations);

struct SchauderCheck {
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// ||sum_{k<=m} a_k e_sigma(k)|| <= ||sum_{k<=n} a_k e_sigma(k)||, sigma a
/// 1-based permutation of 1..N.
SchauderCheck schauder_monotonicity_check(const MatrixDescriptor& matrix, std::span<const Complex> coefficients,
                                          std::span<const Index> sigma, Index m, Index n, double p,
                                          Index truncation);

}  // namespace seqspace
