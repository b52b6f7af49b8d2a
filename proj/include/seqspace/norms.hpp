#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seqspace/matrix.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace {

/// (sum |x_n|^p)^(1/p) over the stored values; p = kInfinity gives the max modulus.
double lp_norm(const TruncatedSequence& x, double p);
double lp_norm(std::span<const double> moduli, double p);

struct NormReport {
  double value = 0.0;
  Index truncation = 0;
  /// True when the rows beyond the truncation are certified to contribute
  /// less than 1e-9 relative to the reported p-th power sum.
  bool sound = false;
  /// Upper bound on the omitted p-th power tail, when one is available.
  std::optional<double> tail_bound;
};

/// (sum_{n<=N} (sum_k |m(n,k)| |x_k|)^p)^(1/p). p = kInfinity takes the
/// largest row sum instead.
NormReport weighted_norm(const MatrixDescriptor& m, const TruncatedSequence& x, double p, Index truncation);

/// Weighted norm with the row moduli cached, for repeated evaluation on
/// vectors supported in 1..width.
class WeightedNorm {
 public:
  WeightedNorm(const MatrixDescriptor& m, double p, Index truncation, Index width);

  double operator()(const TruncatedSequence& x) const;
  double operator()(std::span<const double> moduli) const;

  double p() const noexcept { return p_; }
  Index width() const noexcept { return width_; }

 private:
  double p_;
  Index width_;
  std::vector<double> entries_;
  std::vector<std::size_t> offsets_;
};

enum class TailMode {
  /// Anchor the diagonal tails with the closed form beyond N when one exists.
  best,
  /// Finite-section tails sum_{k=n}^{N}.
  truncated,
};

struct DerivedWeights {
  double p = 1.0;
  double q = kInfinity;
  std::vector<double> tail;  // sum_{k>=n} |m(k,k)|^p
  std::vector<double> a;
  std::vector<double> A;
  /// Empty when q is infinite.
  std::vector<double> b;
  std::vector<double> B;
  std::vector<double> b_hat;
  /// Tails were cut at N because no closed form was available.
  bool truncated = false;

  Index size() const noexcept { return a.size(); }
  bool has_b() const noexcept { return !b.empty(); }

  /// Arbitrary positive weights with A the partial sums; no b sequence.
  static DerivedWeights from_weights(std::vector<double> a, double p);
};

DerivedWeights derive_weights(const MatrixDescriptor& m, const SpaceParams& params, Index truncation,
                              TailMode mode = TailMode::best);

/// (sum_n a_n (sup_{k>=n} |x_k|)^p)^(1/p); x finitely supported within N.
double d_norm(const DerivedWeights& w, const TruncatedSequence& x);
double d_norm(const MatrixDescriptor& m, const TruncatedSequence& x, const SpaceParams& params, Index truncation);

/// sup_{n<=N} A_n^(-1/p) (sum_{k<=n} |z_k|^r)^(1/r), r = kInfinity for the max.
double g_norm(const DerivedWeights& w, const TruncatedSequence& z, double inner);
double g_norm(const MatrixDescriptor& m, const TruncatedSequence& z, const SpaceParams& params,
              Index truncation);
double g_norm(const MatrixDescriptor& m, const TruncatedSequence& z, const SpaceParams& params,
              Index truncation, double inner);

/// sup_{k>=n} |x_k| by a right-to-left running maximum.
TruncatedSequence least_decreasing_majorant(const TruncatedSequence& x);

}  // namespace seqspace
