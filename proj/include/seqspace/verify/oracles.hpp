#pragma once

#include <span>
#include <vector>

#include "seqspace/matrix.hpp"
#include "seqspace/sequence.hpp"

// Slow, independent reference computations. None of these share code paths
// with the library routines they are compared against.
namespace seqspace::verify {

/// Greedy O(N^2) partition: from each breakpoint take the LAST t maximizing
/// sum_{(i,t]} mass / sum_{(i,t]} a, up to relative 1e-12.
std::vector<Index> greedy_breakpoints(std::span<const double> mass, std::span<const double> a);

/// Direct double loop over entry(n, k); no kernels, no caching.
double naive_weighted_norm(const MatrixDescriptor& m, const TruncatedSequence& x, double p, Index truncation);

/// w_1..w_count for p = num/den in exact rational arithmetic, w_1 = 1 and
/// w_{k+1} = w_k (k - 1/p) / k, rounded once at the end.
std::vector<double> exact_w_terms(long num, long den, Index count);

/// Generalized binomial C(k - 1 - 1/p, k - 1) for p = num/den, exactly.
double exact_w_binomial(long num, long den, Index k);

/// sum_n a_n sup_{k>=n} |y_k|^p by an O(N^2) sup, then the p-th root.
double naive_d_norm(std::span<const double> a, const TruncatedSequence& y, double p);

/// max_n (sum_{k<=n} a_k)^(-1/p) (sum_{k<=n} |z_k|^r)^(1/r), r finite.
double naive_g_norm(std::span<const double> a, const TruncatedSequence& z, double p, double r);

/// Diagonal tail sums sum_{k=n}^{N} |d_k|^p, each summed afresh.
std::vector<double> naive_tails(std::span<const double> diagonal, double p);

}  // namespace seqspace::verify
