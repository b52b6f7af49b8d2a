#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqspace/sequence.hpp"

namespace seqspace {

enum class MatrixFamily {
  identity,
  cesaro,
  norlund,
  riesz,
  hausdorff,
  hilbert,
  diagonal,
  power_type,
  cesaro_inverse,
  remark_counterexample,
  remark_counterexample_inverse,
  custom,
  transpose,
};

const char* to_string(MatrixFamily family) noexcept;

struct MatrixFlags {
  bool lower_triangular = false;
  bool diagonal = false;
  /// |m(n, k+1)| <= |m(n, k)| for 1 <= k < n, every row n.
  bool row_monotone = false;
};

enum class Summability { summable, divergent, unknown };

struct SparseEntry {
  Index row;
  Index col;
  Complex value;
};

/// Immutable, lazily evaluated infinite matrix. Copies share one model, so
/// passing descriptors by value is cheap and safe across threads.
class MatrixDescriptor {
 public:
  struct Model;

  static MatrixDescriptor identity();
  /// Generalized Cesaro matrix; alpha must not be 0, -1, -2, ...
  static MatrixDescriptor cesaro(double alpha);
  /// m(n,k) = w(n-k+1) / W(n) for k <= n, W the partial sums of w.
  static MatrixDescriptor norlund(std::vector<double> weights);
  /// m(n,k) = w(k) / W(n) for k <= n.
  static MatrixDescriptor riesz(std::vector<double> weights);
  /// Leading block of D diag(mu) D with D(i,j) = (-1)^j C(i,j), 0-based
  /// internally. Entries are evaluated in exact rational arithmetic.
  static MatrixDescriptor hausdorff(std::vector<double> mu);
  static MatrixDescriptor hilbert();
  static MatrixDescriptor diagonal(std::vector<Complex> weights);
  /// d(n) = scale * ratio^n
  static MatrixDescriptor geometric_diagonal(Complex scale, double ratio);
  /// d(n) = 1 / n!
  static MatrixDescriptor inverse_factorial_diagonal();
  /// m(n,k) = gamma * n^-beta for k <= n.
  static MatrixDescriptor power_type(double gamma, double beta);
  static MatrixDescriptor cesaro_inverse();
  /// m(n,n) = m(n,n+1) = 1, zero elsewhere.
  static MatrixDescriptor remark_counterexample();
  /// m(n,k) = (-1)^(n+k) for k >= n.
  static MatrixDescriptor remark_counterexample_inverse();
  /// User-supplied entry function. The flags are taken on trust.
  static MatrixDescriptor custom(std::string name, std::function<Complex(Index, Index)> entry,
                                 MatrixFlags flags);
  /// Finitely many nonzero entries; flags are computed from the entries.
  static MatrixDescriptor from_entries(std::vector<SparseEntry> entries);

  static MatrixDescriptor from_model(std::shared_ptr<const Model> model);

  MatrixFamily family() const noexcept;
  const std::string& name() const noexcept;
  const MatrixFlags& flags() const noexcept;
  bool lower_triangular() const noexcept { return flags().lower_triangular; }
  /// Named scalar parameters (alpha, beta, ...) and the weight prefix, for
  /// reports and serialization.
  const std::vector<std::pair<std::string, double>>& parameters() const noexcept;
  const std::vector<double>& weights() const noexcept;

  /// 1-based entry. Index error for n or k < 1 or beyond a finite prefix.
  Complex entry(Index n, Index k) const;
  /// Entries m(n, 1..kmax) into out[0..kmax).
  void row(Index n, Index kmax, Complex* out) const;
  std::vector<double> row_moduli(Index n, Index kmax) const;
  /// |m(n,n)|^p for n = 1..N.
  std::vector<double> diagonal_powers(double p, Index N) const;

  /// Entries exist only for n, k <= prefix (Norlund, Riesz, Hausdorff,
  /// explicit diagonals).
  std::optional<Index> prefix() const noexcept;
  /// m(n,k) = 0 whenever n - k > bandwidth.
  std::optional<Index> lower_bandwidth() const noexcept;
  /// m(n,k) = 0 whenever k - n > bandwidth.
  std::optional<Index> upper_bandwidth() const noexcept;
  /// |m(n,k)| <= |m(n,1)| for all n, k.
  bool first_column_dominated() const noexcept;

  Summability diagonal_summability(double p) const;
  /// sum_{k >= n} |m(k,k)|^p when a closed form is known.
  std::optional<double> diagonal_tail_closed_form(double p, Index n) const;
  /// sum_{n > N} |m(n,1)|^p when a closed form is known.
  std::optional<double> first_column_tail(double p, Index N) const;
  /// sum_{k > N} |m(k,k)| |m(k,1)|^(p-1) when a closed form is known.
  std::optional<double> mixed_tail(double p, Index N) const;

  std::optional<MatrixDescriptor> cataloged_inverse() const;
  MatrixDescriptor transposed() const;

 private:
  explicit MatrixDescriptor(std::shared_ptr<const Model> model) : model_(std::move(model)) {}
  std::shared_ptr<const Model> model_;
};

/// Closed-form inverse entry; unsupported error for families without one.
Complex inverse_entry(const MatrixDescriptor& m, Index n, Index k);

/// (Mx)_1..(Mx)_N. Exact for lower-triangular M or finitely supported x.
TruncatedSequence apply(const MatrixDescriptor& m, const TruncatedSequence& x, Index truncation);

/// Forward substitution for M x = u on 1..N.
TruncatedSequence solve_lower_triangular(const MatrixDescriptor& m, const TruncatedSequence& u,
                                         Index truncation);

struct ColumnCheck {
  bool ok = true;
  std::optional<Index> witness;
};

/// Semi-decision on the window 1..N: a column counts as nonvanishing when some
/// entry in the window exceeds tau in modulus.
ColumnCheck check_no_vanishing_columns(const MatrixDescriptor& m, Index truncation, double tau = 0.0);

struct RowMonotoneCheck {
  bool ok = true;
  std::optional<std::pair<Index, Index>> witness;
};

RowMonotoneCheck check_row_monotone(const MatrixDescriptor& m, Index truncation);

struct DiagonalTail {
  double value = 0.0;
  bool exact = false;
};

DiagonalTail diagonal_lp_tail(const MatrixDescriptor& m, double p, Index n, Index truncation);

struct GrowthReport {
  double sup_value = 0.0;
  /// Least-squares slope of log v(n) against log n over the upper window.
  double slope = 0.0;
  bool bounded = false;
};

/// p > 1: v(n) = n |m(n,1)| bhat(n)^(1/q). p = 1: v(n) = n^(1+epsilon) A(n) |m(n,1)|.
GrowthReport check_growth_condition(const MatrixDescriptor& m, double p, Index truncation,
                                    double epsilon = 0.1);

}  // namespace seqspace
