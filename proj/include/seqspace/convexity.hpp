#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seqspace/check.hpp"
#include "seqspace/matrix.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/random.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace {

enum class Constraint {
  unit_sphere,
  /// Both points have norm >= 1.
  norm_at_least_one,
};

const char* to_string(Constraint constraint) noexcept;

struct DominanceCheck {
  bool ok = false;
  double lhs = 0.0;  // ||z||_{M,p}
  double rhs = 0.0;  // ||Mz||_p
};

DominanceCheck dominance_check(const MatrixDescriptor& m, const TruncatedSequence& z, double p, Index truncation);

/// Sampled moduli. Both values are minima over the sampled pairs and hence
/// upper estimates of the true infima.
struct ModulusEstimate {
  double epsilon = 0.0;
  double delta_sample = 0.0;
  double beta_sample = 0.0;
  Index pair_count = 0;
  Constraint constraint = Constraint::unit_sphere;
  /// Spread of the per-pair values 1 - ||x+y||/2.
  double delta_max = 0.0;
  double delta_mean = 0.0;
  /// Largest |  ||x-y|| - epsilon | over the pairs.
  double distance_error = 0.0;
};

/// Pairs at distance exactly epsilon along a normalized arc from x to -x.
ModulusEstimate modulus_scan(const MatrixDescriptor& m, double p, double epsilon, Index pairs, Index truncation,
                             Constraint constraint, CounterRng rng);

/// sup over alpha in [0,1] of 1 - norm(alpha x + (1-alpha) y): a 65-point grid
/// refined by golden section to 1e-6 around the best grid point.
double segment_sup(const WeightedNorm& norm, const TruncatedSequence& x, const TruncatedSequence& y);

struct StrictProbe {
  double min_gap = kInfinity;
  Index pairs_used = 0;
  std::optional<std::pair<TruncatedSequence, TruncatedSequence>> witness;

  bool positive() const noexcept { return pairs_used > 0 && min_gap > 0.0; }
};

/// min of 1 - ||x+y||/2 over independent random unit pairs x != y.
StrictProbe strict_convexity_probe(const MatrixDescriptor& m, double p, Index pairs, Index truncation,
                                   CounterRng rng);
/// The same minimum over given pairs, normalized first; equal pairs are skipped.
StrictProbe strict_convexity_probe(const MatrixDescriptor& m, double p, Index truncation,
                                   std::span<const std::pair<TruncatedSequence, TruncatedSequence>> pairs);

struct UniformWitness {
  TruncatedSequence x0;
  TruncatedSequence y0;
  double norm_x = 0.0;
  double norm_y = 0.0;
  double distance = 0.0;
  double sup_alpha_value = 0.0;
  /// 1 - (1 - (epsilon/2)^p)^(1/p)
  double analytic_bound = 0.0;
  std::vector<Check> checks;
  bool bound_ok = false;
};

/// Preimages under M of u = (c, e/2, 0, ...) and v = (c, -e/2, 0, ...),
/// c = (1 - (e/2)^p)^(1/p).
UniformWitness uniform_convexity_witness(const MatrixDescriptor& m, double p, double epsilon, Index truncation,
                                         const Tolerances& tol = {});

}  // namespace seqspace
