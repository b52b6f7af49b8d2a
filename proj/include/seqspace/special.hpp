#pragma once

namespace seqspace {

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace seqspace
