#include "seqspace/special.hpp"

#include <cmath>

#include "seqspace/error.hpp"

namespace seqspace {

namespace {

// B_{2j} / (2j)! for j = 1..7
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
};

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0) || !std::isfinite(s) || !std::isfinite(a)) {
    fail(ErrorKind::domain, "hurwitz_zeta requires s > 1 and a > 0");
  }
  // Sum directly until the shifted argument is large, then Euler-Maclaurin.
  double head = 0.0;
  double x = a;
  while (x < 16.0) {
    head += std::pow(x, -s);
    x += 1.0;
  }
  const double xs = std::pow(x, -s);
  double tail = x * xs / (s - 1.0) + 0.5 * xs;
  // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
  double rising = s;
  double power = xs / x;
  for (int j = 0; j < 7; ++j) {
    double term = kBernoulliOverFactorial[j] * rising * power;
    tail += term;
    if (std::fabs(term) < 1e-18 * tail) break;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= x * x;
  }
  return head + tail;
}

}  // namespace seqspace
