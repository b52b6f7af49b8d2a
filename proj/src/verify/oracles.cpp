#include "seqspace/verify/oracles.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace seqspace::verify {

using boost::multiprecision::cpp_rational;

std::vector<Index> greedy_breakpoints(std::span<const double> mass, std::span<const double> a) {
  Index support = mass.size();
  while (support > 0 && mass[support - 1] == 0.0) --support;
  std::vector<Index> out;
  Index start = 0;
  while (start < support) {
    std::vector<double> ratios;
    double m = 0.0, w = 0.0;
    for (Index t = start; t < mass.size(); ++t) {
      m += mass[t];
      w += a[t];
      ratios.push_back(m / w);
    }
    const double best = *std::max_element(ratios.begin(), ratios.end());
    Index pick = 0;
    for (Index i = 0; i < ratios.size(); ++i) {
      if (ratios[i] >= best * (1.0 - 1e-12)) pick = i;
    }
    start += pick + 1;
    out.push_back(start);
  }
  return out;
}

double naive_weighted_norm(const MatrixDescriptor& m, const TruncatedSequence& x, double p, Index truncation) {
  const Index width = x.finite_support() ? x.support_bound() : x.size();
  double total = 0.0;
  for (Index n = 1; n <= truncation; ++n) {
    double row = 0.0;
    const Index kmax = m.lower_triangular() ? std::min(n, width) : width;
    for (Index k = 1; k <= kmax; ++k) row += std::abs(m.entry(n, k)) * std::abs(x(k));
    total += std::pow(row, p);
  }
  return std::pow(total, 1.0 / p);
}

std::vector<double> exact_w_terms(long num, long den, Index count) {
  const cpp_rational inv_p(den, num);
  std::vector<double> out;
  cpp_rational w = 1;
  for (Index k = 1; k <= count; ++k) {
    out.push_back(static_cast<double>(w));
    w *= (cpp_rational(static_cast<long>(k)) - inv_p) / cpp_rational(static_cast<long>(k));
  }
  return out;
}

double exact_w_binomial(long num, long den, Index k) {
  // C(r, j) = prod_{i<j} (r - i) / (i + 1) with r = k - 1 - 1/p, j = k - 1.
  const cpp_rational r = cpp_rational(static_cast<long>(k) - 1) - cpp_rational(den, num);
  cpp_rational c = 1;
  for (Index i = 0; i + 1 < k; ++i) {
    c *= (r - cpp_rational(static_cast<long>(i))) / cpp_rational(static_cast<long>(i) + 1);
  }
  return static_cast<double>(c);
}

double naive_d_norm(std::span<const double> a, const TruncatedSequence& y, double p) {
  const Index n_max = y.size();
  double total = 0.0;
  for (Index n = 1; n <= n_max; ++n) {
    double sup = 0.0;
    for (Index k = n; k <= n_max; ++k) sup = std::max(sup, std::abs(y(k)));
    total += a[n - 1] * std::pow(sup, p);
  }
  return std::pow(total, 1.0 / p);
}

double naive_g_norm(std::span<const double> a, const TruncatedSequence& z, double p, double r) {
  double best = 0.0;
  for (Index n = 1; n <= a.size(); ++n) {
    double weight = 0.0, mass = 0.0;
    for (Index k = 1; k <= n; ++k) {
      weight += a[k - 1];
      mass += std::pow(std::abs(z(k)), r);
    }
    best = std::max(best, std::pow(mass, 1.0 / r) / std::pow(weight, 1.0 / p));
  }
  return best;
}

std::vector<double> naive_tails(std::span<const double> diagonal, double p) {
  std::vector<double> out;
  for (Index n = 0; n < diagonal.size(); ++n) {
    double tail = 0.0;
    for (Index k = n; k < diagonal.size(); ++k) tail += std::pow(std::fabs(diagonal[k]), p);
    out.push_back(tail);
  }
  return out;
}

}  // namespace seqspace::verify
