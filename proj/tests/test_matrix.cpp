#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "seqspace/error.hpp"
#include "seqspace/matrix.hpp"
#include "seqspace/special.hpp"

using namespace seqspace;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// C(j + beta, j) = prod_{i=1..j} (beta + i) / i
Rational binomial_upper(const Rational& beta, long j) {
  Rational r = 1;
  for (long i = 1; i <= j; ++i) r *= (beta + i) / Rational(i);
  return r;
}

// C(n-k+alpha-1, n-k) / C(n+alpha-1, n-1), exactly.
double cesaro_entry_exact(const Rational& alpha, long n, long k) {
  if (k > n) return 0.0;
  return static_cast<double>(binomial_upper(alpha - 1, n - k) / binomial_upper(alpha, n - 1));
}

bool throws_kind(ErrorKind kind, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("catalog entries") {
  CHECK(MatrixDescriptor::cesaro(1.0).entry(3, 2).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(MatrixDescriptor::cesaro(1.0).entry(2, 3) == Complex(0.0));
  CHECK(MatrixDescriptor::hilbert().entry(2, 3).real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(MatrixDescriptor::identity().entry(4, 4) == Complex(1.0));
  CHECK(MatrixDescriptor::identity().entry(4, 3) == Complex(0.0));
}

TEST_CASE("cesaro entries match exact binomial ratios") {
  for (auto [num, den] : {std::pair{1, 2}, {3, 5}, {1, 1}, {3, 2}, {-1, 2}}) {
    const Rational alpha(num, den);
    const auto m = MatrixDescriptor::cesaro(static_cast<double>(alpha));
    for (long n = 1; n <= 25; ++n) {
      for (long k = 1; k <= n; ++k) {
        const double exact = cesaro_entry_exact(alpha, n, k);
        const double got = m.entry(static_cast<Index>(n), static_cast<Index>(k)).real();
        CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  const double c42 = MatrixDescriptor::cesaro(0.5).entry(4, 2).real();
  CHECK(c42 == doctest::Approx(cesaro_entry_exact(Rational(1, 2), 4, 2)).epsilon(1e-14));
}

TEST_CASE("cesaro rejects nonpositive integer orders") {
  CHECK(throws_kind(ErrorKind::parameter, [] { MatrixDescriptor::cesaro(0.0); }));
  CHECK(throws_kind(ErrorKind::parameter, [] { MatrixDescriptor::cesaro(-2.0); }));
  CHECK_NOTHROW(MatrixDescriptor::cesaro(-0.5));
}

TEST_CASE("rows agree with single entries") {
  const std::vector<MatrixDescriptor> ms = {MatrixDescriptor::cesaro(0.7), MatrixDescriptor::hilbert(),
                                            MatrixDescriptor::power_type(2.0, 1.5),
                                            MatrixDescriptor::norlund({1, 2, 3, 4, 5, 6, 7, 8}),
                                            MatrixDescriptor::riesz({1, 0.5, 0.25, 2, 1, 3, 1, 1}),
                                            MatrixDescriptor::hausdorff({1, 0.5, 0.25, 0.125, 0.0625, 0.03, 0.01, 0.005})};
  for (const auto& m : ms) {
    CAPTURE(m.name());
    std::vector<Complex> row(8);
    for (Index n = 1; n <= 8; ++n) {
      m.row(n, 8, row.data());
      for (Index k = 1; k <= 8; ++k) CHECK(std::abs(row[k - 1] - m.entry(n, k)) <= 1e-15);
    }
  }
}

TEST_CASE("cataloged inverses") {
  const auto cinv = MatrixDescriptor::cesaro(1.0).cataloged_inverse();
  REQUIRE(cinv.has_value());
  CHECK(cinv->entry(3, 2).real() == doctest::Approx(-2.0));
  CHECK(cinv->entry(3, 3).real() == doctest::Approx(3.0));

  const auto d = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  CHECK(inverse_entry(d, 5, 5).real() == doctest::Approx(32.0));

  const auto rinv = MatrixDescriptor::remark_counterexample().cataloged_inverse();
  REQUIRE(rinv.has_value());
  CHECK(rinv->entry(2, 4).real() == doctest::Approx(1.0));
  CHECK(rinv->entry(2, 3).real() == doctest::Approx(-1.0));
  CHECK(rinv->entry(3, 2) == Complex(0.0));

  CHECK(throws_kind(ErrorKind::unsupported, [] { inverse_entry(MatrixDescriptor::hilbert(), 1, 1); }));
}

TEST_CASE("inverse products give the identity on a finite section") {
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::geometric_diagonal(2.0, 0.5)}) {
    const auto inv = *m.cataloged_inverse();
    for (Index n = 1; n <= 12; ++n) {
      for (Index k = 1; k <= 12; ++k) {
        Complex s = 0.0;
        for (Index j = 1; j <= 12; ++j) s += m.entry(n, j) * inv.entry(j, k);
        CHECK(std::abs(s - Complex(n == k ? 1.0 : 0.0)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("apply cesaro inverse") {
  const auto u = TruncatedSequence::from_real({1.5, -0.5});
  const auto v = apply(MatrixDescriptor::cesaro_inverse(), u, 3);
  CHECK(v(1).real() == doctest::Approx(1.5));
  CHECK(v(2).real() == doctest::Approx(-1.5 + 2 * -0.5));
  CHECK(v(3).real() == doctest::Approx(-2 * -0.5));
}

TEST_CASE("forward substitution") {
  const auto x = solve_lower_triangular(MatrixDescriptor::cesaro(1.0), TruncatedSequence::unit(1, 6), 6);
  CHECK(x(1).real() == doctest::Approx(1.0));
  CHECK(x(2).real() == doctest::Approx(-1.0));
  for (Index n = 3; n <= 6; ++n) CHECK(std::abs(x(n)) <= 1e-15);

  const auto m = MatrixDescriptor::power_type(1.0, 0.5);
  const auto target = TruncatedSequence::from_real({0.3, -1.0, 2.0, 0.5, 0.0, 1.0});
  const auto back = apply(m, solve_lower_triangular(m, target, 6), 6);
  for (Index n = 1; n <= 6; ++n) CHECK(std::abs(back(n) - target(n)) <= 1e-12);

  CHECK(throws_kind(ErrorKind::precondition, [] {
    solve_lower_triangular(MatrixDescriptor::hilbert(), TruncatedSequence::unit(1, 3), 3);
  }));
}

TEST_CASE("vanishing column detection") {
  const auto m = MatrixDescriptor::from_entries({{1, 1, 1.0}, {2, 1, 0.5}, {3, 3, 1.0}, {4, 4, 1.0}});
  const auto check = check_no_vanishing_columns(m, 4);
  CHECK_FALSE(check.ok);
  REQUIRE(check.witness.has_value());
  CHECK(*check.witness == 2);
  CHECK(check_no_vanishing_columns(MatrixDescriptor::cesaro(1.0), 64).ok);
  CHECK(check_no_vanishing_columns(MatrixDescriptor::hilbert(), 64).ok);
}

TEST_CASE("row monotonicity") {
  const auto m = MatrixDescriptor::from_entries({{1, 1, 1.0}, {2, 1, 1.0}, {2, 2, 0.5}, {3, 1, 1.0},
                                                 {3, 2, 0.25}, {3, 3, 0.5}});
  const auto check = check_row_monotone(m, 3);
  CHECK_FALSE(check.ok);
  REQUIRE(check.witness.has_value());
  CHECK(check.witness->first == 3);
  CHECK(check.witness->second == 2);

  CHECK(check_row_monotone(MatrixDescriptor::hilbert(), 64).ok);
  CHECK(check_row_monotone(MatrixDescriptor::cesaro(1.0), 64).ok);
  CHECK(check_row_monotone(MatrixDescriptor::cesaro(2.5), 64).ok);
  CHECK(check_row_monotone(MatrixDescriptor::power_type(1.0, 1.0), 64).ok);

  // For 0 < alpha < 1 each step k -> k+1 multiplies the row by
  // (n-k)/(n+alpha-1-k) > 1, so the rows increase.
  const auto half = check_row_monotone(MatrixDescriptor::cesaro(0.5), 64);
  CHECK_FALSE(half.ok);
  REQUIRE(half.witness.has_value());
  CHECK(half.witness->first == 2);
  CHECK(half.witness->second == 1);
  CHECK_FALSE(MatrixDescriptor::cesaro(0.5).flags().row_monotone);
}

TEST_CASE("row monotone flags agree with the finite check") {
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::cesaro(0.3), MatrixDescriptor::cesaro(3.0),
                        MatrixDescriptor::power_type(1.0, 2.0), MatrixDescriptor::identity(),
                        MatrixDescriptor::cesaro_inverse()}) {
    CAPTURE(m.name());
    if (m.flags().row_monotone) CHECK(check_row_monotone(m, 128).ok);
    else CHECK_FALSE(check_row_monotone(m, 128).ok);
  }
}

TEST_CASE("diagonal tails") {
  const auto d = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  const auto tail = diagonal_lp_tail(d, 1.0, 3, 64);
  CHECK(tail.exact);
  CHECK(tail.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(throws_kind(ErrorKind::divergence, [] { diagonal_lp_tail(MatrixDescriptor::identity(), 2.0, 1, 64); }));
  CHECK(throws_kind(ErrorKind::divergence, [] { diagonal_lp_tail(MatrixDescriptor::cesaro(1.0), 1.0, 1, 64); }));

  const auto c = diagonal_lp_tail(MatrixDescriptor::cesaro(1.0), 2.0, 1, 64);
  CHECK(c.exact);
  CHECK(c.value == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
  const auto c5 = diagonal_lp_tail(MatrixDescriptor::cesaro(1.0), 2.0, 5, 64);
  double head = 0.0;
  for (int k = 1; k < 5; ++k) head += 1.0 / (k * k);
  CHECK(c5.value == doctest::Approx(M_PI * M_PI / 6.0 - head).epsilon(1e-13));
}

TEST_CASE("summability classification") {
  CHECK(MatrixDescriptor::cesaro(1.0).diagonal_summability(2.0) == Summability::summable);
  CHECK(MatrixDescriptor::cesaro(1.0).diagonal_summability(1.0) == Summability::divergent);
  CHECK(MatrixDescriptor::identity().diagonal_summability(3.0) == Summability::divergent);
  CHECK(MatrixDescriptor::geometric_diagonal(1.0, 0.5).diagonal_summability(1.0) == Summability::summable);
}

TEST_CASE("growth condition") {
  CHECK(check_growth_condition(MatrixDescriptor::cesaro(1.0), 2.0, 512).bounded);
  CHECK(check_growth_condition(MatrixDescriptor::power_type(1.0, 1.0), 2.0, 512).bounded);

  const auto m = MatrixDescriptor::custom(
      "first-column-ones",
      [](Index n, Index k) -> Complex {
        if (k == 1) return n == 1 ? 0.5 : 1.0;
        if (k == n) return std::ldexp(1.0, -static_cast<int>(n));
        return 0.0;
      },
      MatrixFlags{true, false, true});
  const auto report = check_growth_condition(m, 2.0, 512);
  CHECK_FALSE(report.bounded);
  CHECK(report.slope > 0.5);
}

TEST_CASE("transpose and bandwidths") {
  const auto t = MatrixDescriptor::cesaro(1.0).transposed();
  CHECK(t.entry(2, 3).real() == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(t.lower_triangular());
  CHECK(MatrixDescriptor::cesaro_inverse().lower_bandwidth() == Index{1});
  CHECK(MatrixDescriptor::remark_counterexample().upper_bandwidth() == Index{1});
}

TEST_CASE("index errors") {
  CHECK(throws_kind(ErrorKind::index, [] { MatrixDescriptor::identity().entry(0, 1); }));
  const auto n = MatrixDescriptor::norlund({1, 2, 3});
  CHECK(throws_kind(ErrorKind::index, [&] { n.entry(4, 1); }));
}

TEST_CASE("zeta sums") {
  CHECK(riemann_zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
  CHECK(hurwitz_zeta(4.0, 1.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-14));
  CHECK(hurwitz_zeta(2.0, 3.0) == doctest::Approx(M_PI * M_PI / 6.0 - 1.25).epsilon(1e-14));
}
