#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seqspace/error.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/random.hpp"
#include "seqspace/verify/oracles.hpp"

using namespace seqspace;

namespace {

TruncatedSequence random_complex(CounterRng& rng, Index n) {
  std::vector<Complex> v(n);
  for (auto& c : v) c = rng.complex_normal();
  return TruncatedSequence(std::move(v));
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("lp norms") {
  CHECK(lp_norm(TruncatedSequence::unit(1, 5), 2.0) == 1.0);
  CHECK(lp_norm(TruncatedSequence::from_real({3, 4}), 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(lp_norm(TruncatedSequence::from_real(std::vector<double>(17, 1.0)), 1.0) == 17.0);
  CHECK(lp_norm(TruncatedSequence::from_real({1, -7, 2}), kInfinity) == 7.0);
  CHECK(lp_norm(TruncatedSequence::zeros(4), 3.0) == 0.0);
}

TEST_CASE("tiny moduli do not underflow") {
  CHECK(pow_abs(0.0, 2.5) == 0.0);
  const double tiny = 1e-310;
  CHECK(pow_abs(tiny, 1.0) == doctest::Approx(tiny));
  CHECK(pow_abs(tiny, 0.5) == doctest::Approx(std::sqrt(tiny)));
}

TEST_CASE("identity weighted norm is the lp norm") {
  CounterRng rng(11);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const auto x = random_complex(rng, 30);
    const auto r = weighted_norm(MatrixDescriptor::identity(), x, p, 40);
    CHECK(rel_diff(r.value, lp_norm(x, p)) <= 1e-13);
    CHECK(r.sound);
  }
}

TEST_CASE("cesaro norm of the first unit vector") {
  const auto r = weighted_norm(MatrixDescriptor::cesaro(1.0), TruncatedSequence::unit(1, 1), 2.0, 10000);
  CHECK(r.value == doctest::Approx(std::numbers::pi / std::sqrt(6.0)).epsilon(1e-4));
  CHECK(r.value < std::numbers::pi / std::sqrt(6.0));
  REQUIRE(r.tail_bound.has_value());
  // Tail of sum 1/n^2 past N lies in (1/(N+1), 1/N).
  CHECK(*r.tail_bound >= 1.0 / 10001.0);
  CHECK(r.value * r.value + 1.0 / 10000.0 >= std::numbers::pi * std::numbers::pi / 6.0);
}

TEST_CASE("cesaro norm by hand") {
  const auto r = weighted_norm(MatrixDescriptor::cesaro(1.0), TruncatedSequence::from_real({1, 1}), 1.0, 4);
  CHECK(r.value == doctest::Approx(19.0 / 6.0).epsilon(1e-15));
  CHECK_FALSE(r.sound);
}

TEST_CASE("weighted norm agrees with the direct double loop") {
  CounterRng rng(3);
  const std::vector<MatrixDescriptor> ms = {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::cesaro(0.4),
                                            MatrixDescriptor::hilbert(), MatrixDescriptor::power_type(1.5, 0.8),
                                            MatrixDescriptor::cesaro_inverse().transposed(),
                                            MatrixDescriptor::remark_counterexample()};
  for (const auto& m : ms) {
    for (double p : {1.0, 2.0, 3.5}) {
      CAPTURE(m.name());
      CAPTURE(p);
      const auto x = random_complex(rng, 20);
      const double fast = weighted_norm(m, x, p, 50).value;
      CHECK(rel_diff(fast, verify::naive_weighted_norm(m, x, p, 50)) <= 1e-12);
      const WeightedNorm cached(m, p, 50, 20);
      CHECK(rel_diff(cached(x), fast) <= 1e-12);
    }
  }
}

TEST_CASE("infinite support needs a lower-triangular matrix") {
  auto x = TruncatedSequence::from_real({1, 2, 3}, false);
  CHECK_NOTHROW(weighted_norm(MatrixDescriptor::cesaro(1.0), x, 2.0, 3));
  try {
    weighted_norm(MatrixDescriptor::hilbert(), x, 2.0, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::truncation_unsound);
  }
}

TEST_CASE("norm axioms hold at truncation") {
  CounterRng rng(5);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::hilbert(),
                        MatrixDescriptor::power_type(1.0, 1.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const double p = 1.0 + 3.0 * rng.uniform();
      const auto x = random_complex(rng, 24);
      const auto y = random_complex(rng, 24);
      const Complex alpha = rng.complex_normal();
      const double nx = weighted_norm(m, x, p, 48).value;
      const double ny = weighted_norm(m, y, p, 48).value;
      CHECK(rel_diff(weighted_norm(m, x.scaled(alpha), p, 48).value, std::abs(alpha) * nx) <= 1e-12);
      CHECK(weighted_norm(m, x + y, p, 48).value <= nx + ny + 1e-9);
    }
  }
  CHECK(weighted_norm(MatrixDescriptor::cesaro(1.0), TruncatedSequence::zeros(8), 2.0, 8).value == 0.0);
}

TEST_CASE("weighted norm is nondecreasing in the truncation") {
  CounterRng rng(8);
  const auto x = random_complex(rng, 16);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::hilbert()}) {
    double previous = 0.0;
    for (Index n = 1; n <= 64; ++n) {
      const double v = weighted_norm(m, x, 2.0, n).value;
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("derived weights for a geometric diagonal") {
  const auto w = derive_weights(MatrixDescriptor::geometric_diagonal(1.0, 0.5), SpaceParams::from_p(1.0), 12);
  CHECK_FALSE(w.has_b());
  CHECK(w.a[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w.a[1] == doctest::Approx(1.0).epsilon(1e-14));
  for (Index n = 3; n <= 12; ++n) CHECK(w.a[n - 1] == doctest::Approx(std::ldexp(1.0, static_cast<int>(n) - 2)).epsilon(1e-12));
  for (Index n = 1; n <= 12; ++n) CHECK(w.A[n - 1] == doctest::Approx(std::ldexp(1.0, static_cast<int>(n) - 1)).epsilon(1e-12));
}

TEST_CASE("derived weight identities") {
  const std::vector<MatrixDescriptor> ms = {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::geometric_diagonal(1.0, 0.7),
                                            MatrixDescriptor::power_type(2.0, 1.0), MatrixDescriptor::inverse_factorial_diagonal()};
  for (const auto& m : ms) {
    for (double p : {1.5, 2.0, 3.0}) {
      CAPTURE(m.name());
      CAPTURE(p);
      const auto params = SpaceParams::from_p(p);
      for (auto mode : {TailMode::best, TailMode::truncated}) {
        const auto w = derive_weights(m, params, 60, mode);
        REQUIRE(w.has_b());
        double bhat = 0.0;
        for (Index n = 1; n <= 60; ++n) {
          CHECK(std::abs(w.A[n - 1] * w.tail[n - 1] - 1.0) <= 1e-10);
          CHECK(rel_diff(w.B[n - 1], std::pow(w.A[n - 1], params.q / p)) <= 1e-10);
          CHECK(w.a[n - 1] >= 0.0);
          CHECK(w.b[n - 1] >= 0.0);
          bhat = std::max(bhat, w.b[n - 1]);
          CHECK(w.b_hat[n - 1] == bhat);
        }
        if (p == 2.0) {
          for (Index n = 1; n <= 60; ++n) CHECK(rel_diff(w.B[n - 1], w.A[n - 1]) <= 1e-12);
        }
        const std::vector<double> diag = [&] {
          std::vector<double> d;
          for (Index n = 1; n <= 60; ++n) d.push_back(std::abs(m.entry(n, n)));
          return d;
        }();
        if (mode == TailMode::truncated) {
          const auto tails = verify::naive_tails(diag, p);
          for (Index n = 1; n <= 60; ++n) CHECK(rel_diff(w.tail[n - 1], tails[n - 1]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("derived weight errors") {
  try {
    derive_weights(MatrixDescriptor::identity(), SpaceParams::from_p(2.0), 8);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::divergence);
  }
  CHECK(SpaceParams::from_p(1.0).q_infinite());
  CHECK(SpaceParams::from_p(3.0).q == doctest::Approx(1.5));
}

TEST_CASE("d norm") {
  const auto geo = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  CHECK(d_norm(geo, TruncatedSequence::unit(1, 4), SpaceParams::from_p(1.0), 16) == doctest::Approx(1.0));

  const auto w = derive_weights(MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), 8);
  const auto x = TruncatedSequence::from_real({1, 3, 2});
  const double expected = std::sqrt(w.a[0] * 9 + w.a[1] * 9 + w.a[2] * 4);
  CHECK(d_norm(w, x) == doctest::Approx(expected).epsilon(1e-14));

  const auto dec = TruncatedSequence::from_real({5, 4, 4, 1, 0.5});
  double s = 0.0;
  for (Index n = 1; n <= 5; ++n) s += w.a[n - 1] * std::norm(dec(n));
  CHECK(d_norm(w, dec) == doctest::Approx(std::sqrt(s)).epsilon(1e-14));

  CHECK_THROWS_AS(d_norm(w, TruncatedSequence::from_real({1, 2}, false)), Error);
}

TEST_CASE("g norm") {
  const auto geo = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  CHECK(g_norm(geo, TruncatedSequence::zeros(5), SpaceParams::from_p(2.0), 16) == 0.0);
  // sum_{k>=1} 4^-k = 1/3, so A_1 = 3 and A is nondecreasing.
  CHECK(g_norm(geo, TruncatedSequence::unit(1, 5), SpaceParams::from_p(2.0), 16) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("d and g norms agree with quadratic oracles") {
  CounterRng rng(21);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::geometric_diagonal(1.0, 0.8)}) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      if (m.diagonal_summability(p) != Summability::summable) continue;
      const auto w = derive_weights(m, SpaceParams::from_p(p), 64);
      for (int t = 0; t < 10; ++t) {
        const auto x = random_complex(rng, 64);
        CHECK(rel_diff(d_norm(w, x), verify::naive_d_norm(w.a, x, p)) <= 1e-12);
        for (double r : {1.0, 2.0, 3.0}) CHECK(rel_diff(g_norm(w, x, r), verify::naive_g_norm(w.a, x, p, r)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("least decreasing majorant") {
  const auto y = least_decreasing_majorant(TruncatedSequence::from_real({1, 3, 2}));
  CHECK(y(1).real() == 3.0);
  CHECK(y(2).real() == 3.0);
  CHECK(y(3).real() == 2.0);

  const auto fixed = TruncatedSequence::from_real({4, -3, 2, 2, 1});
  const auto f = least_decreasing_majorant(fixed);
  for (Index n = 1; n <= 5; ++n) CHECK(f(n).real() == std::abs(fixed(n)));

  CounterRng rng(2);
  const auto x = random_complex(rng, 256);
  const auto m = least_decreasing_majorant(x);
  for (Index n = 1; n <= 256; ++n) {
    double sup = 0.0;
    for (Index k = n; k <= 256; ++k) sup = std::max(sup, std::abs(x(k)));
    CHECK(m(n).real() == doctest::Approx(sup).epsilon(1e-15));
    CHECK(m(n).imag() == 0.0);
  }
}
