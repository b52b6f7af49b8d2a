#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seqspace/error.hpp"
#include "seqspace/factorization.hpp"
#include "seqspace/verify/oracles.hpp"

using namespace seqspace;

namespace {

TruncatedSequence random_complex(CounterRng& rng, Index n) {
  std::vector<Complex> v(n);
  for (auto& c : v) c = rng.complex_normal();
  return TruncatedSequence(std::move(v));
}

// Random sparse nonnegative data with exact ties and zero runs.
TruncatedSequence random_sparse(CounterRng& rng, Index n) {
  std::vector<double> v(n);
  for (auto& c : v) {
    const auto roll = rng.below(4);
    c = roll == 0 ? 0.0 : roll == 1 ? 1.0 : rng.uniform();
  }
  return TruncatedSequence::from_real(v);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::internal;
}

double norm_named(const FactorizationCertificate& cert, const std::string& name) {
  for (const auto& [n, v] : cert.norms) {
    if (n == name) return v;
  }
  FAIL("missing norm " << name);
  return 0.0;
}

void check_certificate(const FactorizationCertificate& cert) {
  for (const auto& c : cert.checks) {
    CAPTURE(c.name);
    CAPTURE(c.lhs);
    CAPTURE(c.rhs);
    CHECK(c.pass);
    CHECK(c.slack >= 0.0);
  }
}

}  // namespace

TEST_CASE("summation by parts") {
  const std::vector<double> u = {0, 2}, v = {1, 1};
  auto r = summation_by_parts_check(u, v, std::vector<double>{1, 1}, 2);
  CHECK(r.hypothesis_ok);
  CHECK(r.conclusion_ok);
  r = summation_by_parts_check(u, v, std::vector<double>{1, 0.5}, 2);
  CHECK(r.hypothesis_ok);
  CHECK(r.conclusion_ok);
  r = summation_by_parts_check(v, v, std::vector<double>{3, 2, 1}, 2);
  CHECK(r.hypothesis_ok);
  CHECK(r.conclusion_ok);
  r = summation_by_parts_check(v, u, std::vector<double>{1, 1}, 2);
  CHECK_FALSE(r.hypothesis_ok);
  CHECK(kind_of([&] { summation_by_parts_check(std::vector<double>{-1, 0}, v, v, 2); }) == ErrorKind::domain);
}

TEST_CASE("summation by parts never fails under its hypothesis") {
  CounterRng rng(99);
  int tested = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Index n = 1 + rng.below(12);
    std::vector<double> u(n), v(n), w(n);
    double su = 0.0, sv = 0.0;
    for (Index k = 0; k < n; ++k) {
      v[k] = rng.uniform();
      sv += v[k];
      u[k] = rng.uniform() * (sv - su);
      su += u[k];
    }
    double level = 1.0 + rng.uniform();
    for (Index k = 0; k < n; ++k) w[k] = level *= rng.uniform();
    const auto r = summation_by_parts_check(u, v, w, n);
    if (!r.hypothesis_ok) continue;
    ++tested;
    CHECK(r.conclusion_ok);
  }
  CHECK(tested > 9000);
}

TEST_CASE("partition examples") {
  const std::vector<double> ones(8, 1.0);
  const auto p1 = bennett_partition(TruncatedSequence::from_real({1, 1, 0.1}), ones, 1.0, 8);
  CHECK(p1.breakpoints == std::vector<Index>{2, 3});
  CHECK(p1.final_block_infinite);

  const auto p2 = bennett_partition(TruncatedSequence::unit(1, 8), ones, 1.0, 8);
  CHECK(p2.breakpoints == std::vector<Index>{1});
  CHECK(p2.final_block_infinite);

  CHECK(kind_of([] {
          bennett_partition(TruncatedSequence::unit(1, 2), std::vector<double>{1, 0}, 1.0, 2);
        }) == ErrorKind::domain);
}

TEST_CASE("partition matches the greedy quadratic scan") {
  CounterRng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + rng.below(128);
    const double p = trial % 3 == 0 ? 1.0 : 1.0 + 2.0 * rng.uniform();
    const auto x = trial % 2 == 0 ? random_sparse(rng, n) : random_complex(rng, n);
    std::vector<double> a(n), mass(n);
    for (Index k = 0; k < n; ++k) {
      a[k] = trial % 4 == 0 ? 1.0 : 0.1 + rng.uniform();
      mass[k] = std::pow(std::abs(x(k + 1)), p);
    }
    const auto part = bennett_partition(x, a, p, n);
    CAPTURE(trial);
    CHECK(part.breakpoints == verify::greedy_breakpoints(mass, a));
    const auto check = check_partition(x, a, p, part);
    CHECK(check.ok);
    CHECK(check.prefix_slack >= -1e-10);
    const auto ratios = block_ratios(x, a, p, part);
    for (std::size_t b = 1; b < ratios.size(); ++b) CHECK(ratios[b] < ratios[b - 1]);
  }
}

TEST_CASE("lp factorization of a unit vector") {
  const auto geo = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  const auto cert = factor_lp(TruncatedSequence::unit(1, 4), geo, SpaceParams::from_p(1.0), 16);
  REQUIRE(cert.partition.has_value());
  CHECK(cert.partition->breakpoints == std::vector<Index>{1});
  CHECK(cert.y(1).real() == doctest::Approx(1.0));
  CHECK(cert.z(1).real() == doctest::Approx(1.0));
  CHECK(norm_named(cert, "d_norm(y)") == doctest::Approx(1.0));
  check_certificate(cert);
}

TEST_CASE("lp factorization certificates on random data") {
  CounterRng rng(1);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::geometric_diagonal(1.0, 0.5)}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const auto w = derive_weights(m, SpaceParams::from_p(p), 48);
      for (int i = 0; i < 200; ++i) {
        const auto x = random_complex(rng, 1 + rng.below(48));
        const auto cert = factor_lp(x, w);
        check_certificate(cert);
        // y is constant on blocks and nonincreasing across them.
        for (auto [lo, hi] : cert.partition->finite_blocks()) {
          for (Index k = lo + 1; k <= hi; ++k) CHECK(cert.y(k) == cert.y(lo));
        }
        for (Index k = 1; k < x.size(); ++k) CHECK(cert.y(k + 1).real() <= cert.y(k).real());
      }
    }
  }
}

TEST_CASE("lp factorization scales with x") {
  CounterRng rng(4);
  const auto w = derive_weights(MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), 32);
  const auto x = random_complex(rng, 32);
  const Complex c(-2.0, 1.5);
  const auto base = factor_lp(x, w);
  const auto scaled = factor_lp(x.scaled(c), w);
  CHECK(base.partition->breakpoints == scaled.partition->breakpoints);
  for (Index k = 1; k <= 32; ++k) {
    CHECK(std::abs(scaled.y(k) - std::abs(c) * base.y(k)) <= 1e-12 * std::abs(c * base.y(k)));
    CHECK(std::abs(scaled.z(k) - c / std::abs(c) * base.z(k)) <= 1e-12 * std::abs(base.z(k)) + 1e-300);
  }
}

TEST_CASE("lp factorization of zero is rejected") {
  CHECK(kind_of([] {
          factor_lp(TruncatedSequence::zeros(4), MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), 8);
        }) == ErrorKind::degenerate_input);
}

TEST_CASE("lpM factorization of the first unit vector under cesaro") {
  const Index N = 4096;
  const auto cert = factor_lpM(TruncatedSequence::unit(1, 1), MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), N);
  check_certificate(cert);
  // b_1 = sum_{k<=N} k^-2, finite section of zeta(2).
  double zeta_section = 0.0;
  for (Index k = N; k >= 1; --k) zeta_section += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  CHECK(cert.b[0] == doctest::Approx(zeta_section).epsilon(1e-13));
  CHECK(cert.b[0] == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-3));
  CHECK(cert.y(1).real() == doctest::Approx(std::sqrt(zeta_section)).epsilon(1e-13));
  CHECK(cert.z(1).real() == doctest::Approx(1.0 / std::sqrt(zeta_section)).epsilon(1e-13));
  CHECK(norm_named(cert, "lp_norm(y)") ==
        doctest::Approx(weighted_norm(MatrixDescriptor::cesaro(1.0), TruncatedSequence::unit(1, 1), 2.0, N).value)
            .epsilon(1e-12));
  REQUIRE(cert.tail_bound.has_value());
  CHECK(*cert.tail_bound <= 1.0 / static_cast<double>(N));
}

TEST_CASE("lpM factorization with p = 1") {
  CHECK(kind_of([] {
          factor_lpM(TruncatedSequence::unit(1, 1), MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(1.0), 64);
        }) == ErrorKind::precondition);
  // A diagonal matrix has |m(n,1)| = 0 < |m(n,n)|, so only the ungated
  // construction applies.
  const auto geo = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  CHECK(kind_of([&] {
          factor_lpM(TruncatedSequence::unit(1, 1), geo, SpaceParams::from_p(1.0), 60);
        }) == ErrorKind::precondition);
  const auto cert = factor_lpM_construction(TruncatedSequence::unit(1, 1), geo, SpaceParams::from_p(1.0), 60);
  for (const auto& c : cert.checks) {
    CAPTURE(c.name);
    // ||e_1||_{M,1} = |m(1,1)| = 1/2 while ||y||_1 = 1: the norm bound needs the hypotheses.
    if (c.name == "||y||_p <= ||x||_{M,p}") CHECK_FALSE(c.pass);
    else CHECK(c.pass);
  }
  CHECK(cert.b[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.z(1).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.y(1).real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("lpM factorization gate") {
  const auto params = SpaceParams::from_p(2.0);
  const auto x = TruncatedSequence::unit(1, 1);
  CHECK(kind_of([&] { factor_lpM(x, MatrixDescriptor::hilbert(), params, 32); }) == ErrorKind::precondition);
  CHECK(kind_of([&] { factor_lpM(x, MatrixDescriptor::cesaro(0.6), params, 32); }) == ErrorKind::precondition);
  CHECK(kind_of([&] { factor_lpM(x, MatrixDescriptor::identity(), params, 32); }) == ErrorKind::precondition);
}

TEST_CASE("lpM factorization of zero") {
  const auto cert = factor_lpM(TruncatedSequence::zeros(8), MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), 32);
  check_certificate(cert);
  for (Index k = 1; k <= 8; ++k) {
    CHECK(cert.y(k) == Complex(0.0));
    CHECK(cert.z(k) == Complex(0.0));
  }
}

TEST_CASE("lpM certificates on random data") {
  CounterRng rng(6);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::power_type(1.0, 1.0),
                        MatrixDescriptor::cesaro(2.0)}) {
    for (double p : {1.5, 2.0, 3.0}) {
      for (int i = 0; i < 40; ++i) {
        auto x = random_complex(rng, 1 + rng.below(40));
        if (i % 5 == 0) x.at(1) = 0.0;
        const auto cert = factor_lpM(x, m, SpaceParams::from_p(p), 64);
        CAPTURE(m.name());
        CAPTURE(p);
        check_certificate(cert);
        for (Index k = 1; k <= x.size(); ++k) {
          if (x(k) == Complex(0.0)) {
            CHECK(cert.y(k) == Complex(0.0));
            CHECK(cert.z(k) == Complex(0.0));
          }
        }
      }
    }
  }
}

TEST_CASE("psi functional") {
  const auto params = SpaceParams::from_p(2.0);
  Partition single;
  single.breakpoints = {1};
  single.final_block_infinite = true;
  single.truncation = 4;
  const std::vector<double> ones(4, 1.0);
  CHECK(psi_functional(TruncatedSequence::from_real({-2.5}), ones, params, single) == doctest::Approx(2.5));
  CHECK(psi_functional(TruncatedSequence::unit(1, 4), ones, params, single) == doctest::Approx(1.0));
  CHECK(kind_of([&] {
          psi_functional(TruncatedSequence::unit(1, 4), ones, SpaceParams::from_p(1.0), single);
        }) == ErrorKind::unsupported);
}

TEST_CASE("dual factorization") {
  CounterRng rng(12);
  for (const auto& m : {MatrixDescriptor::cesaro(1.0), MatrixDescriptor::geometric_diagonal(1.0, 0.6)}) {
    for (double p : {1.5, 2.0, 4.0}) {
      const auto params = SpaceParams::from_p(p);
      for (int i = 0; i < 50; ++i) {
        const auto x = i % 2 ? random_complex(rng, 32) : random_sparse(rng, 32);
        if (x.is_zero()) continue;
        const auto cert = dual_factor(x, m, params, 48);
        check_certificate(cert);
        const auto w = derive_weights(m, params, 48);
        const double psi = psi_functional(x, w.a, params, *cert.partition);
        CHECK(lp_norm(cert.y, params.q) == doctest::Approx(psi).epsilon(1e-9));

        const double c = 3.0;
        const auto scaled = dual_factor(x.scaled(c), m, params, 48);
        CHECK(psi_functional(x.scaled(c), w.a, params, *scaled.partition) == doctest::Approx(c * psi).epsilon(1e-12));
        for (Index k = 1; k <= 32; ++k) {
          CHECK(std::abs(scaled.z(k) - cert.z(k)) <= 1e-12 * (1.0 + std::abs(cert.z(k))));
          CHECK(std::abs(scaled.y(k) - c * cert.y(k)) <= 1e-12 * (1.0 + std::abs(c * cert.y(k))));
        }
      }
    }
  }
  CHECK(kind_of([] {
          dual_factor(TruncatedSequence::zeros(3), MatrixDescriptor::cesaro(1.0), SpaceParams::from_p(2.0), 8);
        }) == ErrorKind::degenerate_input);
}

TEST_CASE("w sequence") {
  const auto w2 = w_sequence(2.0, 100);
  CHECK(w2.w[0] == 1.0);
  CHECK(w2.w[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w2.w[2] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(w2.min_margin > 1.0);
  // k = 1, p = q = 2: w_1 = 1 < (1 * 2)^2 (w_1 - w_2) = 2.
  CHECK(w2.w[0] < 4.0 * (w2.w[0] - w2.w[1]));
  CHECK(4.0 * (w2.w[0] - w2.w[1]) == doctest::Approx(2.0));

  for (auto [num, den] : {std::pair{2L, 1L}, {3L, 2L}, {5L, 4L}, {3L, 1L}, {7L, 2L}}) {
    const double p = static_cast<double>(num) / static_cast<double>(den);
    const auto ws = w_sequence(p, 30);
    const auto exact = verify::exact_w_terms(num, den, 30);
    for (Index k = 1; k <= 30; ++k) {
      CHECK(ws.w[k - 1] == doctest::Approx(exact[k - 1]).epsilon(1e-12));
      CHECK(ws.w[k - 1] == doctest::Approx(verify::exact_w_binomial(num, den, k)).epsilon(1e-12));
      CHECK(ws.w[k - 1] > 0.0);
      if (k > 1) CHECK(ws.w[k - 1] < ws.w[k - 2]);
    }
  }
  CHECK(kind_of([] { w_sequence(1.0, 10); }) == ErrorKind::domain);
}

TEST_CASE("infimum gap") {
  const auto geo = MatrixDescriptor::geometric_diagonal(1.0, 0.5);
  const auto params = SpaceParams::from_p(2.0);
  const auto e1 = infimum_gap(TruncatedSequence::unit(1, 1), geo, params, 16, 50, CounterRng(3));
  CHECK(e1.constructed_product == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(e1.min_random_product.has_value());
  CHECK(*e1.min_random_product >= 1.0 - 1e-9);

  const auto none = infimum_gap(TruncatedSequence::unit(1, 1), geo, params, 16, 0, CounterRng(3));
  CHECK_FALSE(none.min_random_product.has_value());

  CounterRng rng(30);
  const auto x = random_complex(rng, 24);
  const auto gap = infimum_gap(x, geo, params, 32, 100, CounterRng(31));
  for (const auto& c : gap.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(gap.constructed_product >= gap.lp_norm * (1.0 - 1e-9));
}
