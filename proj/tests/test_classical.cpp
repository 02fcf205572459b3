#include "doctest.h"
#include "helpers.hpp"
#include "mahler/classical.hpp"

using namespace mahler;

namespace {

const double kLehmer = 1.17628081826;

}  // namespace

TEST_CASE("mahler_roots examples") {
  CHECK(mahler_roots(ComplexPolynomial{-2.0, 1.0}).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mahler_roots(ComplexPolynomial::monomial(5)).value == 1.0);
  CHECK(std::abs(mahler_roots(lehmer_polynomial().to_complex()).value - 1.176280) < 1e-5);
  CHECK(mahler_roots(ComplexPolynomial{3.0}).value == doctest::Approx(3.0));
  CHECK_THROWS_AS(mahler_roots(ComplexPolynomial{0.0}), ArgumentError);
}

TEST_CASE("mahler_integral examples") {
  CHECK(std::abs(mahler_integral(ComplexPolynomial{-2.0, 1.0}, 512).value - 2.0) < 1e-10);
  CHECK(std::abs(mahler_integral(ComplexPolynomial{0.0, 1.0}, 64).value - 1.0) < 1e-14);
  CHECK_THROWS_AS(mahler_integral(ComplexPolynomial{1.0, 1.0}, 8), ArgumentError);
}

TEST_CASE("mahler_integral on Lehmer's polynomial") {
  // Eight roots of L lie on the circle, so the midpoint rule converges slowly:
  // about 5.5e-4 off at 4096 nodes and within 1e-5 at 2^20 nodes.
  const ComplexPolynomial l = lehmer_polynomial().to_complex();
  const double coarse = mahler_integral(l, 4096).value;
  CHECK(std::abs(coarse - kLehmer) < 1e-3);
  CHECK(std::abs(coarse - kLehmer) > 1e-4);
  CHECK(std::abs(mahler_integral(l, 1 << 20).value - kLehmer) < 1e-5);
}

TEST_CASE("omega examples") {
  CHECK(omega(ComplexPolynomial{-2.0, 1.0}).value == doctest::Approx(2.0));
  const MeasureResult r = omega(ComplexPolynomial{1.0, 1.0, 1.0});
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.params.at("boundary_ambiguous") == 2.0);
  CHECK(std::abs(omega(lehmer_polynomial().to_complex()).value - 1.176280) < 1e-5);
}

TEST_CASE("pierce examples") {
  const PierceSequence two = pierce(IntPolynomial{-2, 1}, 64);
  for (int n = 1; n <= 64; ++n) CHECK(two.values[n - 1] == (BigInt(1) << n) - 1);
  CHECK(std::abs(pierce_growth_check(pierce(IntPolynomial{-2, 1}, 30)) - 2.0) < 1e-6);

  const PierceSequence one = pierce(IntPolynomial{-1, 1}, 10);
  for (const BigInt& v : one.values) CHECK(v == 0);
  for (const auto& r : one.ratios) CHECK_FALSE(r.has_value());

  CHECK_THROWS_AS(pierce(IntPolynomial{1, 2}, 5), ArgumentError);
  CHECK_THROWS_AS(pierce_growth_check(pierce(IntPolynomial{1, 1, 1}, 30)), ArgumentError);
}

TEST_CASE("pierce on Lehmer's polynomial matches floating root products") {
  const IntPolynomial l = lehmer_polynomial();
  const PierceSequence seq = pierce(l, 10);
  const RootSet rs = roots(l.to_complex());
  for (int n = 1; n <= 10; ++n) {
    Complex prod = 1.0;
    for (const Complex& a : rs.roots) prod *= std::pow(a, n) - 1.0;
    const double exact = seq.values[n - 1].convert_to<double>();
    CHECK(std::abs(prod.imag()) < 1e-6 * std::abs(exact) + 1e-9);
    CHECK(std::abs(prod.real() - exact) <= 1e-6 * std::abs(exact));
  }
}

TEST_CASE("pierce growth with and without circle roots") {
  const IntPolynomial q{1, -3, 1};
  CHECK(std::abs(pierce_growth_check(pierce(q, 60)) - omega(q.to_complex()).value) < 1e-6);

  // Eight roots of L lie on the circle: consecutive ratios keep oscillating, while
  // |Delta_n|^(1/n) still settles near Omega(L).
  const PierceSequence seq = pierce(lehmer_polynomial(), 200);
  CHECK(std::abs(pierce_growth_check(pierce(lehmer_polynomial(), 60)) - 1.176280) > 1.0);
  const double root = std::exp(std::log(std::abs(seq.values.back().convert_to<double>())) / 200.0);
  CHECK(std::abs(root - 1.176280) < 2e-2);
}

TEST_CASE("lehmer_search examples") {
  const SearchReport box = lehmer_search(10, 1, 1.3);
  REQUIRE_FALSE(box.candidates.empty());
  CHECK(std::abs(box.candidates.front().measure.value - kLehmer) < 1e-9);
  CHECK(box.candidates.front().measure.value > 1.0);
  for (const auto& c : box.candidates) {
    CHECK(c.poly.is_monic());
    CHECK(c.poly[0] != 0);
    CHECK_FALSE(is_cyclotomic(c.poly));
  }
  CHECK(lehmer_search(1, 1, 2.0).candidates.empty());
  const SearchReport small = lehmer_search(4, 1, 1.5);
  for (const auto& c : small.candidates) CHECK(c.measure.value > 1.0);
  CHECK_THROWS_AS(lehmer_search(13, 1), ArgumentError);
}

TEST_CASE("search refuses oversized boxes") {
  SearchOptions opt;
  opt.cardinality_cap = 10;
  CHECK_THROWS_AS(lehmer_search(4, 1, 1.3, opt), SearchRefusedError);
}

TEST_CASE("engines agree off the circle") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + i % 20;
    const auto p = testing::from_roots(testing::random_roots(rng, d, 2.0, 1e-3), testing::random_point(rng, 0.5, 2.0));
    const double a = mahler_roots(p).value;
    const double b = mahler_integral(p, 4096).value;
    worst = std::max(worst, std::abs(a - b) / a);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("multiplicativity and shift invariance") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const auto p = testing::from_roots(testing::random_roots(rng, 1 + i % 7, 3.0), testing::random_point(rng, 0.5, 2.0));
    const auto q = testing::from_roots(testing::random_roots(rng, 1 + i % 5, 3.0));
    const double mp = mahler_roots(p).value, mq = mahler_roots(q).value;
    CHECK(std::abs(mahler_roots(p * q).value - mp * mq) <= 1e-9 * mp * mq);
    CHECK(std::abs(mahler_roots(ComplexPolynomial::monomial(i % 6 + 1) * p).value - mp) <= 1e-12 * mp);
  }
}

TEST_CASE("Kronecker direction") {
  for (int n = 1; n <= 20; ++n) CHECK(std::abs(mahler_roots(cyclotomic(n).to_complex()).value - 1.0) < 1e-9);
}

TEST_CASE("integer lower bound over a small box") {
  const SearchReport r = lehmer_search(6, 1, 1e6);
  for (const auto& c : r.candidates) CHECK(c.measure.value >= 1.0 - 1e-9);
}
