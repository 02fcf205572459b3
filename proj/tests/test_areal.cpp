#include "doctest.h"
#include "helpers.hpp"
#include "mahler/areal.hpp"
#include "mahler/operator.hpp"

using namespace mahler;

namespace {

const double kEmHalf = std::exp(-0.5);

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (const int n : {1, 2, 5, 16, 40}) {
    const GaussLegendre& g = gauss_legendre(n);
    REQUIRE(static_cast<int>(g.nodes.size()) == n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      const double want = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - want) < 1e-13);
    }
  }
}

TEST_CASE("areal_mahler_closed examples") {
  CHECK(areal_mahler_closed(ComplexPolynomial{1.0}).value == 1.0);
  CHECK(areal_mahler_closed(ComplexPolynomial{0.0, 1.0}).value == doctest::Approx(kEmHalf).epsilon(1e-14));
  CHECK(areal_mahler_closed(ComplexPolynomial{-2.0, 1.0}).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(areal_mahler_closed(ComplexPolynomial{0.0}), ArgumentError);
}

TEST_CASE("areal_mahler_quadrature examples") {
  CHECK(areal_mahler_quadrature(ComplexPolynomial{1.0}).value == 1.0);
  const MeasureResult z = areal_mahler_quadrature(ComplexPolynomial{0.0, 1.0}, 128, 256);
  CHECK(std::abs(z.value - kEmHalf) < 1e-6);
  CHECK(z.method == Method::QuadratureOracle);
  CHECK(std::abs(areal_mahler_quadrature(ComplexPolynomial{-2.0, 1.0}).value - 2.0) < 1e-9);
  CHECK_THROWS_AS(areal_mahler_quadrature(ComplexPolynomial{1.0, 1.0}, 8, 64), ArgumentError);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const auto p = testing::from_roots(testing::random_roots(rng, 6, 3.0), testing::random_point(rng, 0.5, 2.0));
    const double closed = areal_mahler_closed(p).value;
    CHECK(std::abs(areal_mahler_quadrature(p).value - closed) <= 1e-6 * closed);
  }
}

TEST_CASE("weighted_areal examples") {
  const RadialWeight one = RadialWeight::constant_one();
  CHECK(std::abs(weighted_areal(ComplexPolynomial{0.0, 1.0}, one).value - kEmHalf) < 1e-9);
  CHECK(weighted_areal(ComplexPolynomial{1.0}, one).value == 1.0);

  std::vector<double> r, rho;
  for (int k = 0; k <= 32; ++k) {
    r.push_back(k / 32.0);
    rho.push_back(2.0 * (1.0 - r.back() * r.back()));
  }
  const RadialWeight w = RadialWeight::sampled(r, rho);
  const MeasureResult res = weighted_areal(ComplexPolynomial{1.0}, w);
  CHECK(res.value == 1.0);
  CHECK(res.params.at("normalization_declared") == 0.0);
  CHECK(std::abs(w.total_mass() - 1.0) < 1e-3);
  CHECK(w.at_radius(0.0) == 2.0);
  CHECK(w.at_radius(1.0) == 0.0);
}

TEST_CASE("radial weight validation") {
  CHECK_THROWS_AS(RadialWeight::sampled({0.0, 0.5, 0.5}, {1.0, 1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(RadialWeight::sampled({0.0, 1.5}, {1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(RadialWeight::sampled({0.0, 1.0}, {1.0, -1.0}), ArgumentError);
  CHECK_THROWS_AS(RadialWeight::sampled({0.0, 1.0}, {1.0}), ArgumentError);
}

TEST_CASE("multiplicativity of the areal measure") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    const auto p = testing::from_roots(testing::random_roots(rng, 1 + i % 6, 3.0), testing::random_point(rng, 0.5, 2.0));
    const auto q = testing::from_roots(testing::random_roots(rng, 1 + i % 4, 3.0));
    const double a = areal_mahler_closed(p).value, b = areal_mahler_closed(q).value;
    CHECK(std::abs(areal_mahler_closed(p * q).value - a * b) <= 1e-9 * a * b);
  }
}

TEST_CASE("closed form is continuous across the circle") {
  for (const double t : {0.0, 0.7, 2.1, 3.0}) {
    const Complex on = std::polar(1.0, t);
    const double at = areal_mahler_closed(ComplexPolynomial::from_roots(std::vector<Complex>{on})).value;
    CHECK(at == doctest::Approx(1.0).epsilon(1e-12));
    for (const double eps : {1e-6, 1e-9}) {
      const double in = areal_mahler_closed(ComplexPolynomial::from_roots(std::vector<Complex>{on * (1 - eps)})).value;
      const double out = areal_mahler_closed(ComplexPolynomial::from_roots(std::vector<Complex>{on * (1 + eps)})).value;
      CHECK(std::abs(in - at) < 2 * eps);
      CHECK(std::abs(out - at) < 2 * eps);
    }
  }
}

TEST_CASE("integer polynomials have areal measure at least one") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> coef(-3, 3), degree(1, 10);
  for (int i = 0; i < 200; ++i) {
    const int d = degree(rng);
    ComplexPolynomial::Coeffs c(d + 1);
    for (int k = 0; k <= d; ++k) c[k] = coef(rng);
    if (c[0] == Complex(0.0)) c[0] = 1.0;
    if (c[d] == Complex(0.0)) c[d] = -1.0;
    CHECK(areal_mahler_closed(ComplexPolynomial(c)).value >= 1.0 - 1e-9);
  }
}

TEST_CASE("bergman_op_mahler examples") {
  for (int n = 0; n <= 20; ++n)
    CHECK(std::abs(bergman_op_mahler(ComplexPolynomial::monomial(n), 512, 200).value - 1.0 / std::sqrt(n + 1.0)) <
          1e-10);
  CHECK(bergman_op_mahler(ComplexPolynomial{1.0}, 64, 16).value == doctest::Approx(1.0).epsilon(1e-14));
  const double v = bergman_op_mahler(ComplexPolynomial{1.0, 1.0}, 512, 200).value;
  CHECK(v >= areal_mahler_closed(ComplexPolynomial{1.0, 1.0}).value);
  CHECK(v <= 1.0 + 1e-4);
  CHECK_THROWS_AS(bergman_op_mahler(ComplexPolynomial{1.0, 1.0}, 100, 60), ArgumentError);
}

TEST_CASE("bergman kernel formula") {
  CHECK(bergman_kernel_mahler(ComplexPolynomial{1.0}).value == doctest::Approx(1.0).epsilon(1e-15));
  // Zeros outside the closed disk leave only the kernel at 0.
  CHECK(bergman_kernel_mahler(ComplexPolynomial{-2.0, 1.0}).value == doctest::Approx(2.0).epsilon(1e-14));
  // One zero a inside: (G^-1)_00 = 1 / (1 - (1 - a^2)^2).
  const double a = 0.5;
  const double want = a * std::sqrt(1.0 / (1.0 - std::pow(1.0 - a * a, 2)));
  CHECK(bergman_kernel_mahler(ComplexPolynomial{-a, 1.0}).value == doctest::Approx(want).epsilon(1e-13));

  std::mt19937_64 rng(53);
  const FiniteOperator t = WeightedShiftSpec::bergman(1024).materialize();
  for (int i = 0; i < 10; ++i) {
    const auto p = testing::from_roots(testing::random_roots(rng, 1 + i % 6, 2.0, 0.2), testing::random_point(rng, 0.5, 2.0));
    const double exact = bergman_kernel_mahler(p).value;
    const double krylov = op_mahler_on_vector(t, VectorH::unit(1024, 0), p, 400).value;
    CHECK(std::abs(krylov - exact) <= 1e-9 * exact);
  }
  CHECK_THROWS_AS(bergman_kernel_mahler(ComplexPolynomial{0.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(bergman_kernel_mahler(ComplexPolynomial::from_roots(std::vector<Complex>{0.5, 0.5})), ArgumentError);
}

TEST_CASE("chain_check examples") {
  for (int n = 0; n <= 6; ++n) {
    const ChainReport r = chain_check(ComplexPolynomial::monomial(n), 256, 100);
    CHECK(r.chain_ok);
    CHECK(r.areal.value == doctest::Approx(std::exp(-n / 2.0)).epsilon(1e-12));
    CHECK(r.bergman_op.value == doctest::Approx(1.0 / std::sqrt(n + 1.0)).epsilon(1e-10));
    CHECK(r.classical.value == doctest::Approx(1.0));
  }
  const ChainReport one = chain_check(ComplexPolynomial{1.0}, 64, 16);
  CHECK(one.chain_ok);
  CHECK(std::abs(one.lower_slack) < 1e-12);
  CHECK(std::abs(one.upper_slack) < 1e-12);

  std::mt19937_64 rng(47);
  for (int i = 0; i < 20; ++i) {
    const auto p = testing::from_roots(testing::random_roots(rng, 1 + i % 10, 2.5, 0.05));
    const ChainReport r = chain_check(p, 512, 200);
    CHECK(r.chain_ok);
    CHECK(r.lower_slack >= -1e-6);
    CHECK(r.upper_slack >= -1e-6);
  }
}

TEST_CASE("limit table on a short range") {
  const std::vector<LimitRow> rows = lehmer_limit_table(3, 20, 256, 60, 2);
  REQUIRE(rows.size() == 18);
  for (const LimitRow& row : rows) {
    CHECK(row.bergman_op >= 1.0 - 1e-9);
    CHECK(row.areal >= 1.0 - 1e-9);
    CHECK(row.areal <= row.bergman_exact + 1e-9);
    CHECK(row.bergman_op >= row.bergman_exact - 1e-9);
  }
  CHECK(rows.front().n == 3);
  CHECK_THROWS_AS(lehmer_limit_table(3, 200, 256, 120), ArgumentError);
  CHECK_THROWS_AS(lehmer_limit_table(2, 10), ArgumentError);
}
