#pragma once

// Classical Mahler measure (root product and circle quadrature), Lehmer's
// Omega, exact Pierce sequences and a bounded exhaustive Lehmer search.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mahler/poly.hpp"

namespace mahler {

enum class Method { RootProduct, CircleQuadrature, KrylovTruncation, ClosedForm, QuadratureOracle };

std::string to_string(Method method);

/// A measure value tagged with how it was obtained.
struct MeasureResult {
  double value = 0.0;
  Method method = Method::RootProduct;
  std::map<std::string, double> params;
  double error_estimate = 0.0;
};

/// |a_d| * prod max(1, |a_i|).
MeasureResult mahler_roots(const ComplexPolynomial& p, double tol = 1e-12);

/// exp of the midpoint-rule average of log|p(e^{it})| over `nodes` equispaced angles.
/// The error estimate is the change from halving the node count.
MeasureResult mahler_integral(const ComplexPolynomial& p, int nodes = 4096);

/// Product of the moduli of the roots strictly outside the unit circle.
/// Roots within 1e-9 of the circle are counted in params["boundary_ambiguous"].
MeasureResult omega(const ComplexPolynomial& p);

/// Delta_n(p) = prod (a_i^n - 1) for a monic integer polynomial, exact.
struct PierceSequence {
  IntPolynomial poly;
  std::vector<BigInt> values;                 // values[n-1] = Delta_n
  std::vector<std::optional<double>> ratios;  // ratios[n-1] = |Delta_{n+1} / Delta_n|, empty if Delta_n = 0
};

PierceSequence pierce(const IntPolynomial& p, int n_max);

/// The last ratio of a Pierce sequence, which tends to Omega(p) when no root is on the circle.
/// Throws when some Delta_n vanishes; roots on the circle are not rejected.
double pierce_growth_check(const PierceSequence& seq);

struct SearchCandidate {
  IntPolynomial poly;
  MeasureResult measure;
};

struct SearchOptions {
  int jobs = 1;
  double cardinality_cap = 5e7;
};

struct SearchReport {
  int degree_max = 0;
  int height_max = 0;
  double threshold = 0.0;
  std::vector<SearchCandidate> candidates;  // ascending by measure
  std::uint64_t enumerated = 0;
  std::uint64_t skipped_zero_constant = 0;
  std::uint64_t skipped_noncanonical = 0;
  std::uint64_t skipped_cyclotomic = 0;
  std::uint64_t inconclusive = 0;
  std::string quotient;
};

/// Exhaustive search over monic integer polynomials of degree 1..degree_max and height
/// <= height_max for measures in (1, threshold). One representative per class
/// {p(z), (-1)^d p(-z), reciprocal} is evaluated.
SearchReport lehmer_search(int degree_max, int height_max, double threshold = 1.3,
                           const SearchOptions& options = {});

/// Lehmer's degree-10 polynomial z^10 + z^9 - z^7 - z^6 - z^5 - z^4 - z^3 + z + 1.
IntPolynomial lehmer_polynomial();

}  // namespace mahler
