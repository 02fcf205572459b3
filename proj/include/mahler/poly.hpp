#pragma once

// Univariate polynomials: exact integer coefficients (big integers) and dense
// floating coefficients templated on the scalar. Coefficients are stored in
// ascending order everywhere, index k holds the coefficient of z^k.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mahler/errors.hpp"

namespace mahler {

using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coeffs::Zero(1)) {}
  explicit Polynomial(Coeffs coeffs) : coeffs_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(static_cast<Eigen::Index>(coeffs.size())) {
    Eigen::Index k = 0;
    for (const auto& c : coeffs) coeffs_[k++] = c;
    normalize();
  }

  static Polynomial monomial(Eigen::Index n, Scalar c = Scalar(1)) {
    Coeffs v = Coeffs::Zero(n + 1);
    v[n] = c;
    return Polynomial(std::move(v));
  }

  /// leading * prod (z - r) for r in roots.
  static Polynomial from_roots(std::span<const Scalar> roots, Scalar leading = Scalar(1)) {
    Coeffs v = Coeffs::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
    v[0] = leading;
    Eigen::Index deg = 0;
    for (const Scalar& r : roots) {
      ++deg;
      for (Eigen::Index k = deg; k > 0; --k) v[k] = v[k - 1] - r * v[k];
      v[0] = -r * v[0];
    }
    return Polynomial(std::move(v));
  }

  Eigen::Index degree() const { return coeffs_.size() - 1; }
  const Coeffs& coeffs() const { return coeffs_; }
  Scalar operator[](Eigen::Index k) const { return k < coeffs_.size() ? coeffs_[k] : Scalar(0); }
  Scalar leading() const { return coeffs_[degree()]; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Scalar(0); }

  template <typename Other>
  Polynomial<Other> cast() const {
    return Polynomial<Other>(coeffs_.template cast<Other>().eval());
  }

 private:
  void normalize() {
    Eigen::Index n = coeffs_.size();
    while (n > 1 && coeffs_[n - 1] == Scalar(0)) --n;
    if (n == 0) {
      coeffs_ = Coeffs::Zero(1);
      return;
    }
    coeffs_.conservativeResize(n);
  }

  Coeffs coeffs_;
};

using ComplexPolynomial = Polynomial<Complex>;
using RealPolynomial = Polynomial<double>;

/// Horner evaluation.
template <typename Scalar, typename Point>
auto eval(const Polynomial<Scalar>& p, const Point& z) {
  using Result = decltype(Scalar() * z);
  Result acc = Result(p.coeffs()[p.degree()]);
  for (Eigen::Index k = p.degree() - 1; k >= 0; --k) acc = acc * z + Result(p.coeffs()[k]);
  return acc;
}

template <typename Scalar>
Polynomial<Scalar> operator*(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  Coeffs out = Coeffs::Zero(a.degree() + b.degree() + 1);
  for (Eigen::Index i = 0; i <= a.degree(); ++i)
    for (Eigen::Index j = 0; j <= b.degree(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  const Eigen::Index n = std::max(a.degree(), b.degree()) + 1;
  Coeffs out = Coeffs::Zero(n);
  out.head(a.degree() + 1) += a.coeffs();
  out.head(b.degree() + 1) += b.coeffs();
  return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  if (p.degree() == 0) return Polynomial<Scalar>();
  Coeffs out(p.degree());
  for (Eigen::Index k = 1; k <= p.degree(); ++k) out[k - 1] = p.coeffs()[k] * Scalar(static_cast<double>(k));
  return Polynomial<Scalar>(std::move(out));
}

/// p(c z): coefficient k is multiplied by c^k.
template <typename Scalar>
Polynomial<Scalar> compose_scale(const Polynomial<Scalar>& p, Scalar c) {
  typename Polynomial<Scalar>::Coeffs out = p.coeffs();
  Scalar power(1);
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] *= power;
    power *= c;
  }
  return Polynomial<Scalar>(std::move(out));
}

/// Exact integer polynomial. The zero polynomial is stored as {0} with degree 0.
class IntPolynomial {
 public:
  IntPolynomial() : coeffs_{BigInt(0)} {}
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long long> coeffs);

  static IntPolynomial monomial(int n, const BigInt& c = 1);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  const BigInt& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  const BigInt& leading() const { return coeffs_.back(); }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0; }
  bool is_monic() const { return leading() == 1; }

  ComplexPolynomial to_complex() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);

/// Remainder of a modulo a monic divisor. Exact over the integers.
IntPolynomial rem_monic(const IntPolynomial& a, const IntPolynomial& monic_divisor);
/// Quotient of a by a monic divisor; throws ArgumentError if the division is not exact.
IntPolynomial exact_div_monic(const IntPolynomial& a, const IntPolynomial& monic_divisor);
/// z^n mod a monic modulus by square-and-multiply.
IntPolynomial pow_z_mod(std::uint64_t n, const IntPolynomial& monic_modulus);

/// The n-th cyclotomic polynomial.
IntPolynomial cyclotomic(int n);

/// Zeros of a floating polynomial with their multiplicities folded in by repetition.
struct RootSet {
  std::vector<Complex> roots;
  /// Largest normwise backward error |p(a)| / sum_k |c_k| |a|^k over the roots.
  double residual_bound = 0.0;
  Complex leading;
};

struct RootOptions {
  double tol = 1e-12;
  int max_iterations = 500;
  /// Roots closer than this are reported as one repeated root.
  double cluster_distance = 1e-7;
};

/// All roots by Aberth-Ehrlich simultaneous iteration, sorted by (modulus, argument in [0, 2 pi)).
RootSet roots(const ComplexPolynomial& p, const RootOptions& options = {});

/// Res(p, q) = lc(p)^deg(q) * prod q(a_i), by fraction-free elimination of the Sylvester matrix.
BigInt resultant(const IntPolynomial& p, const IntPolynomial& q);

/// Determinant of an integer matrix by Bareiss elimination (row-major, n x n).
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

struct CyclotomicOptions {
  std::uint64_t order_cap = 1'000'000;
  /// Loose on purpose: a k-fold root is only resolved to about eps^(1/k).
  double modulus_tol = 1e-2;
};

/// True iff p is monic and every zero is a root of unity. Numeric screen on the root
/// moduli, then exact removal of cyclotomic factors Phi_m with phi(m) <= deg.
/// Throws InconclusiveError when the order bound 2 deg^2 + 2 exceeds the cap.
bool is_cyclotomic(const IntPolynomial& p, const CyclotomicOptions& options = {});

/// Ratio a / b as a double, without overflowing for very large integers.
double ratio_to_double(const BigInt& a, const BigInt& b);

}  // namespace mahler
