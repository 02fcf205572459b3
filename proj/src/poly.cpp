#include "mahler/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

namespace mahler {

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

IntPolynomial::IntPolynomial(std::initializer_list<long long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

IntPolynomial IntPolynomial::monomial(int n, const BigInt& c) {
  std::vector<BigInt> v(static_cast<std::size_t>(n) + 1, BigInt(0));
  v.back() = c;
  return IntPolynomial(std::move(v));
}

void IntPolynomial::normalize() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.emplace_back(0);
}

ComplexPolynomial IntPolynomial::to_complex() const {
  ComplexPolynomial::Coeffs v(static_cast<Eigen::Index>(coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[static_cast<Eigen::Index>(k)] = static_cast<double>(coeffs_[k]);
  return ComplexPolynomial(std::move(v));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> out(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1), BigInt(0));
  for (int k = 0; k <= a.degree(); ++k) out[static_cast<std::size_t>(k)] += a[k];
  for (int k = 0; k <= b.degree(); ++k) out[static_cast<std::size_t>(k)] += b[k];
  return IntPolynomial(std::move(out));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> out(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1), BigInt(0));
  for (int k = 0; k <= a.degree(); ++k) out[static_cast<std::size_t>(k)] += a[k];
  for (int k = 0; k <= b.degree(); ++k) out[static_cast<std::size_t>(k)] -= b[k];
  return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> out(static_cast<std::size_t>(a.degree() + b.degree() + 1), BigInt(0));
  for (int i = 0; i <= a.degree(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) out[static_cast<std::size_t>(i + j)] += a[i] * b[j];
  }
  return IntPolynomial(std::move(out));
}

namespace {

void require_monic(const IntPolynomial& m) {
  if (m.is_zero() || !m.is_monic()) throw ArgumentError("divisor must be monic");
}

// Long division by a monic divisor; returns (quotient, remainder).
std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& a, const IntPolynomial& m) {
  require_monic(m);
  const int dm = m.degree();
  if (a.degree() < dm) return {IntPolynomial(), a};
  std::vector<BigInt> r = a.coeffs();
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - dm + 1), BigInt(0));
  for (int k = a.degree(); k >= dm; --k) {
    const BigInt c = r[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    q[static_cast<std::size_t>(k - dm)] = c;
    for (int j = 0; j <= dm; ++j) r[static_cast<std::size_t>(k - dm + j)] -= c * m[j];
  }
  r.resize(static_cast<std::size_t>(std::max(dm, 1)));
  return {IntPolynomial(std::move(q)), IntPolynomial(std::move(r))};
}

}  // namespace

IntPolynomial rem_monic(const IntPolynomial& a, const IntPolynomial& monic_divisor) {
  return divmod_monic(a, monic_divisor).second;
}

IntPolynomial exact_div_monic(const IntPolynomial& a, const IntPolynomial& monic_divisor) {
  auto [q, r] = divmod_monic(a, monic_divisor);
  if (!r.is_zero()) throw ArgumentError("division is not exact");
  return q;
}

IntPolynomial pow_z_mod(std::uint64_t n, const IntPolynomial& monic_modulus) {
  require_monic(monic_modulus);
  IntPolynomial result = rem_monic(IntPolynomial{1}, monic_modulus);
  IntPolynomial base = rem_monic(IntPolynomial{0, 1}, monic_modulus);
  while (n > 0) {
    if (n & 1U) result = rem_monic(result * base, monic_modulus);
    n >>= 1U;
    if (n > 0) base = rem_monic(base * base, monic_modulus);
  }
  return result;
}

IntPolynomial cyclotomic(int n) {
  if (n < 1) throw ArgumentError("cyclotomic index must be positive");
  static thread_local std::map<int, IntPolynomial> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  IntPolynomial acc = IntPolynomial::monomial(n) - IntPolynomial{1};
  for (int d = 1; d < n; ++d)
    if (n % d == 0) acc = exact_div_monic(acc, cyclotomic(d));
  cache.emplace(n, acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Exact resultant

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return BigInt(1);
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return BigInt(0);
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

BigInt resultant(const IntPolynomial& p, const IntPolynomial& q) {
  if (p.is_zero() || q.is_zero()) throw ArgumentError("resultant of the zero polynomial");
  const int dp = p.degree();
  const int dq = q.degree();
  const std::size_t size = static_cast<std::size_t>(dp + dq);
  std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, BigInt(0)));
  // dq rows of p's coefficients, then dp rows of q's, highest power first.
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + dp - k)] = p[k];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) s[static_cast<std::size_t>(dq + r)][static_cast<std::size_t>(r + dq - k)] = q[k];
  return bareiss_determinant(std::move(s));
}

double ratio_to_double(const BigInt& a, const BigInt& b) {
  if (b == 0) throw ArgumentError("division by zero");
  if (a == 0) return 0.0;
  const BigInt abs_a = boost::multiprecision::abs(a);
  const BigInt abs_b = boost::multiprecision::abs(b);
  const auto bits = std::max(boost::multiprecision::msb(abs_a), boost::multiprecision::msb(abs_b));
  const unsigned shift = bits > 900 ? static_cast<unsigned>(bits - 900) : 0U;
  const double num = static_cast<double>(abs_a >> shift);
  const double den = static_cast<double>(abs_b >> shift);
  const double r = num / den;
  return ((a < 0) != (b < 0)) ? -r : r;
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich

namespace {

struct Evaluation {
  Complex value;
  Complex slope;
  double scale;  // sum_k |c_k| |z|^k
};

Evaluation evaluate_with_bound(const ComplexPolynomial::Coeffs& c, Complex z) {
  const Eigen::Index d = c.size() - 1;
  Complex v = c[d];
  Complex dv = 0.0;
  double s = std::abs(c[d]);
  const double az = std::abs(z);
  for (Eigen::Index k = d - 1; k >= 0; --k) {
    dv = dv * z + v;
    v = v * z + c[k];
    s = s * az + std::abs(c[k]);
  }
  return {v, dv, s};
}

// Smallest R with |c_d| R^d = sum_{k<d} |c_k| R^k; every root has modulus <= R.
double cauchy_radius(const ComplexPolynomial::Coeffs& c) {
  const Eigen::Index d = c.size() - 1;
  const double lead = std::abs(c[d]);
  auto excess = [&](double x) {
    double lower = 0.0;
    for (Eigen::Index k = d - 1; k >= 0; --k) lower = lower * x + std::abs(c[k]);
    return lead * std::pow(x, static_cast<double>(d)) - lower;
  };
  double hi = 1.0;
  for (Eigen::Index k = 0; k < d; ++k) hi = std::max(hi, 1.0 + std::abs(c[k]) / lead);
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? hi : lo) = mid;
  }
  return hi;
}

std::vector<Complex> cluster(std::vector<Complex> r, double distance) {
  const std::size_t n = r.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(r[i] - r[j]) < distance) parent[find(i)] = find(j);
  std::vector<Complex> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += r[i];
    ++count[find(i)];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (count[root] > 1) r[i] = sum[root] / static_cast<double>(count[root]);
  }
  return r;
}

}  // namespace

RootSet roots(const ComplexPolynomial& p, const RootOptions& options) {
  if (p.is_zero()) throw ArgumentError("roots of the zero polynomial");
  if (p.degree() < 1) throw ArgumentError("roots need degree >= 1");

  const auto& all = p.coeffs();
  Eigen::Index zeros = 0;
  while (all[zeros] == Complex(0.0)) ++zeros;
  const ComplexPolynomial::Coeffs c = all.tail(all.size() - zeros);
  const Eigen::Index d = c.size() - 1;

  std::vector<Complex> z(static_cast<std::size_t>(d));
  double worst = 0.0;
  if (d > 0) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double stop = 4.0 * static_cast<double>(d + 1) * eps;
    const double radius = cauchy_radius(c);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d) + 0.4;
      z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }
    std::vector<bool> done(static_cast<std::size_t>(d), false);
    for (int it = 0; it < options.max_iterations; ++it) {
      bool all_done = true;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (done[i]) continue;
        const Evaluation e = evaluate_with_bound(c, z[i]);
        if (std::abs(e.value) <= stop * e.scale) {
          done[i] = true;
          continue;
        }
        all_done = false;
        if (e.slope == Complex(0.0)) {
          z[i] *= Complex(1.0 + 1e-8, 1e-8);
          continue;
        }
        const Complex newton = e.value / e.slope;
        Complex repulsion = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j)
          if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        const Complex step = newton / (1.0 - newton * repulsion);
        z[i] -= step;
        if (std::abs(step) <= 2.0 * eps * std::abs(z[i])) done[i] = true;
      }
      if (all_done) break;
    }
    for (const Complex& r : z) {
      const Evaluation e = evaluate_with_bound(c, r);
      worst = std::max(worst, e.scale > 0 ? std::abs(e.value) / e.scale : 0.0);
    }
    if (!(worst <= options.tol)) {
      throw ConvergenceError("Aberth iteration did not converge (backward error " + std::to_string(worst) + ")",
                             z, worst);
    }
    z = cluster(std::move(z), options.cluster_distance);
  }

  RootSet out;
  out.roots.assign(static_cast<std::size_t>(zeros), Complex(0.0));
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  // Moduli are compared on a 1e-10 grid and arguments taken in [0, 2 pi), so that
  // rounding noise in a root on the negative real axis does not reorder it.
  auto key = [](const Complex& a) {
    double t = std::arg(a);
    if (t < 0) t += 2 * std::numbers::pi;
    if (t > 2 * std::numbers::pi - 1e-12) t = 0.0;
    return std::pair{std::round(std::abs(a) * 1e10), t};
  };
  std::sort(out.roots.begin(), out.roots.end(), [&](const Complex& a, const Complex& b) { return key(a) < key(b); });
  out.residual_bound = worst;
  out.leading = p.leading();
  return out;
}

// ---------------------------------------------------------------------------
// Cyclotomic detection

namespace {

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    while (n % q == 0) n /= q;
    result -= result / q;
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace

bool is_cyclotomic(const IntPolynomial& p, const CyclotomicOptions& options) {
  if (p.is_zero()) throw ArgumentError("is_cyclotomic of the zero polynomial");
  if (!p.is_monic()) return false;
  if (p.degree() == 0) return true;  // the empty product
  if (p[0] != 1 && p[0] != -1) return false;

  const RootSet rs = roots(p.to_complex());
  for (const Complex& r : rs.roots)
    if (std::abs(std::abs(r) - 1.0) > options.modulus_tol) return false;

  // A primitive m-th root of unity has degree phi(m) >= sqrt(m / 2).
  const auto d = static_cast<std::uint64_t>(p.degree());
  const std::uint64_t max_order = 2 * d * d + 2;
  if (max_order > options.order_cap)
    throw InconclusiveError("cyclotomic order bound " + std::to_string(max_order) + " exceeds cap");

  IntPolynomial rest = p;
  for (std::uint64_t m = 1; m <= max_order && rest.degree() > 0; ++m) {
    if (euler_phi(m) > static_cast<std::uint64_t>(rest.degree())) continue;
    const IntPolynomial phi = cyclotomic(static_cast<int>(m));
    while (rest.degree() >= phi.degree() && rem_monic(rest, phi).is_zero()) rest = exact_div_monic(rest, phi);
  }
  return rest.degree() == 0;
}

}  // namespace mahler
