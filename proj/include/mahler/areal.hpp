#pragma once

// Areal (Bergman) Mahler measure |p|_0 = exp( integral over the disk of log|p| dA ),
// dA the normalized area measure, its radially weighted variant, and the chain
// |p|_0 <= M_B^1(p) <= M(p).

#include <Eigen/Dense>

#include <vector>

#include "mahler/classical.hpp"
#include "mahler/poly.hpp"

namespace mahler {

/// rho sampled against r on [0, 1], linearly interpolated; empty samples mean rho = 1.
/// The integrand is log|p(z)| rho(|z|^2), so rho[k] holds rho(r[k]^2).
class RadialWeight {
 public:
  static RadialWeight constant_one();
  static RadialWeight sampled(std::vector<double> r, std::vector<double> rho, bool normalization_declared = false);

  bool is_constant() const { return r_.empty(); }
  bool normalization_declared() const { return normalization_declared_; }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& rho() const { return rho_; }

  /// rho(r^2) at radius r.
  double at_radius(double r) const;
  /// integral of rho(|z|^2) dA.
  double total_mass() const;

 private:
  std::vector<double> r_;
  std::vector<double> rho_;
  bool normalization_declared_ = true;
};

/// exp( log|a_d| + sum_{|a|>=1} log|a| + sum_{|a|<1} (|a|^2 - 1) / 2 ).
MeasureResult areal_mahler_closed(const ComplexPolynomial& p);

/// Polar quadrature: midpoint rule with `angular_nodes` in the angle, adaptive
/// Gauss-Legendre panels of order `radial_nodes` in the radius.
MeasureResult areal_mahler_quadrature(const ComplexPolynomial& p, int radial_nodes = 16, int angular_nodes = 8192);

MeasureResult weighted_areal(const ComplexPolynomial& p, const RadialWeight& rho, int radial_nodes = 16,
                             int angular_nodes = 8192);

/// M_B^1(p) on the Bergman shift truncated to N, with K Krylov directions. Requires N >= 2 (K + deg p).
MeasureResult bergman_op_mahler(const ComplexPolynomial& p, Eigen::Index n, Eigen::Index k);

/// M_B^1(p) without truncation: |p(0)| sqrt((G^-1)_00), where G is the Gram matrix of the
/// Bergman kernels 1 / (1 - conj(w) z)^2 at w = 0 and at the zeros of p inside the disk.
/// Needs p(0) != 0 and simple zeros inside the disk.
MeasureResult bergman_kernel_mahler(const ComplexPolynomial& p);

struct ChainReport {
  ComplexPolynomial poly;
  MeasureResult areal;
  MeasureResult bergman_op;
  MeasureResult classical;
  double lower_slack = 0.0;  // bergman_op - areal
  double upper_slack = 0.0;  // classical - bergman_op
  bool chain_ok = false;
};

ChainReport chain_check(const ComplexPolynomial& p, Eigen::Index n, Eigen::Index k, double tol = 1e-6);

struct LimitRow {
  int n = 0;
  double bergman_op = 0.0;     // Krylov truncation at (N, K)
  double bergman_exact = 0.0;  // bergman_kernel_mahler
  double areal = 0.0;
};

/// M_B^1 (truncated and exact) and |.|_0 of z^n + z + 1 for n_min <= n <= n_max. Requires n_max + 1 < K < N / 2.
std::vector<LimitRow> lehmer_limit_table(int n_min, int n_max, Eigen::Index n = 1024, Eigen::Index k = 480,
                                         int jobs = 1);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

}  // namespace mahler
