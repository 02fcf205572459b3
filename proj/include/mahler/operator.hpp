#pragma once

// Finite-dimensional stand-ins for bounded operators and the T-Mahler measure
// dist(p(T)e, span{T p(T)e, T^2 p(T)e, ...}) computed on a Krylov subspace.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mahler/classical.hpp"
#include "mahler/poly.hpp"

namespace mahler {

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// A vector of the finite Hilbert space.
class VectorH {
 public:
  VectorH() = default;
  explicit VectorH(VectorXc components) : components_(std::move(components)) {}

  /// k-th standard basis vector (0-based).
  static VectorH unit(Eigen::Index dim, Eigen::Index k);

  const VectorXc& components() const { return components_; }
  Eigen::Index dim() const { return components_.size(); }
  double norm() const { return components_.norm(); }
  VectorH normalized() const { return VectorH(components_ / norm()); }

 private:
  VectorXc components_;
};

/// Dense square complex matrix with a cached spectral-norm bound.
///
/// Weighted shifts keep their weights so that products cost O(N). Lower
/// triangular matrices record their lower bandwidth; a vector supported on the
/// first s coordinates is mapped into the first s + bandwidth coordinates.
class FiniteOperator {
 public:
  explicit FiniteOperator(MatrixXc entries);

  /// T e_i = weights[i] e_{i+1} for i < N - 1, T e_{N-1} = 0.
  static FiniteOperator weighted_shift(const std::vector<Complex>& weights, Eigen::Index dim);

  const MatrixXc& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  double norm_bound() const { return norm_bound_; }
  bool is_shift() const { return shift_weights_.has_value(); }
  const std::optional<VectorXc>& shift_weights() const { return shift_weights_; }
  bool is_lower_triangular() const { return lower_triangular_; }
  Eigen::Index lower_bandwidth() const { return lower_bandwidth_; }

  VectorXc apply(const VectorXc& x) const;
  /// y.head(out_len) = (T x).head(out_len) using only x.head(in_len); the rest of x must be zero.
  void apply_prefix(const VectorXc& x, Eigen::Index in_len, VectorXc& y, Eigen::Index out_len) const;

  FiniteOperator scaled(Complex c) const;

 private:
  FiniteOperator() = default;
  void analyse_structure();

  MatrixXc entries_;
  double norm_bound_ = 0.0;
  std::optional<VectorXc> shift_weights_;
  bool lower_triangular_ = false;
  Eigen::Index lower_bandwidth_ = 0;
};

/// Weight rule of a weighted shift T e_n = a_n e_{n+1} (1-based n).
class WeightedShiftSpec {
 public:
  enum class Rule { Hardy, Bergman, Constant, Explicit };

  static WeightedShiftSpec hardy(Eigen::Index truncation);
  static WeightedShiftSpec bergman(Eigen::Index truncation);
  static WeightedShiftSpec constant(Complex c, Eigen::Index truncation);
  static WeightedShiftSpec explicit_weights(std::vector<Complex> weights, Eigen::Index truncation);

  Rule rule() const { return rule_; }
  Eigen::Index truncation() const { return truncation_; }
  /// a_n for n >= 1.
  Complex weight(Eigen::Index n) const;
  FiniteOperator materialize() const;

 private:
  Rule rule_ = Rule::Hardy;
  Eigen::Index truncation_ = 0;
  Complex constant_ = 1.0;
  std::vector<Complex> weights_;
};

struct KrylovDistanceResult {
  double distance = 0.0;
  Eigen::Index subspace_dim = 0;
  std::vector<double> history;  // history[k] = distance to the first k Krylov directions
  bool converged = false;
};

/// p(T) v by Horner's rule in matrix-vector products.
VectorH apply_poly(const FiniteOperator& t, const ComplexPolynomial& p, const VectorH& v);

/// Distance from v to span{T v, ..., T^K v}; Arnoldi with classical Gram-Schmidt applied twice.
KrylovDistanceResult krylov_distance(const FiniteOperator& t, const VectorH& v, Eigen::Index k, double tol = 1e-10);

/// M_T^e(p) = dist(p(T)e, [T p(T) e]) truncated to K Krylov directions.
MeasureResult op_mahler_on_vector(const FiniteOperator& t, const VectorH& e, const ComplexPolynomial& p,
                                  Eigen::Index k, double tol = 1e-10);

struct SupOptions {
  int max_steps = 200;
  double initial_step = 1e-2;
  double min_step = 1e-10;
  double difference_step = 1e-6;
  int jobs = 1;
};

/// Heuristic lower bound on sup_{|e|=1} M_T^e(p): random restarts (restart 0 starts at e_1)
/// followed by sphere-projected ascent on a central-difference gradient.
MeasureResult op_mahler_sup(const FiniteOperator& t, const ComplexPolynomial& p, int restarts, Eigen::Index k,
                            std::uint64_t seed, const SupOptions& options = {});

/// E(T) = M_T(1) for a finite matrix: 1 iff T is rank deficient.
int e_quantity(const FiniteOperator& t);

bool is_subharmonic_finite(const FiniteOperator& t);

/// max_k |<e, T^k e>| / |T^k e| <= 1e-9 over k = 1..K, skipping vanishing powers.
bool subharmonic_witness_check(const FiniteOperator& t, const VectorH& e, Eigen::Index k);

/// prod_{i<=n} |a_i| straight from the weight rule.
double shift_monomial_measure(const WeightedShiftSpec& spec, Eigen::Index n);

/// Largest singular value of p(T), by SVD.
double poly_operator_norm(const FiniteOperator& t, const ComplexPolynomial& p);

}  // namespace mahler
