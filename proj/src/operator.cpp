#include "mahler/operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "mahler/random.hpp"

namespace mahler {

VectorH VectorH::unit(Eigen::Index dim, Eigen::Index k) {
  if (k < 0 || k >= dim) throw ArgumentError("unit vector index out of range");
  VectorXc v = VectorXc::Zero(dim);
  v[k] = 1.0;
  return VectorH(std::move(v));
}

// ---------------------------------------------------------------------------
// FiniteOperator

namespace {

double largest_singular_value(const MatrixXc& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() <= 256) return Eigen::BDCSVD<MatrixXc>(m).singularValues()(0);
  // Power iteration on T^* T for large dense matrices.
  VectorXc x = VectorXc::Ones(m.cols()).normalized();
  double sigma = 0.0;
  for (int it = 0; it < 2000; ++it) {
    VectorXc y = m.adjoint() * (m * x);
    const double lambda = y.norm();
    if (lambda == 0.0) return 0.0;
    x = y / lambda;
    const double next = std::sqrt(lambda);
    if (std::abs(next - sigma) <= 1e-15 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma * (1.0 + 1e-12);
}

}  // namespace

FiniteOperator::FiniteOperator(MatrixXc entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ArgumentError("operator matrix must be square");
  analyse_structure();
  norm_bound_ = shift_weights_ ? (shift_weights_->size() ? shift_weights_->cwiseAbs().maxCoeff() : 0.0)
                               : largest_singular_value(entries_);
}

FiniteOperator FiniteOperator::weighted_shift(const std::vector<Complex>& weights, Eigen::Index dim) {
  if (dim < 1) throw ArgumentError("shift dimension must be positive");
  if (static_cast<Eigen::Index>(weights.size()) < dim - 1) throw ArgumentError("not enough shift weights");
  FiniteOperator op;
  op.entries_ = MatrixXc::Zero(dim, dim);
  VectorXc w(dim - 1);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) {
    w[i] = weights[static_cast<std::size_t>(i)];
    op.entries_(i + 1, i) = w[i];
  }
  op.shift_weights_ = w;
  op.lower_triangular_ = true;
  op.lower_bandwidth_ = dim > 1 ? 1 : 0;
  op.norm_bound_ = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  return op;
}

void FiniteOperator::analyse_structure() {
  const Eigen::Index n = dim();
  bool upper_zero = true;
  bool shift_only = true;
  Eigen::Index band = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (entries_(i, j) == Complex(0.0)) continue;
      if (i < j) upper_zero = false;
      if (i != j + 1) shift_only = false;
      if (i > j) band = std::max(band, i - j);
    }
  }
  lower_triangular_ = upper_zero;
  lower_bandwidth_ = upper_zero ? band : n;
  if (shift_only && n > 0) {
    VectorXc w(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) w[i] = entries_(i + 1, i);
    shift_weights_ = w;
  }
}

VectorXc FiniteOperator::apply(const VectorXc& x) const {
  if (x.size() != dim()) throw ArgumentError("dimension mismatch");
  if (shift_weights_) {
    VectorXc y(dim());
    y[0] = 0.0;
    y.tail(dim() - 1) = shift_weights_->cwiseProduct(x.head(dim() - 1));
    return y;
  }
  return entries_ * x;
}

void FiniteOperator::apply_prefix(const VectorXc& x, Eigen::Index in_len, VectorXc& y, Eigen::Index out_len) const {
  if (shift_weights_) {
    y[0] = 0.0;
    const Eigen::Index m = std::min(in_len, out_len - 1);
    y.segment(1, m) = shift_weights_->head(m).cwiseProduct(x.head(m));
    if (out_len - 1 > m) y.segment(1 + m, out_len - 1 - m).setZero();
    return;
  }
  y.head(out_len).noalias() = entries_.topLeftCorner(out_len, in_len) * x.head(in_len);
}

FiniteOperator FiniteOperator::scaled(Complex c) const {
  if (shift_weights_) {
    std::vector<Complex> w(shift_weights_->data(), shift_weights_->data() + shift_weights_->size());
    for (Complex& x : w) x *= c;
    return weighted_shift(w, dim());
  }
  return FiniteOperator(entries_ * c);
}

// ---------------------------------------------------------------------------
// Weighted shift rules

WeightedShiftSpec WeightedShiftSpec::hardy(Eigen::Index truncation) {
  WeightedShiftSpec s;
  s.rule_ = Rule::Hardy;
  s.truncation_ = truncation;
  return s;
}

WeightedShiftSpec WeightedShiftSpec::bergman(Eigen::Index truncation) {
  WeightedShiftSpec s;
  s.rule_ = Rule::Bergman;
  s.truncation_ = truncation;
  return s;
}

WeightedShiftSpec WeightedShiftSpec::constant(Complex c, Eigen::Index truncation) {
  if (c == Complex(0.0)) throw ArgumentError("shift weights must be nonzero");
  WeightedShiftSpec s;
  s.rule_ = Rule::Constant;
  s.constant_ = c;
  s.truncation_ = truncation;
  return s;
}

WeightedShiftSpec WeightedShiftSpec::explicit_weights(std::vector<Complex> weights, Eigen::Index truncation) {
  if (static_cast<Eigen::Index>(weights.size()) < truncation - 1)
    throw ArgumentError("explicit shift needs truncation - 1 weights");
  for (const Complex& w : weights)
    if (w == Complex(0.0)) throw ArgumentError("shift weights must be nonzero");
  WeightedShiftSpec s;
  s.rule_ = Rule::Explicit;
  s.weights_ = std::move(weights);
  s.truncation_ = truncation;
  return s;
}

Complex WeightedShiftSpec::weight(Eigen::Index n) const {
  if (n < 1) throw ArgumentError("weights are indexed from 1");
  switch (rule_) {
    case Rule::Hardy: return 1.0;
    case Rule::Bergman: return std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1));
    case Rule::Constant: return constant_;
    case Rule::Explicit:
      if (n > static_cast<Eigen::Index>(weights_.size())) throw ArgumentError("weight index beyond explicit list");
      return weights_[static_cast<std::size_t>(n - 1)];
  }
  return 0.0;
}

FiniteOperator WeightedShiftSpec::materialize() const {
  std::vector<Complex> w(static_cast<std::size_t>(std::max<Eigen::Index>(truncation_ - 1, 0)));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight(static_cast<Eigen::Index>(i) + 1);
  return FiniteOperator::weighted_shift(w, truncation_);
}

double shift_monomial_measure(const WeightedShiftSpec& spec, Eigen::Index n) {
  if (n < 0) throw ArgumentError("monomial degree must be non-negative");
  if (n + 1 >= spec.truncation()) throw ArgumentError("truncation too small for this monomial");
  switch (spec.rule()) {
    case WeightedShiftSpec::Rule::Hardy: return 1.0;
    case WeightedShiftSpec::Rule::Bergman: return 1.0 / std::sqrt(static_cast<double>(n + 1));
    case WeightedShiftSpec::Rule::Constant: return std::pow(std::abs(spec.weight(1)), static_cast<double>(n));
    case WeightedShiftSpec::Rule::Explicit: break;
  }
  double prod = 1.0;
  for (Eigen::Index i = 1; i <= n; ++i) prod *= std::abs(spec.weight(i));
  return prod;
}

// ---------------------------------------------------------------------------
// Krylov distance

VectorH apply_poly(const FiniteOperator& t, const ComplexPolynomial& p, const VectorH& v) {
  if (v.dim() != t.dim()) throw ArgumentError("dimension mismatch");
  const auto& c = p.coeffs();
  VectorXc y = c[p.degree()] * v.components();
  for (Eigen::Index k = p.degree() - 1; k >= 0; --k) y = t.apply(y) + c[k] * v.components();
  return VectorH(std::move(y));
}

KrylovDistanceResult krylov_distance(const FiniteOperator& t, const VectorH& v, Eigen::Index k, double tol) {
  if (v.dim() != t.dim()) throw ArgumentError("dimension mismatch");
  if (k < 1) throw ArgumentError("krylov_distance needs K >= 1");
  const Eigen::Index n = t.dim();
  KrylovDistanceResult out;
  const double nv = v.norm();
  out.history.push_back(nv);
  out.distance = nv;
  if (nv == 0.0) {
    out.converged = true;
    return out;
  }

  Eigen::Index support = n;
  if (t.is_lower_triangular()) {
    support = 0;
    for (Eigen::Index i = n - 1; i >= 0; --i)
      if (v.components()[i] != Complex(0.0)) {
        support = i + 1;
        break;
      }
  }
  auto grow = [&](Eigen::Index len) { return t.is_lower_triangular() ? std::min(n, len + t.lower_bandwidth()) : n; };

  const Eigen::Index max_dim = std::min(k, n);
  MatrixXc basis = MatrixXc::Zero(n, max_dim);
  std::vector<Eigen::Index> lengths;
  VectorXc residual = v.components();
  VectorXc u = v.components() / nv;
  Eigen::Index u_len = support;
  Eigen::Index r_len = support;
  VectorXc w = VectorXc::Zero(n);
  bool breakdown = false;

  for (Eigen::Index step = 0; step < k; ++step) {
    if (step == max_dim) {
      breakdown = true;
      break;
    }
    const Eigen::Index w_len = grow(u_len);
    t.apply_prefix(u, u_len, w, w_len);
    const double raw = w.head(w_len).norm();
    // T^k v has vanished: the Krylov space is exhausted.
    if (raw <= 1e-14) {
      breakdown = true;
      break;
    }
    if (step > 0) {
      const auto q = basis.topLeftCorner(w_len, step);
      for (int pass = 0; pass < 2; ++pass) {
        const VectorXc c = q.adjoint() * w.head(w_len);
        w.head(w_len).noalias() -= q * c;
      }
    }
    const double h = w.head(w_len).norm();
    // The new direction already lies in the span: the subspace is invariant.
    if (h <= 1e-12 * raw) {
      breakdown = true;
      break;
    }
    basis.col(step).head(w_len) = w.head(w_len) / h;
    lengths.push_back(w_len);
    r_len = std::max(r_len, w_len);
    const Complex c = basis.col(step).head(w_len).dot(residual.head(w_len));
    residual.head(w_len) -= c * basis.col(step).head(w_len);
    out.history.push_back(std::min(out.history.back(), residual.head(r_len).norm()));
    u = basis.col(step);
    u_len = w_len;
  }

  out.subspace_dim = static_cast<Eigen::Index>(lengths.size());
  out.distance = out.history.back();
  if (breakdown) {
    out.converged = true;
  } else {
    const auto window = static_cast<std::size_t>((k + 7) / 8);
    if (out.history.size() > window) {
      const double before = out.history[out.history.size() - 1 - window];
      out.converged = before - out.distance <= tol * before;
    }
  }
  return out;
}

MeasureResult op_mahler_on_vector(const FiniteOperator& t, const VectorH& e, const ComplexPolynomial& p,
                                  Eigen::Index k, double tol) {
  if (std::abs(e.norm() - 1.0) > 1e-12) throw ArgumentError("op_mahler_on_vector needs a unit vector");
  const KrylovDistanceResult kd = krylov_distance(t, apply_poly(t, p, e), k, tol);
  MeasureResult out;
  out.method = Method::KrylovTruncation;
  out.value = kd.distance;
  const auto& h = kd.history;
  out.error_estimate = h.size() >= 2 ? h[h.size() - 2] - h.back() : 0.0;
  out.params["dim"] = static_cast<double>(t.dim());
  out.params["K"] = static_cast<double>(k);
  out.params["subspace_dim"] = static_cast<double>(kd.subspace_dim);
  out.params["converged"] = kd.converged ? 1.0 : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Sup heuristic

namespace {

struct RestartOutcome {
  double value = 0.0;
  int steps = 0;
};

RestartOutcome ascend(const FiniteOperator& t, const ComplexPolynomial& p, Eigen::Index k, VectorXc x,
                      const SupOptions& options) {
  auto objective = [&](const VectorXc& y) {
    return krylov_distance(t, apply_poly(t, p, VectorH(y / y.norm())), k).distance;
  };
  x.normalize();
  double f = objective(x);
  double step = options.initial_step;
  const double h = options.difference_step;
  const Eigen::Index n = x.size();
  RestartOutcome out;
  VectorXc grad(n);
  for (; out.steps < options.max_steps; ++out.steps) {
    for (Eigen::Index j = 0; j < n; ++j) {
      VectorXc plus = x;
      VectorXc minus = x;
      plus[j] += h;
      minus[j] -= h;
      const double re = (objective(plus) - objective(minus)) / (2 * h);
      plus[j] = x[j] + Complex(0.0, h);
      minus[j] = x[j] - Complex(0.0, h);
      const double im = (objective(plus) - objective(minus)) / (2 * h);
      grad[j] = Complex(re, im);
    }
    // Project onto the tangent space of the sphere.
    grad -= x.dot(grad).real() * x;
    const double gn = grad.norm();
    if (gn < 1e-14) break;
    VectorXc candidate = (x + (step / gn) * grad).normalized();
    const double fc = objective(candidate);
    if (fc > f) {
      x = std::move(candidate);
      f = fc;
    } else {
      step *= 0.5;
      if (step < options.min_step) break;
    }
  }
  out.value = f;
  return out;
}

}  // namespace

MeasureResult op_mahler_sup(const FiniteOperator& t, const ComplexPolynomial& p, int restarts, Eigen::Index k,
                            std::uint64_t seed, const SupOptions& options) {
  if (restarts < 1) throw ArgumentError("op_mahler_sup needs at least one restart");
  const Eigen::Index n = t.dim();
  const Eigen::Index kk = std::max<Eigen::Index>(1, std::min(k, n));
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));

  auto run = [&](int r) {
    VectorXc start;
    if (r == 0) {
      start = VectorH::unit(n, 0).components();
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      start = random_complex_vector(rng, n);
    }
    outcomes[static_cast<std::size_t>(r)] = ascend(t, p, kk, std::move(start), options);
  };
  if (options.jobs <= 1) {
    for (int r = 0; r < restarts; ++r) run(r);
  } else {
    std::vector<std::jthread> pool;
    const int jobs = std::min(options.jobs, restarts);
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (int r = j; r < restarts; r += jobs) run(r);
      });
  }

  int best = 0;
  std::vector<double> values;
  int total_steps = 0;
  for (int r = 0; r < restarts; ++r) {
    const auto& o = outcomes[static_cast<std::size_t>(r)];
    values.push_back(o.value);
    total_steps += o.steps;
    if (o.value > outcomes[static_cast<std::size_t>(best)].value) best = r;
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  MeasureResult out;
  out.method = Method::KrylovTruncation;
  out.value = values.front();
  out.error_estimate = values.front() - values[std::min<std::size_t>(2, values.size() - 1)];
  out.params["restarts"] = restarts;
  out.params["K"] = static_cast<double>(kk);
  out.params["best_restart"] = best;
  out.params["steps"] = total_steps;
  out.params["lower_bound_only"] = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Rank criterion

int e_quantity(const FiniteOperator& t) {
  const Eigen::Index n = t.dim();
  if (n == 0) return 0;
  // A truncated shift always annihilates the last basis vector.
  if (t.is_shift()) return 1;
  if (t.norm_bound() == 0.0) return 1;
  const Eigen::VectorXd sv = Eigen::BDCSVD<MatrixXc>(t.entries()).singularValues();
  const double ratio = sv(n - 1) / sv(0);
  if (ratio < 1e-11) return 1;
  if (ratio > 1e-7) return 0;
  throw IllConditionedError("smallest singular value ratio " + std::to_string(ratio) +
                                " is too close to the rank threshold 1e-9",
                            ratio);
}

bool is_subharmonic_finite(const FiniteOperator& t) { return e_quantity(t) == 1; }

bool subharmonic_witness_check(const FiniteOperator& t, const VectorH& e, Eigen::Index k) {
  if (std::abs(e.norm() - 1.0) > 1e-12) throw ArgumentError("witness check needs a unit vector");
  VectorXc x = e.components();
  double scale = 1.0;
  double worst = 0.0;
  for (Eigen::Index power = 1; power <= k; ++power) {
    VectorXc y = t.apply(x);
    const double ny = y.norm();
    scale *= ny;
    if (ny == 0.0 || scale < 1e-14) break;
    worst = std::max(worst, std::abs(e.components().dot(y)) / ny);
    x = y / ny;
  }
  return worst <= 1e-9;
}

double poly_operator_norm(const FiniteOperator& t, const ComplexPolynomial& p) {
  const Eigen::Index n = t.dim();
  MatrixXc acc = p.coeffs()[p.degree()] * MatrixXc::Identity(n, n);
  for (Eigen::Index k = p.degree() - 1; k >= 0; --k) acc = t.entries() * acc + p.coeffs()[k] * MatrixXc::Identity(n, n);
  return largest_singular_value(acc);
}

}  // namespace mahler
