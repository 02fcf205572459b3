#include "mahler/areal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "mahler/errors.hpp"
#include "mahler/operator.hpp"

namespace mahler {

// ---------------------------------------------------------------------------
// Gauss-Legendre

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<GaussLegendre>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(n - 1 - i);
    rule->nodes[a] = -x;
    rule->nodes[b] = x;
    rule->weights[a] = w;
    rule->weights[b] = w;
  }
  if (n % 2 == 1) rule->nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  slot = std::move(rule);
  return *slot;
}

// ---------------------------------------------------------------------------
// Radial weight

RadialWeight RadialWeight::constant_one() { return RadialWeight(); }

RadialWeight RadialWeight::sampled(std::vector<double> r, std::vector<double> rho, bool normalization_declared) {
  if (r.empty() || r.size() != rho.size()) throw ArgumentError("radial weight needs matching nonempty r and rho");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] <= 1.0)) throw ArgumentError("radial weight grid must lie in [0, 1]");
    if (i > 0 && !(r[i] > r[i - 1])) throw ArgumentError("radial weight grid must be strictly increasing");
    if (!(rho[i] >= 0.0)) throw ArgumentError("radial weight values must be non-negative");
  }
  RadialWeight w;
  w.r_ = std::move(r);
  w.rho_ = std::move(rho);
  w.normalization_declared_ = normalization_declared;
  return w;
}

double RadialWeight::at_radius(double r) const {
  if (r_.empty()) return 1.0;
  if (r <= r_.front()) return rho_.front();
  if (r >= r_.back()) return rho_.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const auto i = static_cast<std::size_t>(it - r_.begin());
  const double t = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
  return (1.0 - t) * rho_[i - 1] + t * rho_[i];
}

namespace {

struct PanelValue {
  double full = 0.0;
  double half = 0.0;
};

// Adaptive composite Gauss-Legendre on [0, 1]; a panel is accepted once it agrees
// with the sum over its two halves.
template <class F>
std::pair<PanelValue, double> adaptive_radial(F&& f, int order, double tol, int& panels,
                                              std::vector<double> breaks = {}) {
  const GaussLegendre& gl = gauss_legendre(order);
  auto panel = [&](double a, double b) {
    PanelValue v;
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const PanelValue fx = f(a + h * (gl.nodes[i] + 1.0));
      v.full += gl.weights[i] * h * fx.full;
      v.half += gl.weights[i] * h * fx.half;
    }
    return v;
  };
  struct Item {
    double a, b;
    PanelValue whole;
    int depth;
  };
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double x, double y) { return y - x < 1e-12; }),
               breaks.end());
  std::vector<Item> stack;
  for (std::size_t i = breaks.size() - 1; i > 0; --i)
    stack.push_back({breaks[i - 1], breaks[i], panel(breaks[i - 1], breaks[i]), 0});
  PanelValue total;
  double error = 0.0;
  panels = 0;
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const double m = 0.5 * (it.a + it.b);
    const PanelValue l = panel(it.a, m);
    const PanelValue r = panel(m, it.b);
    const double diff = std::abs(l.full + r.full - it.whole.full);
    if (diff <= tol * (it.b - it.a) || it.depth >= 40) {
      total.full += l.full + r.full;
      total.half += l.half + r.half;
      error += diff;
      panels += 2;
    } else {
      stack.push_back({m, it.b, r, it.depth + 1});
      stack.push_back({it.a, m, l, it.depth + 1});
    }
  }
  return {total, error};
}

// Mean of log|p| over `m` equispaced angles on the circle of radius r, plus the
// mean over the even-indexed half. A node landing on a root moves the grid by half a spacing.
class CircleGrid {
 public:
  explicit CircleGrid(int m) : m_(m) {
    for (double offset : {0.5, 0.25}) {
      std::vector<Complex> w(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * (j + offset) / m);
      grids_.push_back(std::move(w));
    }
  }

  PanelValue mean(const ComplexPolynomial& p, double r) const {
    const auto& c = p.coeffs();
    for (const auto& grid : grids_) {
      double full = 0.0, half = 0.0;
      bool hit = false;
      for (int j = 0; j < m_; ++j) {
        const Complex z = r * grid[static_cast<std::size_t>(j)];
        Complex v = c[p.degree()];
        for (Eigen::Index k = p.degree() - 1; k >= 0; --k) v = v * z + c[k];
        const double n2 = std::norm(v);
        if (n2 == 0.0 || !std::isfinite(n2)) {
          hit = true;
          break;
        }
        const double lv = 0.5 * std::log(n2);
        full += lv;
        if (j % 2 == 0) half += lv;
      }
      if (!hit) return {full / m_, half / (m_ / 2)};
    }
    throw ConvergenceError("quadrature grid keeps landing on roots", {}, 0.0);
  }

 private:
  int m_;
  std::vector<std::vector<Complex>> grids_;
};

// The circle mean of log|p| has a kink at the modulus of every zero inside the disk,
// and a sampled weight is only piecewise linear.
std::vector<double> kinks(const ComplexPolynomial& p, const RadialWeight& rho) {
  std::vector<double> out;
  if (p.degree() >= 1)
    for (const Complex& a : roots(p).roots)
      if (std::abs(a) > 0.0 && std::abs(a) < 1.0) out.push_back(std::abs(a));
  for (const double r : rho.r())
    if (r > 0.0 && r < 1.0) out.push_back(r);
  return out;
}

MeasureResult polar_quadrature(const ComplexPolynomial& p, const RadialWeight& rho, int radial_nodes,
                               int angular_nodes) {
  if (p.is_zero()) throw ArgumentError("areal measure of the zero polynomial");
  if (radial_nodes < 16 || angular_nodes < 16) throw ArgumentError("quadrature needs at least 16 nodes each way");
  MeasureResult out;
  out.method = Method::QuadratureOracle;
  int panels = 0;
  if (p.degree() == 0) {
    // Constant log|a_0| times the mass of the weight.
    out.value = std::exp(std::log(std::abs(p.leading())) * rho.total_mass());
  } else {
    const CircleGrid grid(angular_nodes);
    const auto [integral, radial_error] = adaptive_radial(
        [&](double r) {
          const PanelValue c = grid.mean(p, r);
          const double w = 2.0 * r * rho.at_radius(r);
          return PanelValue{w * c.full, w * c.half};
        },
        radial_nodes, 1e-11, panels, kinks(p, rho));
    out.value = std::exp(integral.full);
    out.error_estimate = out.value * (radial_error + std::abs(integral.full - integral.half));
  }
  out.params["radial_nodes"] = radial_nodes;
  out.params["angular_nodes"] = angular_nodes;
  out.params["panels"] = panels;
  return out;
}

}  // namespace

double RadialWeight::total_mass() const {
  if (r_.empty()) return 1.0;
  int panels = 0;
  return adaptive_radial(
             [&](double r) {
               const double v = 2.0 * r * at_radius(r);
               return PanelValue{v, v};
             },
             16, 1e-14, panels, r_)
      .first.full;
}

// ---------------------------------------------------------------------------
// Areal measure

MeasureResult areal_mahler_closed(const ComplexPolynomial& p) {
  if (p.is_zero()) throw ArgumentError("areal measure of the zero polynomial");
  MeasureResult out;
  out.method = Method::ClosedForm;
  out.params["degree"] = static_cast<double>(p.degree());
  if (p.degree() == 0) {
    out.value = std::abs(p.leading());
    return out;
  }
  const RootSet rs = roots(p);
  const ComplexPolynomial dp = derivative(p);
  double log_value = std::log(std::abs(rs.leading));
  double error = 0.0;
  for (const Complex& a : rs.roots) {
    const double m = std::abs(a);
    const double dpa = std::abs(eval(dp, a));
    const double shift = dpa > 0.0 ? std::abs(eval(p, a)) / dpa : 0.0;
    if (m >= 1.0) {
      log_value += std::log(m);
      error += shift / m;
    } else {
      log_value += 0.5 * (m * m - 1.0);
      error += shift * m;
    }
  }
  out.value = std::exp(log_value);
  out.error_estimate = out.value * std::min(error, 1.0);
  out.params["residual_bound"] = rs.residual_bound;
  return out;
}

MeasureResult areal_mahler_quadrature(const ComplexPolynomial& p, int radial_nodes, int angular_nodes) {
  return polar_quadrature(p, RadialWeight::constant_one(), radial_nodes, angular_nodes);
}

MeasureResult weighted_areal(const ComplexPolynomial& p, const RadialWeight& rho, int radial_nodes,
                             int angular_nodes) {
  MeasureResult out = polar_quadrature(p, rho, radial_nodes, angular_nodes);
  out.params["total_mass"] = rho.total_mass();
  out.params["normalization_declared"] = rho.normalization_declared() ? 1.0 : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Bergman chain

MeasureResult bergman_kernel_mahler(const ComplexPolynomial& p) {
  if (p.is_zero()) throw ArgumentError("measure of the zero polynomial");
  if (p[0] == Complex(0.0)) throw ArgumentError("kernel formula needs p(0) != 0");
  std::vector<Complex> points{0.0};
  double residual = 0.0;
  if (p.degree() >= 1) {
    const RootSet rs = roots(p);
    residual = rs.residual_bound;
    for (const Complex& a : rs.roots)
      if (std::abs(a) < 1.0) {
        for (std::size_t i = 1; i < points.size(); ++i)
          if (std::abs(points[i] - a) < 1e-6) throw ArgumentError("kernel formula needs simple zeros in the disk");
        points.push_back(a);
      }
  }
  const auto m = static_cast<Eigen::Index>(points.size());
  MatrixXc gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex d = 1.0 - std::conj(points[static_cast<std::size_t>(i)]) * points[static_cast<std::size_t>(j)];
      gram(i, j) = 1.0 / (d * d);
    }
  VectorXc rhs = VectorXc::Zero(m);
  rhs[0] = 1.0;
  const VectorXc x = gram.ldlt().solve(rhs);
  MeasureResult out;
  out.method = Method::ClosedForm;
  out.value = std::abs(p[0]) * std::sqrt(std::max(0.0, x[0].real()));
  const double solve_residual = (gram * x - rhs).norm();
  out.error_estimate = out.value * (solve_residual + residual);
  out.params["interior_zeros"] = static_cast<double>(m - 1);
  out.params["residual_bound"] = residual;
  return out;
}

MeasureResult bergman_op_mahler(const ComplexPolynomial& p, Eigen::Index n, Eigen::Index k) {
  if (k < 1 || n < 2 * (k + p.degree())) throw ArgumentError("bergman_op_mahler needs N >= 2 (K + deg p)");
  const FiniteOperator t = WeightedShiftSpec::bergman(n).materialize();
  MeasureResult out = op_mahler_on_vector(t, VectorH::unit(n, 0), p, k);
  out.params["N"] = static_cast<double>(n);
  return out;
}

ChainReport chain_check(const ComplexPolynomial& p, Eigen::Index n, Eigen::Index k, double tol) {
  ChainReport report;
  report.poly = p;
  report.areal = areal_mahler_closed(p);
  report.bergman_op = bergman_op_mahler(p, n, k);
  report.classical = mahler_roots(p);
  report.lower_slack = report.bergman_op.value - report.areal.value;
  report.upper_slack = report.classical.value - report.bergman_op.value;
  report.chain_ok = report.lower_slack >= -tol && report.upper_slack >= -tol;
  return report;
}

std::vector<LimitRow> lehmer_limit_table(int n_min, int n_max, Eigen::Index n, Eigen::Index k, int jobs) {
  if (n_min < 3 || n_max < n_min) throw ArgumentError("limit table needs 3 <= n_min <= n_max");
  if (!(n_max + 1 < k && 2 * k < n)) throw ArgumentError("limit table needs n_max + 1 < K < N / 2");
  const FiniteOperator t = WeightedShiftSpec::bergman(n).materialize();
  const VectorH e1 = VectorH::unit(n, 0);
  std::vector<LimitRow> rows(static_cast<std::size_t>(n_max - n_min + 1));
  auto run = [&](std::size_t i) {
    const int deg = n_min + static_cast<int>(i);
    ComplexPolynomial::Coeffs c = ComplexPolynomial::Coeffs::Zero(deg + 1);
    c[0] = 1.0;
    c[1] = 1.0;
    c[deg] = 1.0;
    const ComplexPolynomial p(c);
    rows[i] = {deg, op_mahler_on_vector(t, e1, p, k).value, bergman_kernel_mahler(p).value,
               areal_mahler_closed(p).value};
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < rows.size(); i += static_cast<std::size_t>(workers))
          run(i);
      });
  }
  return rows;
}

}  // namespace mahler
