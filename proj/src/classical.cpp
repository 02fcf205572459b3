#include "mahler/classical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

namespace mahler {

std::string to_string(Method method) {
  switch (method) {
    case Method::RootProduct: return "root-product";
    case Method::CircleQuadrature: return "circle-quadrature";
    case Method::KrylovTruncation: return "krylov-truncation";
    case Method::ClosedForm: return "closed-form";
    case Method::QuadratureOracle: return "quadrature-oracle";
  }
  return "unknown";
}

IntPolynomial lehmer_polynomial() { return IntPolynomial{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}; }

namespace {

// First-order perturbation of log|a| for each root, from the backward error of the root.
double root_error(const ComplexPolynomial& p, const ComplexPolynomial& dp, Complex a) {
  const double az = std::abs(a);
  double scale = 0.0;
  for (Eigen::Index k = p.degree(); k >= 0; --k) scale = scale * az + std::abs(p.coeffs()[k]);
  const double residual = std::abs(eval(p, a));
  const double slope = std::abs(eval(dp, a));
  if (slope == 0.0) return az;
  return (residual + scale * 1e-16) / slope;
}

}  // namespace

MeasureResult mahler_roots(const ComplexPolynomial& p, double tol) {
  if (p.is_zero()) throw ArgumentError("Mahler measure of the zero polynomial");
  MeasureResult out;
  out.method = Method::RootProduct;
  out.params["degree"] = static_cast<double>(p.degree());
  if (p.degree() == 0) {
    out.value = std::abs(p.leading());
    return out;
  }
  RootOptions options;
  options.tol = tol;
  const RootSet rs = roots(p, options);
  const ComplexPolynomial dp = derivative(p);
  double value = std::abs(rs.leading);
  double relative_error = 0.0;
  for (const Complex& a : rs.roots) {
    const double m = std::abs(a);
    if (m > 1.0) {
      value *= m;
      relative_error += root_error(p, dp, a) / m;
    }
  }
  out.value = value;
  out.error_estimate = value * std::min(relative_error, 1.0);
  out.params["residual_bound"] = rs.residual_bound;
  return out;
}

namespace {

// Mean of log|p| over the midpoint grid t_j = 2 pi (j + 1/2) / n.
double circle_log_mean(const ComplexPolynomial& p, int n, int& perturbed) {
  double scale = p.coeffs().cwiseAbs().sum();
  const double spacing = 2.0 * std::numbers::pi / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double t = spacing * (j + 0.5);
    double mod = std::abs(eval(p, std::polar(1.0, t)));
    if (mod <= 1e-14 * scale) {
      ++perturbed;
      t += 0.5 * spacing;
      mod = std::abs(eval(p, std::polar(1.0, t)));
    }
    sum += std::log(mod);
  }
  return sum / n;
}

}  // namespace

MeasureResult mahler_integral(const ComplexPolynomial& p, int nodes) {
  if (p.is_zero()) throw ArgumentError("Mahler measure of the zero polynomial");
  if (nodes < 16) throw ArgumentError("mahler_integral needs at least 16 nodes");
  int perturbed = 0;
  const double full = std::exp(circle_log_mean(p, nodes, perturbed));
  int perturbed_half = 0;
  const double half = std::exp(circle_log_mean(p, nodes / 2, perturbed_half));
  MeasureResult out;
  out.method = Method::CircleQuadrature;
  out.value = full;
  out.error_estimate = std::abs(full - half);
  out.params["nodes"] = nodes;
  out.params["perturbed_nodes"] = perturbed;
  return out;
}

MeasureResult omega(const ComplexPolynomial& p) {
  if (p.is_zero() || p.degree() < 1) throw ArgumentError("omega needs a nonconstant polynomial");
  const RootSet rs = roots(p);
  const ComplexPolynomial dp = derivative(p);
  MeasureResult out;
  out.method = Method::RootProduct;
  double value = 1.0;
  double relative_error = 0.0;
  int ambiguous = 0;
  for (const Complex& a : rs.roots) {
    const double m = std::abs(a);
    if (std::abs(m - 1.0) <= 1e-9) ++ambiguous;
    if (m > 1.0 + 1e-9) {
      value *= m;
      relative_error += root_error(p, dp, a) / m;
    }
  }
  out.value = value;
  out.error_estimate = value * std::min(relative_error, 1.0);
  out.params["boundary_ambiguous"] = ambiguous;
  out.params["residual_bound"] = rs.residual_bound;
  return out;
}

// ---------------------------------------------------------------------------

PierceSequence pierce(const IntPolynomial& p, int n_max) {
  if (p.is_zero() || p.degree() < 1) throw ArgumentError("pierce needs a nonconstant polynomial");
  if (!p.is_monic()) throw ArgumentError("pierce needs a monic polynomial");
  if (n_max < 1) throw ArgumentError("pierce needs n_max >= 1");

  PierceSequence seq;
  seq.poly = p;
  const IntPolynomial z{0, 1};
  IntPolynomial z_power = rem_monic(IntPolynomial{1}, p);
  for (int n = 1; n <= n_max; ++n) {
    z_power = rem_monic(z_power * z, p);
    // z^n - 1 and its remainder mod the monic p agree at every root of p.
    const IntPolynomial r = rem_monic(z_power - IntPolynomial{1}, p);
    seq.values.push_back(r.is_zero() ? BigInt(0) : resultant(p, r));
  }
  for (int n = 1; n < n_max; ++n) {
    const BigInt& cur = seq.values[static_cast<std::size_t>(n - 1)];
    if (cur == 0) {
      seq.ratios.emplace_back();
    } else {
      seq.ratios.emplace_back(std::abs(ratio_to_double(seq.values[static_cast<std::size_t>(n)], cur)));
    }
  }
  return seq;
}

double pierce_growth_check(const PierceSequence& seq) {
  if (seq.values.size() < 20) throw ArgumentError("pierce_growth_check needs n_max >= 20");
  for (const BigInt& v : seq.values)
    if (v == 0) throw ArgumentError("root of unity present");
  return *seq.ratios.back();
}

// ---------------------------------------------------------------------------
// Lehmer search

namespace {

using Coeffs = std::vector<int>;  // ascending, monic

Coeffs negate_variable(const Coeffs& c) {
  const std::size_t d = c.size() - 1;
  Coeffs out(c);
  for (std::size_t k = 0; k <= d; ++k)
    if ((k + d) % 2 == 1) out[k] = -out[k];
  return out;
}

Coeffs reciprocal(const Coeffs& c) {
  Coeffs out(c.rbegin(), c.rend());
  if (out.back() < 0)
    for (int& x : out) x = -x;
  return out;
}

// Lexicographic comparison from the leading coefficient down.
bool descending_less(const Coeffs& a, const Coeffs& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

bool is_canonical(const Coeffs& c) {
  const Coeffs n = negate_variable(c);
  if (descending_less(c, n)) return false;
  if (std::abs(c.front()) == 1) {
    const Coeffs r = reciprocal(c);
    if (descending_less(c, r) || descending_less(c, negate_variable(r))) return false;
  }
  return true;
}

struct Task {
  int degree;
  std::uint64_t begin;
  std::uint64_t end;
};

struct TaskResult {
  std::vector<SearchCandidate> candidates;
  std::uint64_t enumerated = 0;
  std::uint64_t zero_constant = 0;
  std::uint64_t noncanonical = 0;
  std::uint64_t cyclotomic = 0;
  std::uint64_t inconclusive = 0;
};

TaskResult run_task(const Task& task, int height, double threshold) {
  TaskResult out;
  const auto base = static_cast<std::uint64_t>(2 * height + 1);
  Coeffs c(static_cast<std::size_t>(task.degree) + 1);
  c.back() = 1;
  for (std::uint64_t index = task.begin; index < task.end; ++index) {
    ++out.enumerated;
    std::uint64_t t = index;
    for (int k = 0; k < task.degree; ++k) {
      c[static_cast<std::size_t>(k)] = static_cast<int>(t % base) - height;
      t /= base;
    }
    if (c.front() == 0) {
      ++out.zero_constant;
      continue;
    }
    if (!is_canonical(c)) {
      ++out.noncanonical;
      continue;
    }
    ComplexPolynomial::Coeffs v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t k = 0; k < c.size(); ++k) v[static_cast<Eigen::Index>(k)] = static_cast<double>(c[k]);
    MeasureResult m;
    try {
      m = mahler_roots(ComplexPolynomial(std::move(v)));
    } catch (const ConvergenceError&) {
      ++out.inconclusive;
      continue;
    }
    if (m.value <= 1.0 + 1e-9) {
      ++out.cyclotomic;
      continue;
    }
    if (m.value >= threshold) continue;
    std::vector<BigInt> big(c.begin(), c.end());
    IntPolynomial poly(std::move(big));
    try {
      if (is_cyclotomic(poly)) {
        ++out.cyclotomic;
        continue;
      }
    } catch (const InconclusiveError&) {
      ++out.inconclusive;
      continue;
    }
    out.candidates.push_back({std::move(poly), std::move(m)});
  }
  return out;
}

bool candidate_less(const SearchCandidate& a, const SearchCandidate& b) {
  if (a.measure.value != b.measure.value) return a.measure.value < b.measure.value;
  if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
  return std::lexicographical_compare(a.poly.coeffs().rbegin(), a.poly.coeffs().rend(), b.poly.coeffs().rbegin(),
                                      b.poly.coeffs().rend());
}

}  // namespace

SearchReport lehmer_search(int degree_max, int height_max, double threshold, const SearchOptions& options) {
  if (degree_max < 1 || degree_max > 12) throw ArgumentError("lehmer_search needs 1 <= degree_max <= 12");
  if (height_max < 1 || height_max > 3) throw ArgumentError("lehmer_search needs 1 <= height_max <= 3");
  if (!(threshold > 1.0)) throw ArgumentError("lehmer_search needs threshold > 1");

  const auto base = static_cast<std::uint64_t>(2 * height_max + 1);
  double cardinality = 0.0;
  std::vector<Task> tasks;
  constexpr std::uint64_t chunk = 4096;
  std::uint64_t size = 1;
  for (int d = 1; d <= degree_max; ++d) {
    size *= base;
    cardinality += static_cast<double>(size);
  }
  if (cardinality > options.cardinality_cap) {
    throw SearchRefusedError("search space of " + std::to_string(static_cast<long long>(cardinality)) +
                                 " polynomials exceeds the cap",
                             cardinality);
  }
  size = 1;
  for (int d = 1; d <= degree_max; ++d) {
    size *= base;
    for (std::uint64_t b = 0; b < size; b += chunk) tasks.push_back({d, b, std::min(size, b + chunk)});
  }

  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_task(tasks[i], height_max, threshold);
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  SearchReport report;
  report.degree_max = degree_max;
  report.height_max = height_max;
  report.threshold = threshold;
  report.quotient = "p(z) ~ (-1)^d p(-z) ~ z^d p(1/z) (when |p(0)| = 1); representative is the "
                    "lexicographically largest coefficient vector read from the leading term";
  for (TaskResult& r : results) {
    report.enumerated += r.enumerated;
    report.skipped_zero_constant += r.zero_constant;
    report.skipped_noncanonical += r.noncanonical;
    report.skipped_cyclotomic += r.cyclotomic;
    report.inconclusive += r.inconclusive;
    std::move(r.candidates.begin(), r.candidates.end(), std::back_inserter(report.candidates));
  }
  std::sort(report.candidates.begin(), report.candidates.end(), candidate_less);
  return report;
}

}  // namespace mahler
