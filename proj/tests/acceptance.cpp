// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <sys/wait.h>

#include "helpers.hpp"
#include "json.hpp"
#include "mahler/areal.hpp"
#include "mahler/classical.hpp"
#include "mahler/operator.hpp"
#include "mahler/poly.hpp"

#ifndef MAHLER_LAB_CLI
#error "MAHLER_LAB_CLI must name the mahler-lab executable"
#endif

using namespace mahler;
using nlohmann::json;

namespace {

const double kLehmer = 1.176280;

template <typename... Args>
std::string fmt(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string run_cli(const std::string& args, int* status = nullptr) {
  const std::string cmd = std::string("\"") + MAHLER_LAB_CLI + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int rc = pclose(pipe);
  if (status) *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

MatrixXc gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  MatrixXc m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// Gaussian matrix, made singular by projecting out a random direction when asked.
MatrixXc random_matrix(std::mt19937_64& rng, Eigen::Index n, bool singular) {
  MatrixXc m = gaussian(rng, n);
  if (singular) {
    const VectorXc v = gaussian(rng, n).col(0).normalized();
    m = m * (MatrixXc::Identity(n, n) - v * v.adjoint());
    if (n == 1) m.setZero();
  }
  return m;
}

MatrixXc contraction(std::mt19937_64& rng, Eigen::Index n, bool singular) {
  MatrixXc m = random_matrix(rng, n, singular);
  const double s = Eigen::JacobiSVD<MatrixXc>(m).singularValues()(0);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  return s > 0 ? MatrixXc(m * (u(rng) / s)) : m;
}

ComplexPolynomial random_poly(std::mt19937_64& rng, int max_degree, double r_max, double gap = 0.0) {
  std::uniform_int_distribution<int> d(1, max_degree);
  return testing::from_roots(testing::random_roots(rng, d(rng), r_max, gap), testing::random_point(rng, 0.5, 2.0));
}

Outcome criterion1() {
  Outcome o;
  const std::string l = "1,1,0,-1,-1,-1,-1,-1,0,1,1";
  const double roots = json::parse(run_cli("mahler " + l + " --method roots"))["value"].get<double>();
  const double integral =
      json::parse(run_cli("mahler " + l + " --method integral --nodes 1048576"))["value"].get<double>();
  const json search = json::parse(run_cli("search --deg 10 --height 1"));
  const json& best = search["candidates"][0];
  o.pass = std::abs(roots - kLehmer) <= 1e-5 && std::abs(integral - kLehmer) <= 1e-5 && best["poly"] == l &&
           best["value"].get<double>() > 1.0;
  o.detail = fmt("roots %.9f, integral (2^20 nodes) %.9f, box minimum %s", roots, integral,
                 best["poly"].get<std::string>().c_str());
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    worst = std::max(worst, std::abs(mahler_roots(cyclotomic(n).to_complex()).value - 1.0));
    o.pass = o.pass && is_cyclotomic(cyclotomic(n));
  }
  for (int n = 3; n <= 30; ++n) o.pass = o.pass && !is_cyclotomic(IntPolynomial::monomial(n) + IntPolynomial{1, 1});
  o.pass = o.pass && worst <= 1e-9;
  o.detail = fmt("max |M(Phi_n) - 1| = %.2e", worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const PierceSequence two = pierce(IntPolynomial{-2, 1}, 64);
  for (int n = 1; n <= 64; ++n) o.pass = o.pass && two.values[n - 1] == (BigInt(1) << n) - 1;
  const double ratio = pierce_growth_check(pierce(IntPolynomial{-2, 1}, 30));
  o.pass = o.pass && std::abs(ratio - 2.0) <= 1e-6;
  const IntPolynomial l = lehmer_polynomial();
  const PierceSequence seq = pierce(l, 10);
  const RootSet rs = roots(l.to_complex());
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    Complex prod = 1.0;
    for (const Complex& a : rs.roots) prod *= std::pow(a, n) - 1.0;
    const double exact = seq.values[n - 1].convert_to<double>();
    worst = std::max(worst, std::abs(prod - exact) / std::abs(exact));
  }
  o.pass = o.pass && worst <= 1e-6;
  o.detail = fmt("ratio at n = 30 %.9f, worst relative Delta_n(L) gap %.2e", ratio, worst);
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4004);
  const FiniteOperator t = WeightedShiftSpec::hardy(512).materialize();
  const VectorH e1 = VectorH::unit(512, 0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ComplexPolynomial p = random_poly(rng, 8, 2.0, 0.05);
    worst = std::max(worst, std::abs(op_mahler_on_vector(t, e1, p, 256).value - mahler_roots(p).value));
  }
  o.pass = worst <= 1e-3;
  o.detail = fmt("max |M_T^e(p) - M(p)| = %.2e", worst);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const FiniteOperator t = WeightedShiftSpec::bergman(512).materialize();
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    worst = std::max(worst, std::abs(op_mahler_on_vector(t, VectorH::unit(512, 0), ComplexPolynomial::monomial(n), 256)
                                         .value -
                                     1.0 / std::sqrt(n + 1.0)));
  o.pass = worst <= 1e-10;
  o.detail = fmt("max deviation %.2e", worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<int> dim(2, 16);
  SupOptions opt;
  opt.max_steps = 30;
  int violations = 0;
  double worst_ratio = 0.0;
  for (int m = 0; m < 50; ++m) {
    const FiniteOperator t(contraction(rng, dim(rng), m % 2 == 0));
    for (int j = 0; j < 20; ++j) {
      const ComplexPolynomial p = random_poly(rng, 6, 2.0);
      const double mp = mahler_roots(p).value;
      const double sup = op_mahler_sup(t, p, 2, t.dim(), static_cast<std::uint64_t>(m * 20 + j), opt).value;
      worst_ratio = std::max(worst_ratio, sup / mp);
      violations += sup > mp * (1 + 1e-6);
    }
  }
  o.pass = violations == 0;
  o.detail = fmt("%d violations over 1000 pairs, max M_T(p)/M(p) = %.9f", violations, worst_ratio);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7007);
  std::uniform_int_distribution<int> dim(1, 8);
  SupOptions opt;
  opt.max_steps = 60;
  int ones = 0;
  double worst_witness = 0.0, worst_zero = 0.0, worst_bound = -1e300;
  for (int m = 0; m < 100; ++m) {
    const Eigen::Index n = dim(rng);
    const FiniteOperator t(random_matrix(rng, n, m % 2 == 0));
    const int e = e_quantity(t);
    if (e != 0 && e != 1) o.pass = false;
    if (e == 1) {
      ++ones;
      // A vector orthogonal to the range of T.
      Eigen::JacobiSVD<MatrixXc> svd(t.entries(), Eigen::ComputeFullU);
      const VectorH w(svd.matrixU().col(n - 1));
      worst_witness = std::max(worst_witness, std::abs(krylov_distance(t, w, n).distance - 1.0));
    } else {
      worst_zero = std::max(worst_zero, op_mahler_sup(t, ComplexPolynomial{1.0}, 3, n, m, opt).value);
    }
    const ComplexPolynomial p = random_poly(rng, 4, 2.0);
    const double sup = op_mahler_sup(t, p, 3, n, 1000 + m, opt).value;
    worst_bound = std::max(worst_bound, sup - poly_operator_norm(t, p) * e);
  }
  o.pass = o.pass && worst_witness <= 1e-9 && worst_zero <= 1e-6 && worst_bound <= 1e-6;
  o.detail = fmt("%d rank-deficient; witness gap %.2e, max M_T(1) when E = 0 %.2e, max M_T(p) - |p(T)| E %.2e", ones,
                 worst_witness, worst_zero, worst_bound);
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8008);
  double worst = 0.0;
  for (const double c : {0.3, 0.7}) {
    const FiniteOperator t = WeightedShiftSpec::constant(c, 512).materialize();
    for (int i = 0; i < 10; ++i) {
      // Roots of p(cz) are drawn first so that they stay away from the circle.
      std::uniform_int_distribution<int> degree(1, 8);
      std::vector<Complex> r = testing::random_roots(rng, degree(rng), 2.0, 0.05);
      for (Complex& a : r) a *= c;
      const ComplexPolynomial p = testing::from_roots(r);
      const double want = mahler_roots(compose_scale(p, Complex(c))).value;
      worst = std::max(worst, std::abs(op_mahler_on_vector(t, VectorH::unit(512, 0), p, 256).value - want));
    }
  }
  const WeightedShiftSpec b = WeightedShiftSpec::bergman(512);
  double monomial = 0.0, prod = 1.0;
  for (int n = 0; n <= 100; ++n) {
    if (n > 0) prod *= std::abs(b.weight(n));
    monomial = std::max(monomial, std::abs(shift_monomial_measure(b, n) - prod));
    monomial = std::max(monomial, std::abs(shift_monomial_measure(b, n) - 1.0 / std::sqrt(n + 1.0)));
  }
  o.pass = worst <= 1e-6 && monomial <= 1e-14;
  o.detail = fmt("max |M_T^e1(p) - M(p(cz))| = %.2e, bergman monomial gap %.2e", worst, monomial);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9009);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ComplexPolynomial p = random_poly(rng, 10, 3.0);
    const double closed = areal_mahler_closed(p).value;
    worst = std::max(worst, std::abs(areal_mahler_quadrature(p).value - closed) / closed);
  }
  double slack = 1e300;
  // Krylov truncation converges slowly for zeros right at the circle, so chain samples keep 0.02 away.
  for (int i = 0; i < 100; ++i) {
    const ComplexPolynomial p = random_poly(rng, 10, 2.5, 0.02);
    const ChainReport r = chain_check(p, 512, 200);
    slack = std::min({slack, r.lower_slack, r.upper_slack});
  }
  o.pass = worst <= 1e-6 && slack >= -1e-6;
  o.detail = fmt("oracle relative gap %.2e, min chain slack %.2e", worst, slack);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const std::vector<LimitRow> rows =
      lehmer_limit_table(3, 200, 1024, 480, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  double low = 1e300, gap = 0.0, overshoot = 0.0;
  // Index after which a column never increases again.
  std::size_t settle_exact = 0, settle_areal = 0, settle_trunc = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LimitRow& r = rows[i];
    low = std::min({low, r.bergman_op, r.bergman_exact, r.areal});
    gap = std::max(gap, r.bergman_op - r.bergman_exact);
    overshoot = std::max(overshoot, r.bergman_exact - r.bergman_op);
    if (i == 0) continue;
    if (r.bergman_exact > rows[i - 1].bergman_exact) settle_exact = i;
    if (r.areal > rows[i - 1].areal) settle_areal = i;
    if (r.bergman_op > rows[i - 1].bergman_op + gap) settle_trunc = i;
  }
  const double shrink_b = (rows.front().bergman_exact - 1) / (rows.back().bergman_exact - 1);
  const double shrink_t = (rows.front().bergman_op - 1) / (rows.back().bergman_op - 1);
  const double shrink_a = (rows.front().areal - 1) / (rows.back().areal - 1);
  const std::size_t half = rows.size() / 2;
  o.pass = low >= 1 - 1e-9 && overshoot <= 1e-9 && settle_exact < half && settle_areal < half && settle_trunc < half &&
           std::min({shrink_b, shrink_t, shrink_a}) >= 10;
  o.detail = fmt("min %.9f; non-increasing from n = %d (exact), %d (areal), %d (truncated, within its gap %.2e); "
                 "shrink %.1fx exact, %.1fx truncated, %.1fx areal",
                 low, rows[settle_exact].n, rows[settle_areal].n, rows[settle_trunc].n, gap, shrink_b, shrink_t,
                 shrink_a);
  return o;
}

Outcome criterion11() {
  Outcome o;
  const std::string a = "acceptance_verify_a.json", b = "acceptance_verify_b.json";
  int rc_a = -1, rc_b = -1;
  run_cli("verify --seed 42 --out " + a, &rc_a);
  run_cli("verify --seed 42 --out " + b, &rc_b);
  const std::string ra = read_file(a), rb = read_file(b);
  o.pass = !ra.empty() && ra == rb && rc_a == rc_b;
  o.detail = fmt("%zu-byte reports, exit code %d, %s", ra.size(), rc_a, ra == rb ? "identical" : "different");
  std::remove(a.c_str());
  std::remove(b.c_str());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 lehmer polynomial", criterion1},   {"2 kronecker", criterion2},
      {"3 pierce", criterion3},              {"4 hardy identity", criterion4},
      {"5 bergman monomials", criterion5},   {"6 contraction inequality", criterion6},
      {"7 rank criterion", criterion7},      {"8 weighted shift formula", criterion8},
      {"9 areal chain", criterion9},         {"10 lehmer limit", criterion10},
      {"11 determinism", criterion11},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
