#include "mahler/text.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

struct Token {
  std::string text;
  bool integral = true;
};

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  std::size_t pos() const { return pos_; }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  bool at_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  // Unsigned decimal literal: digits [. digits] [e [sign] digits].
  Token number() {
    skip_space();
    Token t;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      t.integral = false;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      t.integral = false;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == exp_start) fail("malformed exponent");
    }
    t.text = std::string(s_.substr(start, pos_ - start));
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// An exact-or-floating coefficient.
struct Coefficient {
  BigInt exact = 0;
  Complex value = 0.0;
  bool integral = true;

  static Coefficient from_token(const Token& t, bool negative, bool imaginary) {
    Coefficient c;
    c.integral = t.integral && !imaginary;
    const double x = std::stod(t.text) * (negative ? -1.0 : 1.0);
    c.value = imaginary ? Complex(0.0, x) : Complex(x, 0.0);
    if (c.integral) {
      c.exact = BigInt(t.text);
      if (negative) c.exact = -c.exact;
    }
    return c;
  }

  Coefficient& operator+=(const Coefficient& o) {
    integral = integral && o.integral;
    value += o.value;
    if (integral) exact += o.exact;
    return *this;
  }
};

ParsedPolynomial assemble(std::vector<Coefficient> cs) {
  bool integral = true;
  for (const Coefficient& c : cs) integral = integral && c.integral;
  if (integral) {
    std::vector<BigInt> v;
    for (const Coefficient& c : cs) v.push_back(c.exact);
    return IntPolynomial(std::move(v));
  }
  ComplexPolynomial::Coeffs v(static_cast<Eigen::Index>(cs.size()));
  for (std::size_t i = 0; i < cs.size(); ++i) v[static_cast<Eigen::Index>(i)] = cs[i].value;
  return ComplexPolynomial(std::move(v));
}

// item := [sign] number [(+|-) number] 'i'  |  [sign] number  |  [sign] [number] 'i'
Coefficient list_item(Scanner& sc) {
  bool negative = false;
  if (sc.accept('-')) negative = true;
  else sc.accept('+');
  if (sc.accept('i')) return Coefficient::from_token({"1", true}, negative, true);
  const Token first = sc.number();
  if (sc.accept('i')) return Coefficient::from_token(first, negative, true);
  Coefficient c = Coefficient::from_token(first, negative, false);
  const char next = sc.peek();
  if (next == '+' || next == '-') {
    sc.accept(next);
    if (sc.accept('i')) {
      c += Coefficient::from_token({"1", true}, next == '-', true);
      return c;
    }
    const Token im = sc.number();
    sc.expect('i');
    c += Coefficient::from_token(im, next == '-', true);
  }
  return c;
}

ParsedPolynomial parse_list(Scanner& sc) {
  std::vector<Coefficient> cs;
  do {
    cs.push_back(list_item(sc));
  } while (sc.accept(','));
  if (!sc.done()) sc.fail("unexpected character");
  return assemble(std::move(cs));
}

// term := [coefficient ['*']] [z ['^' integer]]; coefficient may be a parenthesized list item.
ParsedPolynomial parse_symbolic(Scanner& sc) {
  std::map<int, Coefficient> terms;
  bool first = true;
  while (!sc.done()) {
    bool negative = false;
    if (sc.accept('-')) negative = true;
    else if (!sc.accept('+') && !first) sc.fail("expected '+' or '-'");
    first = false;
    Coefficient c = Coefficient::from_token({"1", true}, negative, false);
    bool have_coefficient = false;
    if (sc.accept('(')) {
      Coefficient inner = list_item(sc);
      sc.expect(')');
      if (negative) {
        inner.value = -inner.value;
        inner.exact = -inner.exact;
      }
      c = inner;
      have_coefficient = true;
    } else if (sc.at_number()) {
      c = Coefficient::from_token(sc.number(), negative, false);
      have_coefficient = true;
    }
    if (have_coefficient && sc.accept('*') && sc.peek() != 'z') sc.fail("expected 'z'");
    int power = 0;
    if (sc.accept('z')) {
      power = 1;
      if (sc.accept('^')) {
        const Token t = sc.number();
        if (!t.integral) sc.fail("exponent must be a non-negative integer");
        if (t.text.size() > 6) sc.fail("exponent too large");
        power = std::stoi(t.text);
      }
    } else if (!have_coefficient) {
      sc.fail("expected a term");
    }
    auto [it, inserted] = terms.try_emplace(power, c);
    if (!inserted) it->second += c;
  }
  if (terms.empty()) sc.fail("empty polynomial");
  std::vector<Coefficient> cs(static_cast<std::size_t>(terms.rbegin()->first + 1));
  for (auto& [k, c] : terms) cs[static_cast<std::size_t>(k)] = c;
  return assemble(std::move(cs));
}

}  // namespace

ParsedPolynomial parse_polynomial(std::string_view text) {
  Scanner sc(text);
  if (sc.done()) throw ParseError("empty polynomial", 0);
  if (text.find('z') != std::string_view::npos) return parse_symbolic(sc);
  return parse_list(sc);
}

ComplexPolynomial as_complex(const ParsedPolynomial& p) {
  if (const auto* ip = std::get_if<IntPolynomial>(&p)) return ip->to_complex();
  return std::get<ComplexPolynomial>(p);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  std::string im = format_double(std::abs(c.imag())) + "i";
  if (c.real() == 0.0) return (c.imag() < 0 ? "-" : "") + im;
  return format_double(c.real()) + (c.imag() < 0 ? "-" : "+") + im;
}

std::string format_polynomial(const IntPolynomial& p) {
  std::string out;
  for (int k = 0; k <= p.degree(); ++k) {
    if (k) out += ',';
    out += p[k].str();
  }
  return out;
}

std::string format_polynomial(const ComplexPolynomial& p) {
  std::string out;
  for (Eigen::Index k = 0; k <= p.degree(); ++k) {
    if (k) out += ',';
    out += format_complex(p.coeffs()[k]);
  }
  return out;
}

std::string format_polynomial(const ParsedPolynomial& p) {
  return std::visit([](const auto& q) { return format_polynomial(q); }, p);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("complex entries must be numbers or [re, im] pairs", 0);
}

}  // namespace

MatrixXc matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows", 0);
  const std::size_t n = j.size();
  MatrixXc m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw ParseError("matrix must be square", i);
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
  }
  return m;
}

nlohmann::json matrix_to_json(const MatrixXc& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

VectorXc vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("vector must be a nonempty array", 0);
  VectorXc v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

std::vector<Complex> weights_from_json(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_object() && j.contains("weights") ? j["weights"] : j;
  const VectorXc v = vector_from_json(list);
  return {v.data(), v.data() + v.size()};
}

RadialWeight radial_weight_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("r") || !j.contains("rho"))
    throw ParseError("radial weight needs \"r\" and \"rho\" arrays", 0);
  return RadialWeight::sampled(j["r"].get<std::vector<double>>(), j["rho"].get<std::vector<double>>(),
                               j.value("normalized", false));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

}  // namespace mahler
