#pragma once

// Text formats: polynomials as ascending coefficient lists or symbolic sums,
// complex matrices, vectors and radial weights as JSON.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mahler/areal.hpp"
#include "mahler/operator.hpp"
#include "mahler/poly.hpp"

namespace mahler {

using ParsedPolynomial = std::variant<IntPolynomial, ComplexPolynomial>;

/// "1,1,0,-1", "1.5,2-3i,i" or "z^10+z^9-z^7+3*z-2". Integer-valued input yields IntPolynomial.
ParsedPolynomial parse_polynomial(std::string_view text);

/// Either alternative as a complex polynomial.
ComplexPolynomial as_complex(const ParsedPolynomial& p);

/// Canonical ascending coefficient list, no trailing zeros.
std::string format_polynomial(const IntPolynomial& p);
std::string format_polynomial(const ComplexPolynomial& p);
std::string format_polynomial(const ParsedPolynomial& p);

/// Shortest round-trip decimal form.
std::string format_double(double x);
std::string format_complex(Complex c);

/// Row-major array of rows; an entry is [re, im] or a plain number.
MatrixXc matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const MatrixXc& m);
VectorXc vector_from_json(const nlohmann::json& j);
std::vector<Complex> weights_from_json(const nlohmann::json& j);
/// {"r": [...], "rho": [...], "normalized": bool}.
RadialWeight radial_weight_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace mahler
