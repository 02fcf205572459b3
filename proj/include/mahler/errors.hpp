#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mahler {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Text that does not follow the polynomial grammar. `position` is a byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The root finder ran out of iterations. Carries the best iterate it had.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<std::complex<double>> best, double residual)
      : Error(what), best_(std::move(best)), residual_(residual) {}
  const std::vector<std::complex<double>>& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<std::complex<double>> best_;
  double residual_;
};

/// A decision procedure could not reach a verdict (distinct from "false").
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// A rank decision sits too close to the singular-value threshold.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double ratio) : Error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// Lehmer search refused because the lattice is larger than the configured cap.
class SearchRefusedError : public Error {
 public:
  SearchRefusedError(const std::string& what, double cardinality)
      : Error(what), cardinality_(cardinality) {}
  double cardinality() const noexcept { return cardinality_; }

 private:
  double cardinality_;
};

}  // namespace mahler
