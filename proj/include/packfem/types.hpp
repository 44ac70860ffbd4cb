#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace packfem {

using Real = double;
// Node, element and CSR positions. 32 bits covers every desk-scale mesh and
// halves the bandwidth of the scatter maps.
using Index = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: sizes, extents, flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class InvertedElementError : public Error {
 public:
  InvertedElementError(Index element, int gauss_point, Real det, const std::string& where = {})
      : Error("inverted element " + std::to_string(element) + " (det J = " + std::to_string(det) +
              " at gauss point " + std::to_string(gauss_point) + ")" + where),
        element_(element),
        gauss_point_(gauss_point),
        det_(det) {}
  Index element() const noexcept { return element_; }
  int gauss_point() const noexcept { return gauss_point_; }
  Real det() const noexcept { return det_; }

 private:
  Index element_;
  int gauss_point_;
  Real det_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken (e.g. an element entry missing from a CSR pattern).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class SingularPreconditionerError : public Error {
 public:
  SingularPreconditionerError(Index row)
      : Error("missing or zero diagonal in row " + std::to_string(row)), row_(row) {}
  Index row() const noexcept { return row_; }

 private:
  Index row_;
};

class BreakdownError : public Error {
 public:
  BreakdownError(int iteration, Real curvature)
      : Error("CG breakdown at iteration " + std::to_string(iteration) +
              ": p'Ap = " + std::to_string(curvature)),
        iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// NaN or Inf appeared in the flow state.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace packfem
