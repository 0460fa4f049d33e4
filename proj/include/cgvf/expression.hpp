#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cgvf/errors.hpp"

namespace cgvf {

/// A parsed scalar expression in the variables w (one-parameter sets) or
/// w1, w2 (two-parameter sets).
///
/// Grammar: + - * / ^ (constant exponent), unary minus, parentheses,
/// sin, cos, sqrt, the constant pi and numeric literals. Expressions are
/// differentiated symbolically, so parametric sets defined this way get
/// exact first and second partials.
class Expression {
 public:
  /// Parses `text` over the given variable names (e.g. {"w"} or
  /// {"w1","w2"}). Throws ParseError with position info on bad input.
  static Expression parse(const std::string& text,
                          const std::vector<std::string>& variables);

  /// Evaluates at the given variable values (aligned with the variable
  /// list passed to parse).
  double eval(const std::vector<double>& values) const;

  /// Symbolic partial derivative with respect to variable index (0-based).
  Expression derivative(int variable) const;

  /// Parenthesized rendering, mostly for diagnostics and tests.
  std::string to_string() const;

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

 private:
  Expression(NodePtr root, std::vector<std::string> variables);
  NodePtr root_;
  std::vector<std::string> variables_;
};

}  // namespace cgvf
