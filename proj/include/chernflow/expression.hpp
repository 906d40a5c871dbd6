#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace chernflow {

// Arithmetic expression in the node coordinates x1, x2, ... used for
// user-supplied field recipes, e.g. "-1 + 0.3*cos(2*pi*x1)*sin(2*pi*x2)".
//
// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
// constants pi and e, variables x1..x<k>, and the functions sin, cos, tan,
// exp, log, sqrt, abs, tanh, sinh, cosh.
class Expression {
 public:
  // Throws Error(BadRecipe) on syntax errors or variables beyond x<max_variable>.
  static Expression parse(std::string_view text, int max_variable);

  double evaluate(std::span<const double> x) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace chernflow
