#pragma once

#include <memory>
#include <string>

namespace jsgraph {

/// Scalar expression in the variables x and y.
///
/// Grammar: numbers, x, y, pi, e, unary minus, + - * / ^,
/// and the calls exp, log, cos, sin, sqrt. Evaluation is pure and
/// deterministic: identical inputs yield bit-identical outputs.
class Expression {
 public:
  Expression() = default;

  static Expression parse(const std::string& text);  // throws ParseError

  double eval(double x, double y) const;

  // exact symbolic partial derivative, var is 'x' or 'y'
  Expression derivative(char var) const;

  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace jsgraph
