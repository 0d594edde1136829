#pragma once

#include <memory>
#include <string>

#include "conetrace/jet.hpp"

namespace conetrace {

// Arithmetic expression in two coordinates. Grammar: numbers, pi, the
// variables x|r|u (first coordinate) and y|theta|v (second), + - * / ^,
// unary minus, and the functions sin cos exp log sqrt pow(a,b).
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text);

  Jet eval(const Jet& a, const Jet& b) const;
  double eval(double a, double b) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace conetrace
