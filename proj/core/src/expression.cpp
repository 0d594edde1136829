#include "conetrace/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "conetrace/errors.hpp"

namespace conetrace {

struct Expression::Node {
  enum class Op { Const, Var0, Var1, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };
  Op op = Op::Const;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  template <class T>
  T eval(const T& x, const T& y) const {
    using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
    switch (op) {
      case Op::Const: return T(value);
      case Op::Var0: return x;
      case Op::Var1: return y;
      case Op::Add: return a->eval(x, y) + b->eval(x, y);
      case Op::Sub: return a->eval(x, y) - b->eval(x, y);
      case Op::Mul: return a->eval(x, y) * b->eval(x, y);
      case Op::Div: return a->eval(x, y) / b->eval(x, y);
      case Op::Pow: return pow(a->eval(x, y), b->eval(x, y));
      case Op::Neg: return -a->eval(x, y);
      case Op::Sin: return sin(a->eval(x, y));
      case Op::Cos: return cos(a->eval(x, y));
      case Op::Exp: return exp(a->eval(x, y));
      case Op::Log: return log(a->eval(x, y));
      case Op::Sqrt: return sqrt(a->eval(x, y));
    }
    return T(0.0);
  }
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodeP make(Op op, NodeP a = nullptr, NodeP b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodeP parse() {
    NodeP n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ConfigError,
                "expression '" + s_ + "': " + msg + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodeP sum() {
    NodeP n = product();
    while (true) {
      if (accept('+')) n = make(Op::Add, n, product());
      else if (accept('-')) n = make(Op::Sub, n, product());
      else return n;
    }
  }
  NodeP product() {
    NodeP n = unary();
    while (true) {
      if (accept('*')) n = make(Op::Mul, n, unary());
      else if (accept('/')) n = make(Op::Div, n, unary());
      else return n;
    }
  }
  NodeP unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodeP power() {
    NodeP base = atom();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }
  NodeP atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodeP n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Op::Const, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "x" || id == "r" || id == "u") return make(Op::Var0);
      if (id == "y" || id == "theta" || id == "v") return make(Op::Var1);
      if (id == "pi") return make(Op::Const, nullptr, nullptr, std::numbers::pi);
      static const std::vector<std::pair<std::string, Op>> fns = {
          {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
      for (const auto& [name, op] : fns) {
        if (id == name) {
          if (!accept('(')) fail("expected '(' after " + id);
          NodeP arg = sum();
          if (!accept(')')) fail("expected ')'");
          return make(op, arg);
        }
      }
      if (id == "pow") {
        if (!accept('(')) fail("expected '(' after pow");
        NodeP a = sum();
        if (!accept(',')) fail("expected ','");
        NodeP b = sum();
        if (!accept(')')) fail("expected ')'");
        return make(Op::Pow, a, b);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

Jet Expression::eval(const Jet& a, const Jet& b) const { return root_->eval(a, b); }

double Expression::eval(double a, double b) const { return root_->eval(a, b); }

}  // namespace conetrace
