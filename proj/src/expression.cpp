#include "jsgraph/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

#include "jsgraph/errors.hpp"

namespace jsgraph {

struct Expression::Node {
  enum class Op { num, var_x, var_y, neg, add, sub, mul, div, pow, exp, log, cos, sin, sqrt };
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::num;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::num && n->value == v; }

// light constant folding so derivatives stay small
NodePtr simplify(Op op, NodePtr a, NodePtr b) {
  switch (op) {
    case Op::add:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::sub:
      if (is_const(b, 0)) return a;
      break;
    case Op::mul:
      if (is_const(a, 0) || is_const(b, 0)) return num(0.0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::div:
      if (is_const(a, 0)) return num(0.0);
      if (is_const(b, 1)) return a;
      break;
    default:
      break;
  }
  return make(op, std::move(a), std::move(b));
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression: " + what + " at position " + std::to_string(pos_) +
                     " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Op::add, lhs, term());
      else if (eat('-')) lhs = make(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::mul, lhs, unary());
      else if (eat('/')) lhs = make(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Op::pow, base, unary());  // right associative
    return base;
  }

  NodePtr atom() {
    const char c = peek();
    if (c == '(') {
      eat('(');
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    fail("expected number, name, or '('");
  }

  NodePtr number() {
    skip_ws();
    size_t end = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &end);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += end;
    return num(v);
  }

  NodePtr ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return make(Op::var_x);
    if (name == "y") return make(Op::var_y);
    if (name == "pi") return num(M_PI);
    if (name == "e") return num(M_E);
    Op op;
    if (name == "exp") op = Op::exp;
    else if (name == "log") op = Op::log;
    else if (name == "cos") op = Op::cos;
    else if (name == "sin") op = Op::sin;
    else if (name == "sqrt") op = Op::sqrt;
    else { pos_ = start; fail("unknown symbol '" + name + "'"); }
    if (!eat('(')) fail("expected '(' after " + name);
    NodePtr arg = expr();
    if (!eat(')')) fail("missing ')'");
    return make(op, arg);
  }
};

double eval_node(const Node* n, double x, double y) {
  switch (n->op) {
    case Op::num: return n->value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::neg: return -eval_node(n->a.get(), x, y);
    case Op::add: return eval_node(n->a.get(), x, y) + eval_node(n->b.get(), x, y);
    case Op::sub: return eval_node(n->a.get(), x, y) - eval_node(n->b.get(), x, y);
    case Op::mul: return eval_node(n->a.get(), x, y) * eval_node(n->b.get(), x, y);
    case Op::div: return eval_node(n->a.get(), x, y) / eval_node(n->b.get(), x, y);
    case Op::pow: return std::pow(eval_node(n->a.get(), x, y), eval_node(n->b.get(), x, y));
    case Op::exp: return std::exp(eval_node(n->a.get(), x, y));
    case Op::log: return std::log(eval_node(n->a.get(), x, y));
    case Op::cos: return std::cos(eval_node(n->a.get(), x, y));
    case Op::sin: return std::sin(eval_node(n->a.get(), x, y));
    case Op::sqrt: return std::sqrt(eval_node(n->a.get(), x, y));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, char var) {
  switch (n->op) {
    case Op::num: return num(0.0);
    case Op::var_x: return num(var == 'x' ? 1.0 : 0.0);
    case Op::var_y: return num(var == 'y' ? 1.0 : 0.0);
    case Op::neg: return make(Op::neg, diff(n->a, var));
    case Op::add: return simplify(Op::add, diff(n->a, var), diff(n->b, var));
    case Op::sub: return simplify(Op::sub, diff(n->a, var), diff(n->b, var));
    case Op::mul:
      return simplify(Op::add, simplify(Op::mul, diff(n->a, var), n->b),
                      simplify(Op::mul, n->a, diff(n->b, var)));
    case Op::div:
      // (a'b - ab') / b^2
      return simplify(Op::div,
                      simplify(Op::sub, simplify(Op::mul, diff(n->a, var), n->b),
                               simplify(Op::mul, n->a, diff(n->b, var))),
                      simplify(Op::mul, n->b, n->b));
    case Op::pow: {
      NodePtr da = diff(n->a, var), db = diff(n->b, var);
      if (n->b->op == Op::num) {
        // constant exponent: b a^(b-1) a' (no spurious 1/a singularity)
        const double p = n->b->value;
        NodePtr down = p == 2.0 ? n->a : make(Op::pow, n->a, num(p - 1.0));
        return simplify(Op::mul, simplify(Op::mul, num(p), down), da);
      }
      // general rule: a^b (b' log a + b a'/a)
      NodePtr t1 = simplify(Op::mul, db, make(Op::log, n->a));
      NodePtr t2 = simplify(Op::mul, n->b, simplify(Op::div, da, n->a));
      return simplify(Op::mul, make(Op::pow, n->a, n->b), simplify(Op::add, t1, t2));
    }
    case Op::exp: return simplify(Op::mul, make(Op::exp, n->a), diff(n->a, var));
    case Op::log: return simplify(Op::div, diff(n->a, var), n->a);
    case Op::cos:
      return simplify(Op::mul, make(Op::neg, make(Op::sin, n->a)), diff(n->a, var));
    case Op::sin: return simplify(Op::mul, make(Op::cos, n->a), diff(n->a, var));
    case Op::sqrt:
      return simplify(Op::div, diff(n->a, var),
                      simplify(Op::mul, num(2.0), make(Op::sqrt, n->a)));
  }
  return num(0.0);
}

std::string to_text(const Node* n);

std::string paren(const Node* n) { return "(" + to_text(n) + ")"; }

std::string to_text(const Node* n) {
  switch (n->op) {
    case Op::num: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      return buf;
    }
    case Op::var_x: return "x";
    case Op::var_y: return "y";
    case Op::neg: return "-" + paren(n->a.get());
    case Op::add: return paren(n->a.get()) + "+" + paren(n->b.get());
    case Op::sub: return paren(n->a.get()) + "-" + paren(n->b.get());
    case Op::mul: return paren(n->a.get()) + "*" + paren(n->b.get());
    case Op::div: return paren(n->a.get()) + "/" + paren(n->b.get());
    case Op::pow: return paren(n->a.get()) + "^" + paren(n->b.get());
    case Op::exp: return "exp" + paren(n->a.get());
    case Op::log: return "log" + paren(n->a.get());
    case Op::cos: return "cos" + paren(n->a.get());
    case Op::sin: return "sin" + paren(n->a.get());
    case Op::sqrt: return "sqrt" + paren(n->a.get());
  }
  return "";
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expression::eval(double x, double y) const {
  if (!root_) throw NumericError("eval of empty expression");
  return eval_node(root_.get(), x, y);
}

Expression Expression::derivative(char var) const {
  if (!root_) throw NumericError("derivative of empty expression");
  Expression e;
  e.root_ = diff(root_, var);
  e.text_ = to_text(e.root_.get());
  return e;
}

}  // namespace jsgraph
