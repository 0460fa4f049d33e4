#include "cgvf/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cgvf {

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kSqrt };

struct Expression::Node {
  Op op;
  double value = 0.0;  // kConst
  int var = 0;         // kVar
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::kConst && n->value == v;
}

NodePtr make(Op op, NodePtr a, NodePtr b = nullptr) {
  // Constant folding and identity elimination keep the derivative trees
  // small enough to evaluate in the integration loop.
  if (a && a->op == Op::kConst && (!b || b->op == Op::kConst)) {
    switch (op) {
      case Op::kAdd: return constant(a->value + b->value);
      case Op::kSub: return constant(a->value - b->value);
      case Op::kMul: return constant(a->value * b->value);
      case Op::kDiv:
        if (b->value != 0.0) return constant(a->value / b->value);
        break;
      case Op::kPow: return constant(std::pow(a->value, b->value));
      case Op::kNeg: return constant(-a->value);
      case Op::kSin: return constant(std::sin(a->value));
      case Op::kCos: return constant(std::cos(a->value));
      case Op::kSqrt: return constant(std::sqrt(a->value));
      default: break;
    }
  }
  switch (op) {
    case Op::kAdd:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::kSub:
      if (is_const(b, 0)) return a;
      break;
    case Op::kMul:
      if (is_const(a, 0) || is_const(b, 0)) return constant(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::kDiv:
      if (is_const(a, 0)) return constant(0);
      if (is_const(b, 1)) return a;
      break;
    case Op::kPow:
      if (is_const(b, 1)) return a;
      if (is_const(b, 0)) return constant(1);
      break;
    default:
      break;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval_node(const Node& n, const std::vector<double>& vals) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return vals[static_cast<size_t>(n.var)];
    case Op::kAdd: return eval_node(*n.a, vals) + eval_node(*n.b, vals);
    case Op::kSub: return eval_node(*n.a, vals) - eval_node(*n.b, vals);
    case Op::kMul: return eval_node(*n.a, vals) * eval_node(*n.b, vals);
    case Op::kDiv: return eval_node(*n.a, vals) / eval_node(*n.b, vals);
    case Op::kPow: return std::pow(eval_node(*n.a, vals), n.b->value);
    case Op::kNeg: return -eval_node(*n.a, vals);
    case Op::kSin: return std::sin(eval_node(*n.a, vals));
    case Op::kCos: return std::cos(eval_node(*n.a, vals));
    case Op::kSqrt: return std::sqrt(eval_node(*n.a, vals));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::kConst: return constant(0);
    case Op::kVar: return constant(n->var == var ? 1.0 : 0.0);
    case Op::kAdd: return make(Op::kAdd, diff_node(n->a, var), diff_node(n->b, var));
    case Op::kSub: return make(Op::kSub, diff_node(n->a, var), diff_node(n->b, var));
    case Op::kMul:
      return make(Op::kAdd, make(Op::kMul, diff_node(n->a, var), n->b),
                  make(Op::kMul, n->a, diff_node(n->b, var)));
    case Op::kDiv:
      // (a/b)' = a'/b - a b'/b^2
      return make(Op::kSub, make(Op::kDiv, diff_node(n->a, var), n->b),
                  make(Op::kDiv, make(Op::kMul, n->a, diff_node(n->b, var)),
                       make(Op::kMul, n->b, n->b)));
    case Op::kPow: {
      // exponent is a constant by construction
      double p = n->b->value;
      return make(Op::kMul,
                  make(Op::kMul, constant(p), make(Op::kPow, n->a, constant(p - 1))),
                  diff_node(n->a, var));
    }
    case Op::kNeg: return make(Op::kNeg, diff_node(n->a, var));
    case Op::kSin: return make(Op::kMul, make(Op::kCos, n->a), diff_node(n->a, var));
    case Op::kCos:
      return make(Op::kNeg, make(Op::kMul, make(Op::kSin, n->a), diff_node(n->a, var)));
    case Op::kSqrt:
      // (sqrt a)' = a' / (2 sqrt a)
      return make(Op::kDiv, diff_node(n->a, var),
                  make(Op::kMul, constant(2), make(Op::kSqrt, n->a)));
  }
  return constant(0);
}

void print_node(const Node& n, const std::vector<std::string>& vars,
                std::ostringstream& out) {
  switch (n.op) {
    case Op::kConst: out << n.value; return;
    case Op::kVar: out << vars[static_cast<size_t>(n.var)]; return;
    case Op::kNeg:
      out << "(-";
      print_node(*n.a, vars, out);
      out << ")";
      return;
    case Op::kSin:
    case Op::kCos:
    case Op::kSqrt:
      out << (n.op == Op::kSin ? "sin(" : n.op == Op::kCos ? "cos(" : "sqrt(");
      print_node(*n.a, vars, out);
      out << ")";
      return;
    default: {
      const char* sym = n.op == Op::kAdd   ? "+"
                        : n.op == Op::kSub ? "-"
                        : n.op == Op::kMul ? "*"
                        : n.op == Op::kDiv ? "/"
                                           : "^";
      out << "(";
      print_node(*n.a, vars, out);
      out << sym;
      print_node(*n.b, vars, out);
      out << ")";
      return;
    }
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression error: " + msg, 1, static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr left = parse_product();
    for (;;) {
      if (consume('+')) {
        left = make(Op::kAdd, left, parse_product());
      } else if (consume('-')) {
        left = make(Op::kSub, left, parse_product());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr left = parse_unary();
    for (;;) {
      if (consume('*')) {
        left = make(Op::kMul, left, parse_unary());
      } else if (consume('/')) {
        left = make(Op::kDiv, left, parse_unary());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return make(Op::kNeg, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      skip_ws();
      size_t at = pos_;
      NodePtr exp = parse_unary();  // right-associative
      if (exp->op != Op::kConst) {
        pos_ = at;
        fail("exponent must be a numeric constant");
      }
      return make(Op::kPow, base, exp);
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    try {
      return constant(std::stod(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("bad numeric literal");
    }
  }

  NodePtr parse_name() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") return constant(M_PI);
    if (name == "sin" || name == "cos" || name == "sqrt") {
      if (!consume('(')) fail("expected '(' after " + name);
      NodePtr arg = parse_sum();
      if (!consume(')')) fail("expected ')'");
      Op op = name == "sin" ? Op::kSin : name == "cos" ? Op::kCos : Op::kSqrt;
      return make(op, arg);
    }
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        auto n = std::make_shared<Node>();
        n->op = Op::kVar;
        n->var = static_cast<int>(i);
        return n;
      }
    }
    pos_ = start;
    fail("unknown name '" + name + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

}  // namespace

Expression::Expression(NodePtr root, std::vector<std::string> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {}

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
  Parser p(text, variables);
  return Expression(p.run(), variables);
}

double Expression::eval(const std::vector<double>& values) const {
  if (values.size() != variables_.size()) {
    throw InvalidArgument("expression expects " + std::to_string(variables_.size()) +
                          " values, got " + std::to_string(values.size()));
  }
  return eval_node(*root_, values);
}

Expression Expression::derivative(int variable) const {
  if (variable < 0 || variable >= static_cast<int>(variables_.size())) {
    throw InvalidArgument("derivative variable index out of range");
  }
  return Expression(diff_node(root_, variable), variables_);
}

std::string Expression::to_string() const {
  std::ostringstream out;
  print_node(*root_, variables_, out);
  return out.str();
}

}  // namespace cgvf
