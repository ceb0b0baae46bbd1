#include "graphdarcy/expr.hpp"

#include "graphdarcy/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace graphdarcy {

namespace {

using Kind = ExprNode::Kind;
using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_leaf(Kind k, double v = 0.0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->value = v;
  return n;
}

NodePtr make_node(Kind k, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool is_function(Kind k) {
  return k == Kind::Sin || k == Kind::Cos || k == Kind::Exp || k == Kind::Sqrt || k == Kind::Abs;
}

bool is_binary(Kind k) {
  return k == Kind::Add || k == Kind::Sub || k == Kind::Mul || k == Kind::Div || k == Kind::Pow;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : src_(s) {}

  NodePtr parse_all() {
    skip();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr e = binary(1);
    skip();
    if (pos_ < src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  int precedence(char c) const {
    if (c == '+' || c == '-') return 1;
    if (c == '*' || c == '/') return 2;
    return 0;
  }

  NodePtr binary(int min_prec) {
    NodePtr lhs = unary();
    for (;;) {
      skip();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      int p = precedence(c);
      if (p == 0 || p < min_prec) break;
      ++pos_;
      NodePtr rhs = binary(p + 1);
      Kind k = c == '+' ? Kind::Add : c == '-' ? Kind::Sub : c == '*' ? Kind::Mul : Kind::Div;
      lhs = make_node(k, lhs, rhs);
    }
    return lhs;
  }

  NodePtr unary() {
    skip();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      ++pos_;
      return make_node(Kind::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      ++pos_;
      return make_node(Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = binary(1);
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  void expect(char c) {
    skip();
    if (pos_ >= src_.size() || src_[pos_] != c) throw SyntaxError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw SyntaxError(start, "malformed number");
    return make_leaf(Kind::Number, v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make_leaf(Kind::X);
    if (name == "y") return make_leaf(Kind::Y);
    if (name == "pi") return make_leaf(Kind::Pi);
    Kind f;
    if (name == "sin") f = Kind::Sin;
    else if (name == "cos") f = Kind::Cos;
    else if (name == "exp") f = Kind::Exp;
    else if (name == "sqrt") f = Kind::Sqrt;
    else if (name == "abs") f = Kind::Abs;
    else
      throw Error(ErrorCode::UnknownIdentifier,
                  "'" + std::string(name) + "' at offset " + std::to_string(start));
    expect('(');
    NodePtr arg = binary(1);
    expect(')');
    return make_node(f, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void emit(const ExprNode& n, std::vector<std::pair<Kind, double>>& out) {
  if (n.lhs) emit(*n.lhs, out);
  if (n.rhs) emit(*n.rhs, out);
  out.push_back({n.kind, n.value});
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Kind::X: out += "x"; return;
    case Kind::Y: out += "y"; return;
    case Kind::Pi: out += "pi"; return;
    case Kind::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ")";
      return;
    default: break;
  }
  if (is_function(n.kind)) {
    static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs"};
    out += names[int(n.kind) - int(Kind::Sin)];
    out += "(";
    print_node(*n.lhs, out);
    out += ")";
    return;
  }
  static const char* ops[] = {" + ", " - ", " * ", " / ", " ^ "};
  out += "(";
  print_node(*n.lhs, out);
  out += ops[int(n.kind) - int(Kind::Add)];
  print_node(*n.rhs, out);
  out += ")";
}

}  // namespace

Expr::Expr() : root_(make_leaf(Kind::Number, 0.0)) { compile(); }

Expr Expr::constant(double v) { return from_tree(make_leaf(Kind::Number, v)); }

Expr from_tree(std::shared_ptr<const ExprNode> root) {
  Expr e;
  e.root_ = std::move(root);
  e.compile();
  return e;
}

void Expr::compile() {
  std::vector<std::pair<Kind, double>> flat;
  emit(*root_, flat);
  program_.clear();
  int depth = 0;
  max_depth_ = 0;
  for (auto& [k, v] : flat) {
    program_.push_back({k, v});
    if (k == Kind::Number || k == Kind::X || k == Kind::Y || k == Kind::Pi)
      ++depth;
    else if (is_binary(k))
      --depth;
    max_depth_ = std::max(max_depth_, depth);
  }
}

double Expr::eval(double x, double y) const {
  constexpr int kInline = 64;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    st = heap.data();
  }
  int sp = 0;
  for (const Op& op : program_) {
    switch (op.kind) {
      case Kind::Number: st[sp++] = op.value; break;
      case Kind::X: st[sp++] = x; break;
      case Kind::Y: st[sp++] = y; break;
      case Kind::Pi: st[sp++] = std::numbers::pi; break;
      case Kind::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Kind::Add: --sp; st[sp - 1] += st[sp]; break;
      case Kind::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Kind::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Kind::Div:
        --sp;
        if (st[sp] == 0.0) throw Error(ErrorCode::DomainError, "division by zero");
        st[sp - 1] /= st[sp];
        break;
      case Kind::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Kind::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Kind::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Kind::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Kind::Sqrt:
        if (st[sp - 1] < 0.0) throw Error(ErrorCode::DomainError, "sqrt of negative number");
        st[sp - 1] = std::sqrt(st[sp - 1]);
        break;
      case Kind::Abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
    }
  }
  return st[0];
}

Expr parse(std::string_view src) {
  Parser p(src);
  return from_tree(p.parse_all());
}

std::string print(const Expr& e) {
  std::string out;
  print_node(e.root(), out);
  return out;
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Number && !(a.value == b.value || (std::isnan(a.value) && std::isnan(b.value)))) return false;
  if (bool(a.lhs) != bool(b.lhs) || bool(a.rhs) != bool(b.rhs)) return false;
  if (a.lhs && !same_tree(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !same_tree(*a.rhs, *b.rhs)) return false;
  return true;
}

double eval(const Expr& e, double x, double y) { return e.eval(x, y); }

}  // namespace graphdarcy
