/**
 * @file expr.hpp
 * @brief Arithmetic expressions in x and y, compiled to a stack program.
 *
 * Grammar: binary + - * / ^, unary -, functions sin cos exp sqrt abs, constant pi.
 * ^ is right-associative and binds tighter than unary minus.
 */
#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace graphdarcy {

struct ExprNode {
  enum class Kind { Number, X, Y, Pi, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Abs };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::shared_ptr<const ExprNode> lhs, rhs;  // rhs only for binary nodes
};

class Expr {
 public:
  Expr();  // the constant 0
  static Expr constant(double v);

  /// Throws DomainError on division by zero or sqrt of a negative number.
  double eval(double x, double y) const;
  double operator()(double x, double y) const { return eval(x, y); }

  const ExprNode& root() const { return *root_; }
  std::shared_ptr<const ExprNode> root_ptr() const { return root_; }

  friend Expr parse(std::string_view src);
  friend Expr from_tree(std::shared_ptr<const ExprNode> root);

 private:
  struct Op {
    ExprNode::Kind kind;
    double value;
  };
  void compile();

  std::shared_ptr<const ExprNode> root_;
  std::vector<Op> program_;
  int max_depth_ = 0;
};

/// Throws SyntaxError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view src);
Expr from_tree(std::shared_ptr<const ExprNode> root);

/// Canonical, fully parenthesized text; parse(print(e)) has the same tree as e.
std::string print(const Expr& e);

bool same_tree(const ExprNode& a, const ExprNode& b);

double eval(const Expr& e, double x, double y);

}  // namespace graphdarcy
