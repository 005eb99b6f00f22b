#pragma once

// Rational expressions r(z, w) selecting f = r(z, 𝔣(z)).
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := 'z' | 'w' | number | number 'i' | '(' expr ')' | '-' factor
//
// Numbers are decimal (digits, optional fraction, optional exponent) and are
// kept as text so they can be rounded into any working precision.

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "hplab/mp.hpp"

namespace hplab {

/// Complex constant stored as exact decimal text.
struct ComplexLiteral {
  std::string re = "0";
  std::string im = "0";

  static ComplexLiteral real(std::string text) { return {std::move(text), "0"}; }
  static ComplexLiteral imaginary(std::string text) { return {"0", std::move(text)}; }

  mp::Complex value(mp::Prec prec) const;
  std::complex<double> to_std() const;
  bool is_real() const;
  bool is_zero() const;
  ComplexLiteral negated() const;
  /// "1.5", "2i", "-3", "(1+2i)"
  std::string to_string() const;
};

/// Parses "a", "bi", "a+bi", "a-bi" (whitespace allowed).
ComplexLiteral parse_complex_literal(std::string_view text);

enum class Variable { Z, W };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct VariableNode {
  Variable var;
};
struct LiteralNode {
  ComplexLiteral value;
};
struct BinaryNode {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct ExprNode {
  std::variant<VariableNode, LiteralNode, BinaryNode> node;
};

/// Immutable expression tree; cheap to copy and safe to share.
class ExpressionAST {
 public:
  ExpressionAST() = default;
  explicit ExpressionAST(ExprPtr root) : root_(std::move(root)) {}

  static ExpressionAST variable(Variable v);
  static ExpressionAST literal(ComplexLiteral c);
  static ExpressionAST binary(BinaryOp op, const ExpressionAST& lhs, const ExpressionAST& rhs);

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  /// Canonical text: minimal parentheses that preserve the tree.
  std::string to_string() const;
  /// Debug form such as Div(Add(Mul(z,w),1),Sub(z,2)).
  std::string to_tree_string() const;

  friend bool operator==(const ExpressionAST& a, const ExpressionAST& b);

 private:
  ExprPtr root_;
};

ExpressionAST parse_expression(std::string_view text);

/// Evaluates the tree with a policy providing lit/add/sub/mul/div.
template <class T, class Policy>
T evaluate(const ExprNode& node, const T& z, const T& w, Policy& policy) {
  return std::visit(
      [&](const auto& n) -> T {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, VariableNode>) {
          return n.var == Variable::Z ? z : w;
        } else if constexpr (std::is_same_v<N, LiteralNode>) {
          return policy.lit(n.value);
        } else {
          T a = evaluate(*n.lhs, z, w, policy);
          T b = evaluate(*n.rhs, z, w, policy);
          switch (n.op) {
            case BinaryOp::Add: return policy.add(a, b);
            case BinaryOp::Sub: return policy.sub(a, b);
            case BinaryOp::Mul: return policy.mul(a, b);
            case BinaryOp::Div: return policy.div(a, b);
          }
          return a;
        }
      },
      node.node);
}

}  // namespace hplab
