#include "hplab/expression.hpp"

#include <cctype>

#include "hplab/error.hpp"

namespace hplab {

namespace {

std::string negate_text(const std::string& t) {
  if (t.empty()) return "-0";
  if (t[0] == '-') return t.substr(1);
  if (t[0] == '+') return "-" + t.substr(1);
  return "-" + t;
}

bool text_is_zero(const std::string& t) {
  for (char c : t) {
    if (c == 'e' || c == 'E') break;
    if (c >= '1' && c <= '9') return false;
  }
  return true;
}

std::size_t scan_number(std::string_view s, std::size_t i) {
  std::size_t j = i;
  bool digits = false;
  while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j, digits = true;
  if (j < s.size() && s[j] == '.') {
    ++j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j, digits = true;
  }
  if (!digits) return i;
  if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
    std::size_t k = j + 1;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
    std::size_t d = k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k > d) j = k;
  }
  return j;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExpressionAST parse() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_ + 1);
    ExpressionAST e = expr();
    skip_ws();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_ + 1);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExpressionAST expr() {
    ExpressionAST lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = ExpressionAST::binary(BinaryOp::Add, lhs, term());
      else if (accept('-'))
        lhs = ExpressionAST::binary(BinaryOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  ExpressionAST term() {
    ExpressionAST lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = ExpressionAST::binary(BinaryOp::Mul, lhs, factor());
      else if (accept('/'))
        lhs = ExpressionAST::binary(BinaryOp::Div, lhs, factor());
      else
        return lhs;
    }
  }

  ExpressionAST factor() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_ + 1);
    const char c = s_[pos_];
    if (c == 'z' || c == 'w') {
      ++pos_;
      return ExpressionAST::variable(c == 'z' ? Variable::Z : Variable::W);
    }
    if (c == '(') {
      ++pos_;
      ExpressionAST e = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_ + 1);
      return e;
    }
    if (c == '-') {
      ++pos_;
      ExpressionAST inner = factor();
      if (const auto* lit = std::get_if<LiteralNode>(&inner.root().node))
        return ExpressionAST::literal(lit->value.negated());
      return ExpressionAST::binary(BinaryOp::Sub, ExpressionAST::literal(ComplexLiteral::real("0")),
                                   inner);
    }
    const std::size_t end = scan_number(s_, pos_);
    if (end == pos_) throw ParseError(std::string("unexpected '") + c + "'", pos_ + 1);
    std::string text(s_.substr(pos_, end - pos_));
    pos_ = end;
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return ExpressionAST::literal(ComplexLiteral::imaginary(std::move(text)));
    }
    return ExpressionAST::literal(ComplexLiteral::real(std::move(text)));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// Precedence levels for printing: 1 = sum, 2 = product, 3 = factor.
int level(const ExprNode& n) {
  if (const auto* b = std::get_if<BinaryNode>(&n.node)) {
    if (b->op == BinaryOp::Sub) {
      const auto* l = std::get_if<LiteralNode>(&b->lhs->node);
      if (l && l->value.re == "0" && l->value.im == "0") return 3;  // unary minus
    }
    return (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) ? 1 : 2;
  }
  return 3;
}

std::string print(const ExprNode& n);

std::string print_at(const ExprNode& n, int min_level) {
  std::string s = print(n);
  return level(n) < min_level ? "(" + s + ")" : s;
}

std::string print(const ExprNode& n) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using N = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<N, VariableNode>) {
          return v.var == Variable::Z ? "z" : "w";
        } else if constexpr (std::is_same_v<N, LiteralNode>) {
          return v.value.to_string();
        } else {
          if (level(n) == 3) return "-" + print_at(*v.rhs, 3);
          switch (v.op) {
            case BinaryOp::Add: return print_at(*v.lhs, 1) + "+" + print_at(*v.rhs, 2);
            case BinaryOp::Sub: return print_at(*v.lhs, 1) + "-" + print_at(*v.rhs, 2);
            case BinaryOp::Mul: return print_at(*v.lhs, 2) + "*" + print_at(*v.rhs, 3);
            case BinaryOp::Div: return print_at(*v.lhs, 2) + "/" + print_at(*v.rhs, 3);
          }
          return {};
        }
      },
      n.node);
}

std::string tree(const ExprNode& n) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using N = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<N, VariableNode>) {
          return v.var == Variable::Z ? "z" : "w";
        } else if constexpr (std::is_same_v<N, LiteralNode>) {
          return v.value.to_string();
        } else {
          static const char* names[] = {"Add", "Sub", "Mul", "Div"};
          return std::string(names[static_cast<int>(v.op)]) + "(" + tree(*v.lhs) + "," + tree(*v.rhs) + ")";
        }
      },
      n.node);
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* va = std::get_if<VariableNode>(&a.node)) return va->var == std::get<VariableNode>(b.node).var;
  if (const auto* la = std::get_if<LiteralNode>(&a.node)) {
    const auto& lb = std::get<LiteralNode>(b.node);
    return la->value.re == lb.value.re && la->value.im == lb.value.im;
  }
  const auto& ba = std::get<BinaryNode>(a.node);
  const auto& bb = std::get<BinaryNode>(b.node);
  return ba.op == bb.op && equal(*ba.lhs, *bb.lhs) && equal(*ba.rhs, *bb.rhs);
}

}  // namespace

mp::Complex ComplexLiteral::value(mp::Prec prec) const {
  return {mp::Real::from_string(re, prec), mp::Real::from_string(im, prec)};
}

std::complex<double> ComplexLiteral::to_std() const { return {std::stod(re), std::stod(im)}; }

bool ComplexLiteral::is_real() const { return text_is_zero(im); }
bool ComplexLiteral::is_zero() const { return text_is_zero(re) && text_is_zero(im); }

ComplexLiteral ComplexLiteral::negated() const {
  return {text_is_zero(re) ? re : negate_text(re), text_is_zero(im) ? im : negate_text(im)};
}

std::string ComplexLiteral::to_string() const {
  const bool has_re = !text_is_zero(re) || text_is_zero(im);
  const bool has_im = !text_is_zero(im);
  if (!has_im) return re;
  if (!has_re) return im + "i";
  return "(" + re + (im[0] == '-' ? "" : "+") + im + "i)";
}

ComplexLiteral parse_complex_literal(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ValidationError("empty complex literal");
  auto signed_number = [&](std::size_t& i) -> std::string {
    std::size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t end = scan_number(s, i);
    if (end == i) throw ValidationError("malformed complex literal '" + s + "'");
    std::string out = s.substr(start, end - start);
    if (!out.empty() && out[0] == '+') out.erase(0, 1);
    i = end;
    return out;
  };
  std::size_t i = 0;
  std::string first = signed_number(i);
  if (i == s.size()) return ComplexLiteral::real(first);
  if (s[i] == 'i' && i + 1 == s.size()) return ComplexLiteral::imaginary(first);
  std::string second = signed_number(i);
  if (i + 1 != s.size() || s[i] != 'i') throw ValidationError("malformed complex literal '" + s + "'");
  return {first, second};
}

ExpressionAST ExpressionAST::variable(Variable v) {
  return ExpressionAST(std::make_shared<const ExprNode>(ExprNode{VariableNode{v}}));
}
ExpressionAST ExpressionAST::literal(ComplexLiteral c) {
  return ExpressionAST(std::make_shared<const ExprNode>(ExprNode{LiteralNode{std::move(c)}}));
}
ExpressionAST ExpressionAST::binary(BinaryOp op, const ExpressionAST& lhs, const ExpressionAST& rhs) {
  return ExpressionAST(std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, lhs.root_, rhs.root_}}));
}

std::string ExpressionAST::to_string() const { return root_ ? print(*root_) : std::string(); }
std::string ExpressionAST::to_tree_string() const { return root_ ? tree(*root_) : std::string(); }

bool operator==(const ExpressionAST& a, const ExpressionAST& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return equal(*a.root_, *b.root_);
}

ExpressionAST parse_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace hplab
