#include "fflab/polyexpr.hpp"

#include <cctype>
#include <limits>

namespace fflab {

namespace {
constexpr std::int64_t kMaxLiteral = std::numeric_limits<std::int32_t>::max();
}

// Recursive-descent parser for the grammar in the header.
class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  PolyExpr run() {
    PolyExpr out;
    out.text_ = std::string(text_);
    expr_ = &out;
    out.root_ = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    if (out.arity_ == 0) fail("expression uses no variable");
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  PolyExpr* expr_ = nullptr;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("polynomial parse error at offset " + std::to_string(pos_) +
                     ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
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

  int add_node(PolyExpr::Node n) {
    expr_->nodes_.push_back(n);
    return static_cast<int>(expr_->nodes_.size() - 1);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        int rhs = parse_term();
        lhs = add_node({PolyExpr::Op::Add, 0, lhs, rhs});
      } else if (eat('-')) {
        int rhs = parse_term();
        lhs = add_node({PolyExpr::Op::Sub, 0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    while (eat('*')) {
      int rhs = parse_factor();
      lhs = add_node({PolyExpr::Op::Mul, 0, lhs, rhs});
    }
    return lhs;
  }

  int parse_factor() {
    if (eat('-')) {
      int inner = parse_factor();
      return add_node({PolyExpr::Op::Neg, 0, inner, -1});
    }
    return parse_primary();
  }

  int parse_primary() {
    const char c = peek();
    if (c == '(') {
      eat('(');
      int inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'v') {
      ++pos_;
      std::int64_t idx = parse_digits("variable index");
      if (idx < 1) fail("variable index must be >= 1");
      if (idx > 64) fail("variable index exceeds 64");
      expr_->arity_ = std::max(expr_->arity_, static_cast<unsigned>(idx));
      return add_node({PolyExpr::Op::Var, idx, -1, -1});
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = parse_digits("integer literal");
      return add_node({PolyExpr::Op::Const, v, -1, -1});
    }
    fail("expected variable, integer, or '('");
  }

  std::int64_t parse_digits(const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected digits for " + what);
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > kMaxLiteral) fail(what + " exceeds 2^31-1");
      ++pos_;
    }
    return v;
  }
};

PolyExpr PolyExpr::parse(std::string_view text) { return PolyParser(text).run(); }

Elem PolyExpr::eval(const PrimeField& f, std::span<const Elem> args) const {
  if (args.size() < arity_) {
    throw SizeOutOfRange("polynomial of arity " + std::to_string(arity_) +
                         " given " + std::to_string(args.size()) + " arguments");
  }
  // Nodes are in post-order of construction: children precede parents.
  std::vector<Elem> val(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const: val[i] = f.reduce(n.value); break;
      case Op::Var: val[i] = args[static_cast<std::size_t>(n.value) - 1]; break;
      case Op::Add: val[i] = f.add(val[n.lhs], val[n.rhs]); break;
      case Op::Sub: val[i] = f.sub(val[n.lhs], val[n.rhs]); break;
      case Op::Mul: val[i] = f.mul(val[n.lhs], val[n.rhs]); break;
      case Op::Neg: val[i] = f.neg(val[n.lhs]); break;
    }
  }
  return val[root_];
}

}  // namespace fflab
