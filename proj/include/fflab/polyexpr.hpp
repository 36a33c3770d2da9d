#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

// Multivariate integer polynomial over variables v1..vm, stored as a flat
// expression tree. Grammar (documented in docs/formats.md):
//   expr    = term { ("+" | "-") term }
//   term    = factor { "*" factor }
//   factor  = [ "-" ] primary
//   primary = var | integer | "(" expr ")"
//   var     = "v" digit { digit }       (1-based index)
//   integer = digit { digit }           (magnitude < 2^31)
class PolyExpr {
 public:
  static PolyExpr parse(std::string_view text);  // ParseError on bad input

  // Highest variable index seen; at least 1 (pure constants are rejected).
  unsigned arity() const { return arity_; }

  // Evaluates mod q. args[i] binds v(i+1); args.size() must be >= arity().
  Elem eval(const PrimeField& f, std::span<const Elem> args) const;

  const std::string& text() const { return text_; }

 private:
  enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Neg };
  struct Node {
    Op op;
    std::int64_t value = 0;  // Const payload or 1-based Var index
    int lhs = -1, rhs = -1;
  };

  PolyExpr() = default;
  int root_ = -1;
  unsigned arity_ = 0;
  std::vector<Node> nodes_;
  std::string text_;

  friend class PolyParser;
};

}  // namespace fflab
