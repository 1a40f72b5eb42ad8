#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qcgeom {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 6;

enum class ExprKind {
  Variable,
  Constant,
  // unary
  Neg,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Tanh,
  Exp,
  Log,
  Sqrt,
  Atan,
  FlatStep,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

bool is_unary(ExprKind kind);
bool is_binary(ExprKind kind);
// Function-call name for unary ops ("sin", ...); empty for Neg.
std::string_view function_name(ExprKind kind);

// Expression tree over chart coordinates x0..x{n-1}. Constants are finite and
// non-negative: a leading minus always parses as a Neg node.
struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  int var = 0;
  double value = 0.0;
  std::vector<ExprNode> args;

  static ExprNode variable(int index);
  static ExprNode constant(double v);
  static ExprNode unary(ExprKind kind, ExprNode arg);
  static ExprNode binary(ExprKind kind, ExprNode lhs, ExprNode rhs);

  bool operator==(const ExprNode&) const = default;
};

using ExprAst = ExprNode;

// True when the subtree contains no coordinate variables.
bool is_constant_expr(const ExprNode& node);
// Folds a variable-free subtree to a number.
double fold_constant(const ExprNode& node);
// Largest variable index used, or -1.
int max_variable(const ExprNode& node);

// Grammar (highest precedence first):
//   atom    := number | ident | ident '(' expr ')' | '(' expr ')'
//   power   := atom ['^' unary]           (right associative)
//   unary   := '-' unary | '+' unary | power
//   term    := unary {('*' | '/') unary}
//   expr    := term {('+' | '-') term}
// Identifiers are x0..x{n-1}, the optional aliases (aliases[i] names x_i),
// the constant `pi`, and the unary functions.
ExprNode parse_expr(std::string_view src, int dimension, const std::vector<std::string>& aliases = {});

// Fully parenthesised canonical form; numbers printed with 17 significant
// digits so that parse(print(ast)) == ast.
std::string to_string(const ExprNode& node);

}  // namespace qcgeom
