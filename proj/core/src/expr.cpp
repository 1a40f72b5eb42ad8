#include "qcgeom/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

struct FunctionEntry {
  std::string_view name;
  ExprKind kind;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", ExprKind::Sin},   {"cos", ExprKind::Cos},   {"sinh", ExprKind::Sinh},
    {"cosh", ExprKind::Cosh}, {"tanh", ExprKind::Tanh}, {"exp", ExprKind::Exp},
    {"log", ExprKind::Log},   {"sqrt", ExprKind::Sqrt}, {"atan", ExprKind::Atan},
    {"flatstep", ExprKind::FlatStep},
};

std::optional<ExprKind> lookup_function(std::string_view name) {
  for (const auto& entry : kFunctions) {
    if (entry.name == name) return entry.kind;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, int dimension, const std::vector<std::string>& aliases)
      : src_(src), dim_(dimension), aliases_(aliases) {}

  ExprNode parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "empty expression");
    ExprNode node = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return node;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprNode parse_expr() {
    ExprNode lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = ExprNode::binary(ExprKind::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = ExprNode::binary(ExprKind::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprNode parse_term() {
    ExprNode lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = ExprNode::binary(ExprKind::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = ExprNode::binary(ExprKind::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprNode parse_unary() {
    if (accept('-')) return ExprNode::unary(ExprKind::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  ExprNode parse_power() {
    ExprNode base = parse_atom();
    skip_ws();
    const std::size_t caret = pos_;
    if (accept('^')) {
      ExprNode exponent = parse_unary();
      if (!is_constant_expr(exponent)) throw SyntaxError(caret, "exponent must be a constant");
      return ExprNode::binary(ExprKind::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  ExprNode parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprNode inner = parse_expr();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  ExprNode parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
      throw SyntaxError(start, "malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'");
    }
    return ExprNode::constant(value);
  }

  ExprNode parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);

    if (auto fn = lookup_function(name)) {
      if (!accept('(')) throw ArityError("function '" + std::string(name) + "' expects one argument in parentheses");
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')') {
        throw ArityError("function '" + std::string(name) + "' called with no arguments");
      }
      ExprNode arg = parse_expr();
      if (accept(',')) throw ArityError("function '" + std::string(name) + "' takes exactly one argument");
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return ExprNode::unary(*fn, std::move(arg));
    }

    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') throw UnknownIdentifier(std::string(name));

    if (name == "pi") return ExprNode::constant(std::numbers::pi);
    for (int i = 0; i < static_cast<int>(aliases_.size()) && i < dim_; ++i) {
      if (aliases_[i] == name) return ExprNode::variable(i);
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int index = -1;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (res.ec == std::errc() && res.ptr == name.data() + name.size() && index >= 0 && index < dim_ &&
          (name.size() == 2 || name[1] != '0')) {
        return ExprNode::variable(index);
      }
    }
    throw UnknownIdentifier(std::string(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int dim_;
  const std::vector<std::string>& aliases_;
};

void print(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case ExprKind::Variable:
      out += 'x';
      out += std::to_string(node.var);
      return;
    case ExprKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", node.value);
      std::string text(buf);
      // keep the literal inside the number grammar (no bare "inf"/"nan" reach here)
      out += text;
      return;
    }
    case ExprKind::Neg:
      out += "(-";
      print(node.args[0], out);
      out += ')';
      return;
    default:
      break;
  }
  if (is_unary(node.kind)) {
    out += function_name(node.kind);
    out += '(';
    print(node.args[0], out);
    out += ')';
    return;
  }
  const char* op = "+";
  switch (node.kind) {
    case ExprKind::Add: op = " + "; break;
    case ExprKind::Sub: op = " - "; break;
    case ExprKind::Mul: op = " * "; break;
    case ExprKind::Div: op = " / "; break;
    case ExprKind::Pow: op = "^"; break;
    default: break;
  }
  out += '(';
  print(node.args[0], out);
  out += op;
  print(node.args[1], out);
  out += ')';
}

}  // namespace

bool is_unary(ExprKind kind) { return kind >= ExprKind::Neg && kind <= ExprKind::FlatStep; }

bool is_binary(ExprKind kind) { return kind >= ExprKind::Add && kind <= ExprKind::Pow; }

std::string_view function_name(ExprKind kind) {
  for (const auto& entry : kFunctions) {
    if (entry.kind == kind) return entry.name;
  }
  return {};
}

ExprNode ExprNode::variable(int index) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.var = index;
  return n;
}

ExprNode ExprNode::constant(double v) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.value = v;
  return n;
}

ExprNode ExprNode::unary(ExprKind kind, ExprNode arg) {
  ExprNode n;
  n.kind = kind;
  n.args.push_back(std::move(arg));
  return n;
}

ExprNode ExprNode::binary(ExprKind kind, ExprNode lhs, ExprNode rhs) {
  ExprNode n;
  n.kind = kind;
  n.args.reserve(2);
  n.args.push_back(std::move(lhs));
  n.args.push_back(std::move(rhs));
  return n;
}

bool is_constant_expr(const ExprNode& node) {
  if (node.kind == ExprKind::Variable) return false;
  for (const auto& a : node.args) {
    if (!is_constant_expr(a)) return false;
  }
  return true;
}

double fold_constant(const ExprNode& node) {
  auto arg = [&](int i) { return fold_constant(node.args[i]); };
  switch (node.kind) {
    case ExprKind::Constant: return node.value;
    case ExprKind::Neg: return -arg(0);
    case ExprKind::Sin: return std::sin(arg(0));
    case ExprKind::Cos: return std::cos(arg(0));
    case ExprKind::Sinh: return std::sinh(arg(0));
    case ExprKind::Cosh: return std::cosh(arg(0));
    case ExprKind::Tanh: return std::tanh(arg(0));
    case ExprKind::Exp: return std::exp(arg(0));
    case ExprKind::Log: return std::log(arg(0));
    case ExprKind::Sqrt: return std::sqrt(arg(0));
    case ExprKind::Atan: return std::atan(arg(0));
    case ExprKind::FlatStep: {
      const double t = arg(0);
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return 1.0;
      const double a = std::exp(-1.0 / t);
      const double b = std::exp(-1.0 / (1.0 - t));
      return a / (a + b);
    }
    case ExprKind::Add: return arg(0) + arg(1);
    case ExprKind::Sub: return arg(0) - arg(1);
    case ExprKind::Mul: return arg(0) * arg(1);
    case ExprKind::Div: return arg(0) / arg(1);
    case ExprKind::Pow: return std::pow(arg(0), arg(1));
    case ExprKind::Variable: break;
  }
  throw DomainError("fold_constant applied to a non-constant expression");
}

int max_variable(const ExprNode& node) {
  int best = node.kind == ExprKind::Variable ? node.var : -1;
  for (const auto& a : node.args) best = std::max(best, max_variable(a));
  return best;
}

ExprNode parse_expr(std::string_view src, int dimension, const std::vector<std::string>& aliases) {
  if (dimension < kMinDim || dimension > kMaxDim) {
    throw InputError("BadDimension", "dimension " + std::to_string(dimension) + " outside " + std::to_string(kMinDim) + ".." +
                                         std::to_string(kMaxDim));
  }
  return Parser(src, dimension, aliases).parse();
}

std::string to_string(const ExprNode& node) {
  std::string out;
  print(node, out);
  return out;
}

}  // namespace qcgeom
