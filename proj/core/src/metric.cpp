#include "qcgeom/metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // TOML floats need a fraction or exponent
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string toml_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void validate_layout(int dimension, const std::vector<std::string>& names, const std::vector<Interval>& domain) {
  if (dimension < kMinDim || dimension > kMaxDim) {
    throw InputError("BadDimension", "dimension must be in " + std::to_string(kMinDim) + ".." +
                                         std::to_string(kMaxDim) + ", got " + std::to_string(dimension));
  }
  if (static_cast<int>(names.size()) != dimension) {
    throw InputError("BadSpec", "expected " + std::to_string(dimension) + " coordinate names");
  }
  std::set<std::string> seen;
  for (int i = 0; i < dimension; ++i) {
    const std::string& name = names[i];
    if (name.empty() || !seen.insert(name).second) throw InputError("BadSpec", "duplicate or empty coordinate name");
    // an alias may not shadow another coordinate's canonical name
    if (name.size() >= 2 && name[0] == 'x' && name != "x" + std::to_string(i) &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      throw InputError("BadSpec", "coordinate name '" + name + "' clashes with a canonical name");
    }
    if (name == "pi") throw InputError("BadSpec", "coordinate name 'pi' is reserved");
  }
  if (static_cast<int>(domain.size()) != dimension) {
    throw InputError("BadSpec", "expected " + std::to_string(dimension) + " domain intervals");
  }
  for (const auto& iv : domain) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw InputError("BadSpec", "domain interval must satisfy lo < hi");
    }
  }
}

double toml_number(const toml::node& node, const std::string& what) {
  if (auto v = node.value<double>()) return *v;
  throw InputError("BadSpec", what + " must be a number");
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricSpec

MetricSpec::MetricSpec(int dimension, std::vector<std::string> names, std::vector<Interval> domain)
    : dim_(dimension), names_(std::move(names)), domain_(std::move(domain)) {
  validate_layout(dim_, names_, domain_);
  upper_.assign(sym2_size(dim_), ExprNode::constant(0.0));
}

int MetricSpec::slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= dim_) throw InputError("BadSpec", "component index out of range");
  return sym2_index(i, j);
}

const ExprNode& MetricSpec::component(int i, int j) const { return upper_[slot(i, j)]; }

void MetricSpec::set_component(int i, int j, ExprNode expr) {
  if (max_variable(expr) >= dim_) throw InputError("BadSpec", "component uses a coordinate beyond the dimension");
  upper_[slot(i, j)] = std::move(expr);
}

void MetricSpec::set_component(int i, int j, std::string_view src) {
  set_component(i, j, parse_expr(src, dim_, names_));
}

// ---------------------------------------------------------------------------
// TOML

MetricSpec parse_metric_toml(std::string_view text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ", column " << e.source().begin.column << ")";
    throw InputError("TomlError", msg.str());
  }

  const auto dim_value = doc["dimension"].value<int64_t>();
  if (!dim_value) throw InputError("BadSpec", "missing integer field 'dimension'");
  const int dim = static_cast<int>(*dim_value);
  if (dim < kMinDim || dim > kMaxDim) {
    throw InputError("BadDimension", "dimension must be in 2..6, got " + std::to_string(dim));
  }

  std::vector<std::string> names;
  if (auto* coords = doc["coords"].as_array()) {
    for (const auto& item : *coords) {
      auto s = item.value<std::string>();
      if (!s) throw InputError("BadSpec", "coords must be strings");
      names.push_back(*s);
    }
  } else {
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
  }

  std::vector<Interval> domain;
  auto* dom = doc["domain"].as_array();
  if (!dom) throw InputError("BadSpec", "missing array field 'domain'");
  for (const auto& item : *dom) {
    auto* pair = item.as_array();
    if (!pair || pair->size() != 2) throw InputError("BadSpec", "domain entries must be [lo, hi] pairs");
    domain.push_back({toml_number(*pair->get(0), "domain bound"), toml_number(*pair->get(1), "domain bound")});
  }

  MetricSpec spec(dim, names, domain);

  auto* g = doc["g"].as_table();
  if (!g) throw InputError("BadSpec", "missing table 'g'");
  std::vector<std::string> problems;
  for (const auto& [key, value] : *g) {
    const std::string k(key.str());
    if (k.size() != 2 || !std::isdigit(static_cast<unsigned char>(k[0])) ||
        !std::isdigit(static_cast<unsigned char>(k[1]))) {
      problems.push_back("g key '" + k + "' must be two digits \"ij\"");
      continue;
    }
    const int i = k[0] - '0', j = k[1] - '0';
    if (i >= dim || j >= dim) {
      problems.push_back("g key '" + k + "' out of range");
      continue;
    }
    if (i > j) {
      problems.push_back("g key '" + k + "' is in the lower triangle; give \"" + std::string{k[1], k[0]} + "\"");
      continue;
    }
    std::string src;
    if (auto s = value.value<std::string>()) {
      src = *s;
    } else if (auto d = value.value<double>()) {
      src = format_double(*d);
    } else {
      problems.push_back("g." + k + " must be a string expression");
      continue;
    }
    try {
      spec.set_component(i, j, src);
    } catch (const Error& e) {
      problems.push_back("g." + k + ": " + e.what());
    }
  }
  if (!problems.empty()) throw CompileError(std::move(problems));
  return spec;
}

MetricSpec load_metric_toml(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("IoError", "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_toml(buf.str());
}

std::string to_toml(const MetricSpec& spec) {
  std::ostringstream out;
  const int n = spec.dimension();
  out << "dimension = " << n << "\n";
  out << "coords = [";
  for (int i = 0; i < n; ++i) out << (i ? ", " : "") << toml_quote(spec.names()[i]);
  out << "]\n";
  out << "domain = [";
  for (int i = 0; i < n; ++i) {
    out << (i ? ", " : "") << "[" << format_double(spec.domain()[i].lo) << ", "
        << format_double(spec.domain()[i].hi) << "]";
  }
  out << "]\n\n[g]\n";
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const ExprNode& c = spec.component(i, j);
      if (c.kind == ExprKind::Constant && c.value == 0.0) continue;
      out << '"' << i << j << "\" = " << toml_quote(to_string(c)) << "\n";
    }
  }
  return out.str();
}

std::string spec_hash(const MetricSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_toml(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// ExprProgram

ExprProgram::ExprProgram(const ExprNode& ast) { emit(ast); }

void ExprProgram::emit(const ExprNode& node) {
  if (node.kind == ExprKind::Pow) {
    const double c = fold_constant(node.args[1]);
    emit(node.args[0]);
    if (c == std::round(c) && std::abs(c) <= 64.0) {
      code_.push_back({ExprKind::Pow, 0, c, static_cast<int>(c), true});
    } else {
      code_.push_back({ExprKind::Log});
      code_.push_back({ExprKind::Constant, 0, c});
      code_.push_back({ExprKind::Mul});
      code_.push_back({ExprKind::Exp});
    }
    return;
  }
  for (const auto& a : node.args) emit(a);
  code_.push_back({node.kind, node.var, node.value});
}

Jet3 ExprProgram::eval(std::span<const double> p) const {
  const int dim = static_cast<int>(p.size());
  std::vector<Jet3> stack;
  stack.reserve(code_.size());
  for (const Instr& ins : code_) {
    if (ins.op == ExprKind::Variable) {
      stack.push_back(Jet3::variable(dim, ins.var, p[ins.var]));
      continue;
    }
    if (ins.op == ExprKind::Constant) {
      stack.push_back(Jet3::constant(dim, ins.value));
      continue;
    }
    if (is_binary(ins.op) && ins.op != ExprKind::Pow) {
      Jet3 rhs = std::move(stack.back());
      stack.pop_back();
      Jet3& lhs = stack.back();
      switch (ins.op) {
        case ExprKind::Add: lhs += rhs; break;
        case ExprKind::Sub: lhs -= rhs; break;
        case ExprKind::Mul: lhs = lhs * rhs; break;
        case ExprKind::Div: lhs = lhs / rhs; break;
        default: break;
      }
      continue;
    }
    Jet3& a = stack.back();
    switch (ins.op) {
      case ExprKind::Pow: a = pow_int(a, ins.exponent); break;
      case ExprKind::Neg: a = -a; break;
      case ExprKind::Sin: a = sin(a); break;
      case ExprKind::Cos: a = cos(a); break;
      case ExprKind::Sinh: a = sinh(a); break;
      case ExprKind::Cosh: a = cosh(a); break;
      case ExprKind::Tanh: a = tanh(a); break;
      case ExprKind::Exp: a = exp(a); break;
      case ExprKind::Log: a = log(a); break;
      case ExprKind::Sqrt: a = sqrt(a); break;
      case ExprKind::Atan: a = atan(a); break;
      case ExprKind::FlatStep: a = flatstep(a); break;
      default: break;
    }
  }
  return stack.back();
}

double ExprProgram::value(std::span<const double> p) const {
  std::vector<double> stack;
  stack.reserve(code_.size());
  for (const Instr& ins : code_) {
    if (ins.op == ExprKind::Variable) {
      stack.push_back(p[ins.var]);
      continue;
    }
    if (ins.op == ExprKind::Constant) {
      stack.push_back(ins.value);
      continue;
    }
    if (is_binary(ins.op) && ins.op != ExprKind::Pow) {
      const double rhs = stack.back();
      stack.pop_back();
      double& lhs = stack.back();
      switch (ins.op) {
        case ExprKind::Add: lhs += rhs; break;
        case ExprKind::Sub: lhs -= rhs; break;
        case ExprKind::Mul: lhs *= rhs; break;
        case ExprKind::Div:
          if (rhs == 0.0) throw DomainError("division by zero");
          lhs /= rhs;
          break;
        default: break;
      }
      continue;
    }
    double& a = stack.back();
    switch (ins.op) {
      case ExprKind::Pow:
        if (ins.exponent < 0 && a == 0.0) throw DomainError("negative power of zero");
        a = std::pow(a, ins.exponent);
        break;
      case ExprKind::Neg: a = -a; break;
      case ExprKind::Sin: a = std::sin(a); break;
      case ExprKind::Cos: a = std::cos(a); break;
      case ExprKind::Sinh: a = std::sinh(a); break;
      case ExprKind::Cosh: a = std::cosh(a); break;
      case ExprKind::Tanh: a = std::tanh(a); break;
      case ExprKind::Exp: a = std::exp(a); break;
      case ExprKind::Log:
        if (!(a > 0.0)) throw DomainError("log of non-positive value " + std::to_string(a));
        a = std::log(a);
        break;
      case ExprKind::Sqrt:
        if (!(a > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(a));
        a = std::sqrt(a);
        break;
      case ExprKind::Atan: a = std::atan(a); break;
      case ExprKind::FlatStep: a = flatstep_derivatives(a)[0]; break;
      default: break;
    }
  }
  return stack.back();
}

Jet3 eval_jet3(const ExprNode& ast, std::span<const double> p) {
  if (max_variable(ast) >= static_cast<int>(p.size())) {
    throw InputError("BadPoint", "expression uses a coordinate beyond the point's dimension");
  }
  return ExprProgram(ast).eval(p);
}

// ---------------------------------------------------------------------------
// CompiledMetric

CompiledMetric::CompiledMetric(MetricSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.dimension();
  if (n < kMinDim) throw InputError("BadSpec", "metric spec is empty");
  programs_.resize(sym2_size(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) programs_[sym2_index(i, j)] = ExprProgram(spec_.component(i, j));
  }
}

bool CompiledMetric::contains(std::span<const double> p, double slack) const {
  if (static_cast<int>(p.size()) != dimension()) return false;
  for (int i = 0; i < dimension(); ++i) {
    const Interval& iv = spec_.domain()[i];
    const double pad = slack * (iv.hi - iv.lo);
    if (!(p[i] >= iv.lo - pad && p[i] <= iv.hi + pad)) return false;
  }
  return true;
}

Jet3 CompiledMetric::component_jet(int i, int j, std::span<const double> p) const {
  return programs_[sym2_index(i, j)].eval(p);
}

std::vector<double> CompiledMetric::values(std::span<const double> p) const {
  const int n = dimension();
  if (static_cast<int>(p.size()) != n) throw InputError("BadPoint", "point has wrong dimension");
  std::vector<double> g(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) g[i * n + j] = g[j * n + i] = programs_[sym2_index(i, j)].value(p);
  }
  check_positive_definite(g, n, p);
  return g;
}

void check_positive_definite(std::span<const double> g, int dim, std::span<const double> where) {
  Eigen::MatrixXd m(dim, dim);
  double max_diag = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = g[i * dim + j];
    max_diag = std::max(max_diag, m(i, i));
  }
  for (double v : g) {
    if (!std::isfinite(v)) throw DegenerateMetric("non-finite metric component at " + format_point(where));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues()(0);
  if (!(max_diag > 0.0) || smallest <= CompiledMetric::kDefiniteness * max_diag) {
    throw DegenerateMetric("metric not positive definite at " + format_point(where));
  }
}

std::string format_point(std::span<const double> p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

}  // namespace qcgeom
