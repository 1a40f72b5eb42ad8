#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcgeom/expr.hpp"
#include "qcgeom/jet.hpp"

namespace qcgeom {

using Point = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
};

// A chart-defined Riemannian metric: components g_ij(x) as expressions over
// an axis-aligned coordinate box. Only the upper triangle (i <= j) is stored.
class MetricSpec {
 public:
  MetricSpec() = default;
  // All components start as the constant 0.
  MetricSpec(int dimension, std::vector<std::string> names, std::vector<Interval> domain);

  int dimension() const { return dim_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Interval>& domain() const { return domain_; }

  const ExprNode& component(int i, int j) const;
  void set_component(int i, int j, ExprNode expr);
  // Parses `src` with the coordinate names as aliases.
  void set_component(int i, int j, std::string_view src);

  bool operator==(const MetricSpec&) const = default;

 private:
  int slot(int i, int j) const;

  int dim_ = 0;
  std::vector<std::string> names_;
  std::vector<Interval> domain_;
  std::vector<ExprNode> upper_;
};

// TOML layout:
//   dimension = 3
//   coords = ["r", "theta", "phi"]
//   domain = [[0.1, 3.0], [0.2, 2.9], [0.0, 6.28]]
//   [g]
//   "00" = "1"
//   "11" = "(2 + sin(r))^2"
// Absent components are 0; keys with i > j are rejected.
MetricSpec parse_metric_toml(std::string_view text);
MetricSpec load_metric_toml(const std::filesystem::path& path);
std::string to_toml(const MetricSpec& spec);

// FNV-1a 64 over the canonical TOML text, as 16 hex digits.
std::string spec_hash(const MetricSpec& spec);

// Flattened postfix form of an expression, evaluated with Jet3 arithmetic.
// Powers with a non-integer constant exponent c are lowered to exp(c log(base)).
class ExprProgram {
 public:
  ExprProgram() = default;
  explicit ExprProgram(const ExprNode& ast);

  // dim = p.size(). Throws DomainError on poles and out-of-domain arguments.
  Jet3 eval(std::span<const double> p) const;
  double value(std::span<const double> p) const;

 private:
  struct Instr {
    ExprKind op;
    int var = 0;
    double value = 0.0;
    int exponent = 0;
    bool int_pow = false;
  };
  void emit(const ExprNode& node);

  std::vector<Instr> code_;
};

// Evaluates g and its coordinate jets. Immutable once built; safe to share
// between threads.
class CompiledMetric {
 public:
  explicit CompiledMetric(MetricSpec spec);

  const MetricSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension(); }

  // True when p lies in the domain box widened by `slack` times each side's width.
  bool contains(std::span<const double> p, double slack = 0.0) const;

  // Jet3 of component (i, j) at p. No domain-box or definiteness checks.
  Jet3 component_jet(int i, int j, std::span<const double> p) const;
  // Metric values at p (no jets), checked for positive definiteness.
  std::vector<double> values(std::span<const double> p) const;

  // Relative threshold for the smallest eigenvalue of g against the largest
  // diagonal entry.
  static constexpr double kDefiniteness = 1e-12;

 private:
  MetricSpec spec_;
  std::vector<ExprProgram> programs_;  // upper triangle, same order as MetricSpec
};

// Throws DegenerateMetric when the dim x dim row-major matrix is not
// sufficiently positive definite.
void check_positive_definite(std::span<const double> g, int dim, std::span<const double> where);

// Value and all partial derivatives up to order three of `ast` at p.
Jet3 eval_jet3(const ExprNode& ast, std::span<const double> p);

std::string format_point(std::span<const double> p);

}  // namespace qcgeom
