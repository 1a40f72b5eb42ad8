#pragma once

#include <array>
#include <cstddef>

#include "qcgeom/expr.hpp"

namespace qcgeom {

// Number of distinct entries of a symmetric order-2 / order-3 derivative
// tensor in n variables.
constexpr int sym2_size(int n) { return n * (n + 1) / 2; }
constexpr int sym3_size(int n) { return n * (n + 1) * (n + 2) / 6; }

inline constexpr int kSym2 = sym2_size(kMaxDim);
inline constexpr int kSym3 = sym3_size(kMaxDim);

// Packed position of the multi-index (i, j) / (i, j, k) in any order.
// Packing is by largest index first, so the entries belonging to the first n
// variables are exactly the leading sym2_size(n) / sym3_size(n) slots.
int sym2_index(int i, int j);
int sym3_index(int i, int j, int k);

// Scalar field value with all partial derivatives up to order three at a
// point, propagated in Taylor mode. Second and third derivatives are stored
// once per unordered multi-index, so they are symmetric by construction.
class Jet3 {
 public:
  Jet3() = default;
  explicit Jet3(int dim) : dim_(dim) {}

  static Jet3 constant(int dim, double c);
  static Jet3 variable(int dim, int index, double x);

  int dim() const { return dim_; }
  double value() const { return value_; }
  double d(int i) const { return first_[i]; }
  double d(int i, int j) const { return second_[sym2_index(i, j)]; }
  double d(int i, int j, int k) const { return third_[sym3_index(i, j, k)]; }

  double& value() { return value_; }
  double& d(int i) { return first_[i]; }
  double& d(int i, int j) { return second_[sym2_index(i, j)]; }
  double& d(int i, int j, int k) { return third_[sym3_index(i, j, k)]; }

  // Chain rule for a scalar function with derivatives f0..f3 at value().
  Jet3 compose(double f0, double f1, double f2, double f3) const;

  Jet3& operator+=(const Jet3& o);
  Jet3& operator-=(const Jet3& o);
  Jet3& operator*=(double s);

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
  friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
  friend Jet3 operator-(Jet3 a) { return a *= -1.0; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

 private:
  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxDim> first_{};
  std::array<double, kSym2> second_{};
  std::array<double, kSym3> third_{};
};

// Elementary functions. Out-of-domain arguments (log / sqrt of a non-positive
// value, reciprocal of zero) throw DomainError.
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 tanh(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 atan(const Jet3& a);
Jet3 reciprocal(const Jet3& a);
Jet3 pow_int(const Jet3& a, int exponent);
// Infinitely flat step: 0 on (-inf, 0], 1 on [1, inf), symmetric about 1/2.
Jet3 flatstep(const Jet3& a);

// flatstep and its first three derivatives at t.
std::array<double, 4> flatstep_derivatives(double t);

}  // namespace qcgeom
