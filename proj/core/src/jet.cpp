#include "qcgeom/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

struct SymTables {
  std::array<std::array<int, kMaxDim>, kMaxDim> idx2{};
  std::array<std::array<std::array<int, kMaxDim>, kMaxDim>, kMaxDim> idx3{};
  std::array<std::array<int, 2>, kSym2> pairs{};
  std::array<std::array<int, 3>, kSym3> triples{};

  constexpr SymTables() {
    int p = 0;
    for (int j = 0; j < kMaxDim; ++j) {
      for (int i = 0; i <= j; ++i) {
        pairs[p] = {i, j};
        idx2[i][j] = idx2[j][i] = p;
        ++p;
      }
    }
    int t = 0;
    for (int k = 0; k < kMaxDim; ++k) {
      for (int j = 0; j <= k; ++j) {
        for (int i = 0; i <= j; ++i) {
          triples[t] = {i, j, k};
          idx3[i][j][k] = idx3[i][k][j] = idx3[j][i][k] = idx3[j][k][i] = idx3[k][i][j] = idx3[k][j][i] = t;
          ++t;
        }
      }
    }
  }
};

constexpr SymTables kTables{};

}  // namespace

int sym2_index(int i, int j) { return kTables.idx2[i][j]; }
int sym3_index(int i, int j, int k) { return kTables.idx3[i][j][k]; }

Jet3 Jet3::constant(int dim, double c) {
  Jet3 j(dim);
  j.value_ = c;
  return j;
}

Jet3 Jet3::variable(int dim, int index, double x) {
  Jet3 j(dim);
  j.value_ = x;
  j.first_[index] = 1.0;
  return j;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  value_ += o.value_;
  for (int i = 0; i < dim_; ++i) first_[i] += o.first_[i];
  for (int p = 0; p < sym2_size(dim_); ++p) second_[p] += o.second_[p];
  for (int t = 0; t < sym3_size(dim_); ++t) third_[t] += o.third_[t];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
  value_ -= o.value_;
  for (int i = 0; i < dim_; ++i) first_[i] -= o.first_[i];
  for (int p = 0; p < sym2_size(dim_); ++p) second_[p] -= o.second_[p];
  for (int t = 0; t < sym3_size(dim_); ++t) third_[t] -= o.third_[t];
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  value_ *= s;
  for (int i = 0; i < dim_; ++i) first_[i] *= s;
  for (int p = 0; p < sym2_size(dim_); ++p) second_[p] *= s;
  for (int t = 0; t < sym3_size(dim_); ++t) third_[t] *= s;
  return *this;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  const int n = a.dim_;
  Jet3 r(n);
  r.value_ = a.value_ * b.value_;
  for (int i = 0; i < n; ++i) r.first_[i] = a.first_[i] * b.value_ + a.value_ * b.first_[i];
  for (int p = 0; p < sym2_size(n); ++p) {
    const auto [i, j] = kTables.pairs[p];
    r.second_[p] = a.second_[p] * b.value_ + a.first_[i] * b.first_[j] + a.first_[j] * b.first_[i] +
                   a.value_ * b.second_[p];
  }
  for (int t = 0; t < sym3_size(n); ++t) {
    const auto [i, j, k] = kTables.triples[t];
    const int ij = kTables.idx2[i][j], ik = kTables.idx2[i][k], jk = kTables.idx2[j][k];
    r.third_[t] = a.third_[t] * b.value_ + a.second_[ij] * b.first_[k] + a.second_[ik] * b.first_[j] +
                  a.second_[jk] * b.first_[i] + a.first_[i] * b.second_[jk] + a.first_[j] * b.second_[ik] +
                  a.first_[k] * b.second_[ij] + a.value_ * b.third_[t];
  }
  return r;
}

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

// Faa di Bruno up to order three.
Jet3 Jet3::compose(double f0, double f1, double f2, double f3) const {
  const int n = dim_;
  Jet3 r(n);
  r.value_ = f0;
  for (int i = 0; i < n; ++i) r.first_[i] = f1 * first_[i];
  for (int p = 0; p < sym2_size(n); ++p) {
    const auto [i, j] = kTables.pairs[p];
    r.second_[p] = f2 * first_[i] * first_[j] + f1 * second_[p];
  }
  for (int t = 0; t < sym3_size(n); ++t) {
    const auto [i, j, k] = kTables.triples[t];
    const int ij = kTables.idx2[i][j], ik = kTables.idx2[i][k], jk = kTables.idx2[j][k];
    r.third_[t] = f3 * first_[i] * first_[j] * first_[k] +
                  f2 * (second_[ij] * first_[k] + second_[ik] * first_[j] + second_[jk] * first_[i]) +
                  f1 * third_[t];
  }
  return r;
}

Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

Jet3 sinh(const Jet3& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(s, c, s, c);
}

Jet3 cosh(const Jet3& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(c, s, c, s);
}

Jet3 tanh(const Jet3& a) {
  const double t = std::tanh(a.value());
  const double t1 = 1.0 - t * t;
  const double t2 = -2.0 * t * t1;
  const double t3 = -2.0 * t1 * t1 + 4.0 * t * t * t1;
  return a.compose(t, t1, t2, t3);
}

Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet3 log(const Jet3& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
  const double inv = 1.0 / x;
  return a.compose(std::log(x), inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet3 sqrt(const Jet3& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(x));
  const double r = std::sqrt(x);
  const double inv = 1.0 / x;
  return a.compose(r, 0.5 / r, -0.25 * inv / r, 0.375 * inv * inv / r);
}

Jet3 atan(const Jet3& a) {
  const double x = a.value();
  const double q = 1.0 / (1.0 + x * x);
  return a.compose(std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

Jet3 reciprocal(const Jet3& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return a.compose(inv, -inv2, 2.0 * inv2 * inv, -6.0 * inv2 * inv2);
}

Jet3 pow_int(const Jet3& a, int exponent) {
  const double x = a.value();
  if (exponent < 0 && x == 0.0) throw DomainError("negative power of zero");
  const double c = exponent;
  // coefficients vanish before the power of x can blow up
  auto term = [&](double coeff, int power) { return coeff == 0.0 ? 0.0 : coeff * std::pow(x, power); };
  return a.compose(std::pow(x, exponent), term(c, exponent - 1), term(c * (c - 1.0), exponent - 2),
                   term(c * (c - 1.0) * (c - 2.0), exponent - 3));
}

std::array<double, 4> flatstep_derivatives(double t) {
  // exp(-1/t) underflows to exactly zero (with all derivatives) below this.
  constexpr double kFlat = 1.0 / 700.0;
  if (t <= kFlat) return {0.0, 0.0, 0.0, 0.0};
  if (t >= 1.0 - kFlat) return {1.0, 0.0, 0.0, 0.0};
  if (t > 0.5) {
    // s(t) = 1 - s(1 - t); evaluating the small side keeps the tail derivatives exact
    const auto m = flatstep_derivatives(1.0 - t);
    return {1.0 - m[0], m[1], -m[2], m[3]};
  }
  const Jet3 x = Jet3::variable(1, 0, t);
  const Jet3 one = Jet3::constant(1, 1.0);
  const Jet3 left = exp(-reciprocal(x));
  const Jet3 right = exp(-reciprocal(one - x));
  const Jet3 s = left / (left + right);
  return {s.value(), s.d(0), s.d(0, 0), s.d(0, 0, 0)};
}

Jet3 flatstep(const Jet3& a) {
  const auto f = flatstep_derivatives(a.value());
  return a.compose(f[0], f[1], f[2], f[3]);
}

}  // namespace qcgeom
