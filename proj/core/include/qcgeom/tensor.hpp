#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qcgeom/metric.hpp"

namespace qcgeom {

// Dense rank-R tensor over an n-dimensional chart, row-major in its indices.
template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int n) : n_(n), data_(size_for(n), 0.0) {}

  int dim() const { return n_; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  static std::size_t size_for(int n) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int n_ = 0;
  std::vector<double> data_;
};

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Metric components and coordinate derivatives at a point.
//   dg(k, i, j)          = d_k g_ij
//   ddg(k, l, i, j)      = d_k d_l g_ij
//   dddg(k, l, m, i, j)  = d_k d_l d_m g_ij
struct MetricJet {
  Point point;
  Matrix g;
  Matrix g_inv;
  Tensor<3> dg;
  Tensor<4> ddg;
  Tensor<5> dddg;

  int dim() const { return static_cast<int>(g.rows()); }
};

// Pointwise curvature, all in coordinate components.
//   gamma(k, i, j)   = Christoffel symbol of the second kind
//   riemann(i,j,k,l) = g(R(d_i, d_j) d_k, d_l), so K(u, v) = R(u, v, v, u) / |u ^ v|^2
//   cotton(i, j, k)  = (nabla_i S)_jk - (nabla_j S)_ik
struct CurvaturePack {
  Tensor<3> gamma;
  Tensor<4> riemann;
  Matrix ricci;
  double scalar = 0.0;
  Matrix schouten;
  Tensor<4> weyl;
  Tensor<3> cotton;
};

// Evaluates the metric jets at p (must lie in the domain box widened by
// `slack` of each side). Throws DegenerateMetric / DomainError.
MetricJet metric_jet(const CompiledMetric& cm, std::span<const double> p, double slack = 0.0);

// In dimension 2 the Schouten tensor is taken as (R/4) g, which keeps the
// decomposition R = S (Kulkarni-Nomizu) g exact and the Weyl part zero.
CurvaturePack curvature_pack(const MetricJet& jet);

double sectional(const MetricJet& jet, const CurvaturePack& pack, const Vector& u, const Vector& v);

// R(u, v, v, u) without normalisation.
double riemann_contract(const CurvaturePack& pack, const Vector& u, const Vector& v);

// Eigenvalues (ascending) and g-orthonormal eigenvectors of the Schouten
// operator g^{-1} S.
struct SchoutenSpectrum {
  Vector values;
  Matrix vectors;  // columns
};
SchoutenSpectrum schouten_spectrum(const MetricJet& jet, const CurvaturePack& pack);

// (n - m) * sum_{i <= m} l_i + m * sum_{i > m} l_i over the ascending
// Schouten eigenvalues; 1 <= m <= n - 1.
double weitzenboeck_gm(const MetricJet& jet, const CurvaturePack& pack, int m);

// Coordinate-invariant norms |T|_g.
double norm_g(const MetricJet& jet, const Tensor<4>& t);
double norm_g(const MetricJet& jet, const Tensor<3>& t);

double g_dot(const MetricJet& jet, const Vector& u, const Vector& v);

// g-orthonormal pair spanning a random plane: Gaussian pair, Gram-Schmidt in g.
std::array<Vector, 2> random_plane(const MetricJet& jet, std::mt19937_64& rng);

// Gram-Schmidt of (u, v) in the metric g. Throws DomainError("DegeneratePlane")
// when the pair is numerically dependent.
std::array<Vector, 2> orthonormal_pair(const MetricJet& jet, const Vector& u, const Vector& v);

// sup over 2-planes of |K - R / (n (n - 1))|: `samples` random planes plus,
// when `xi` is non-empty, the planes containing and orthogonal to xi.
double anisotropy(const MetricJet& jet, const CurvaturePack& pack, int samples, std::uint64_t seed,
                  std::span<const double> xi = {});

// Seeded generator shared by everything that draws random planes.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qcgeom
