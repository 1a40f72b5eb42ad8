#include "qcgeom/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

// First-order dual number carrying the gradient along the chart coordinates.
// Running the curvature formulas on Duals seeded with (g, dg, ddg) and their
// next derivatives yields the Schouten tensor together with its exact partials.
struct Dual {
  double v = 0.0;
  std::array<double, kMaxDim> d{};

  Dual() = default;
  explicit Dual(double value) : v(value) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator*(double s, Dual a) {
    a.v *= s;
    for (auto& x : a.d) x *= s;
    return a;
  }
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

// Row-major n x n matrix inverse; for Duals d(g^-1) = -g^-1 (dg) g^-1.
std::vector<double> inverse(const std::vector<double>& m, int n) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(m.data(), n, n);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv = a.llt().solve(Matrix::Identity(n, n));
  return std::vector<double>(inv.data(), inv.data() + n * n);
}

std::vector<Dual> inverse(const std::vector<Dual>& m, int n) {
  std::vector<double> values(n * n);
  for (int i = 0; i < n * n; ++i) values[i] = m[i].v;
  const std::vector<double> inv = inverse(values, n);
  std::vector<Dual> out(n * n);
  for (int i = 0; i < n * n; ++i) out[i].v = inv[i];
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) acc += inv[i * n + a] * m[a * n + b].d[c] * inv[b * n + j];
        }
        out[i * n + j].d[c] = -acc;
      }
    }
  }
  return out;
}

template <class T>
struct CoreCurvature {
  int n = 0;
  std::vector<T> g_inv;     // n^2
  std::vector<T> gamma_lo;  // Gamma_{l,ij} at (l*n + i)*n + j
  std::vector<T> gamma;     // Gamma^k_ij at (k*n + i)*n + j
  std::vector<T> riemann;   // n^4
  std::vector<T> ricci;     // n^2
  T scalar{};
  std::vector<T> schouten;  // n^2
};

// g(i,j), dg(k,i,j) = d_k g_ij and ddg(k,l,i,j) supplied as callables.
template <class T, class G, class DG, class DDG>
CoreCurvature<T> core_curvature(int n, G&& g, DG&& dg, DDG&& ddg) {
  CoreCurvature<T> c;
  c.n = n;
  const auto i2 = [n](int a, int b) { return a * n + b; };
  const auto i3 = [n](int a, int b, int e) { return (a * n + b) * n + e; };
  const auto i4 = [n](int a, int b, int e, int f) { return ((a * n + b) * n + e) * n + f; };

  std::vector<T> gm(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm[i2(i, j)] = g(i, j);
  c.g_inv = inverse(gm, n);

  c.gamma_lo.assign(n * n * n, T{});
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c.gamma_lo[i3(l, i, j)] = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));

  c.gamma.assign(n * n * n, T{});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T acc{};
        for (int l = 0; l < n; ++l) acc += c.g_inv[i2(k, l)] * c.gamma_lo[i3(l, i, j)];
        c.gamma[i3(k, i, j)] = acc;
      }

  // d_m Gamma_{l,ij}
  const auto dgamma_lo = [&](int m, int l, int i, int j) {
    return 0.5 * (ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j));
  };

  // R_ijkl = d_i Gamma_{l,jk} - d_j Gamma_{l,ik} - Gamma_{p,il} Gamma^p_jk + Gamma_{p,jl} Gamma^p_ik
  c.riemann.assign(n * n * n * n, T{});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          T acc = dgamma_lo(i, l, j, k) - dgamma_lo(j, l, i, k);
          for (int p = 0; p < n; ++p) {
            acc -= c.gamma_lo[i3(p, i, l)] * c.gamma[i3(p, j, k)];
            acc += c.gamma_lo[i3(p, j, l)] * c.gamma[i3(p, i, k)];
          }
          c.riemann[i4(i, j, k, l)] = acc;
        }
    }

  // Ric_jk = g^{il} R_ijkl
  c.ricci.assign(n * n, T{});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      T acc{};
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) acc += c.g_inv[i2(i, l)] * c.riemann[i4(i, j, k, l)];
      c.ricci[i2(j, k)] = acc;
    }

  T scalar{};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) scalar += c.g_inv[i2(j, k)] * c.ricci[i2(j, k)];
  c.scalar = scalar;

  c.schouten.assign(n * n, T{});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (n == 2) {
        c.schouten[i2(j, k)] = 0.25 * (scalar * gm[i2(j, k)]);
      } else {
        const double inv_n2 = 1.0 / (n - 2);
        const double inv_2n1 = 1.0 / (2.0 * (n - 1));
        c.schouten[i2(j, k)] = inv_n2 * (c.ricci[i2(j, k)] - inv_2n1 * (scalar * gm[i2(j, k)]));
      }
    }
  return c;
}

Dual seeded(double value, const auto& grad, int n) {
  Dual d(value);
  for (int m = 0; m < n; ++m) d.d[m] = grad(m);
  return d;
}

}  // namespace

MetricJet metric_jet(const CompiledMetric& cm, std::span<const double> p, double slack) {
  const int n = cm.dimension();
  if (static_cast<int>(p.size()) != n) {
    throw InputError("BadPoint", "expected a point with " + std::to_string(n) + " coordinates");
  }
  if (!cm.contains(p, slack)) throw DomainError("point " + format_point(p) + " outside the domain box");

  MetricJet jet;
  jet.point.assign(p.begin(), p.end());
  jet.g = Matrix::Zero(n, n);
  jet.dg = Tensor<3>(n);
  jet.ddg = Tensor<4>(n);
  jet.dddg = Tensor<5>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Jet3 c = cm.component_jet(i, j, p);
      const int pairs[2][2] = {{i, j}, {j, i}};
      for (const auto& [a, b] : pairs) {
        jet.g(a, b) = c.value();
        for (int k = 0; k < n; ++k) {
          jet.dg(k, a, b) = c.d(k);
          for (int l = 0; l < n; ++l) {
            jet.ddg(k, l, a, b) = c.d(k, l);
            for (int m = 0; m < n; ++m) jet.dddg(k, l, m, a, b) = c.d(k, l, m);
          }
        }
      }
    }
  }
  std::vector<double> flat(jet.g.data(), jet.g.data() + n * n);
  check_positive_definite(flat, n, p);
  jet.g_inv = jet.g.llt().solve(Matrix::Identity(n, n));
  jet.g_inv = 0.5 * (jet.g_inv + jet.g_inv.transpose()).eval();
  return jet;
}

CurvaturePack curvature_pack(const MetricJet& jet) {
  const int n = jet.dim();
  auto g = [&](int i, int j) {
    return seeded(jet.g(i, j), [&](int m) { return jet.dg(m, i, j); }, n);
  };
  auto dg = [&](int k, int i, int j) {
    return seeded(jet.dg(k, i, j), [&](int m) { return jet.ddg(m, k, i, j); }, n);
  };
  auto ddg = [&](int k, int l, int i, int j) {
    return seeded(jet.ddg(k, l, i, j), [&](int m) { return jet.dddg(m, k, l, i, j); }, n);
  };
  const CoreCurvature<Dual> core = core_curvature<Dual>(n, g, dg, ddg);

  CurvaturePack pack;
  pack.gamma = Tensor<3>(n);
  pack.riemann = Tensor<4>(n);
  pack.weyl = Tensor<4>(n);
  pack.cotton = Tensor<3>(n);
  pack.ricci = Matrix::Zero(n, n);
  pack.schouten = Matrix::Zero(n, n);
  pack.scalar = core.scalar.v;

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pack.gamma(k, i, j) = core.gamma[(k * n + i) * n + j].v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      pack.ricci(i, j) = 0.5 * (core.ricci[i * n + j].v + core.ricci[j * n + i].v);
      pack.schouten(i, j) = 0.5 * (core.schouten[i * n + j].v + core.schouten[j * n + i].v);
    }

  const Matrix& gm = jet.g;
  const Matrix& s = pack.schouten;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = core.riemann[((i * n + j) * n + k) * n + l].v;
          pack.riemann(i, j, k, l) = r;
          const double kn = gm(j, k) * s(i, l) - gm(i, k) * s(j, l) + gm(i, l) * s(j, k) - gm(j, l) * s(i, k);
          pack.weyl(i, j, k, l) = n == 2 ? 0.0 : r - kn;
        }

  // (nabla_i S)_jk = d_i S_jk - Gamma^l_ij S_lk - Gamma^l_ik S_jl
  auto nabla_s = [&](int i, int j, int k) {
    double v = 0.5 * (core.schouten[j * n + k].d[i] + core.schouten[k * n + j].d[i]);
    for (int l = 0; l < n; ++l) v -= pack.gamma(l, i, j) * s(l, k) + pack.gamma(l, i, k) * s(j, l);
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) pack.cotton(i, j, k) = i == j ? 0.0 : nabla_s(i, j, k) - nabla_s(j, i, k);
  // exact antisymmetry in the first two indices
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double a = 0.5 * (pack.cotton(i, j, k) - pack.cotton(j, i, k));
        pack.cotton(i, j, k) = a;
        pack.cotton(j, i, k) = -a;
      }
  return pack;
}

double riemann_contract(const CurvaturePack& pack, const Vector& u, const Vector& v) {
  const int n = pack.riemann.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double uv = u(i) * v(j);
      if (uv == 0.0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += pack.riemann(i, j, k, l) * uv * v(k) * u(l);
    }
  return acc;
}

double g_dot(const MetricJet& jet, const Vector& u, const Vector& v) { return u.dot(jet.g * v); }

double sectional(const MetricJet& jet, const CurvaturePack& pack, const Vector& u, const Vector& v) {
  const double uu = g_dot(jet, u, u), vv = g_dot(jet, v, v), uv = g_dot(jet, u, v);
  const double gram = uu * vv - uv * uv;
  if (!(gram >= 1e-12 * uu * vv) || uu <= 0.0 || vv <= 0.0) {
    throw DomainError("DegeneratePlane", "vectors do not span a 2-plane");
  }
  return riemann_contract(pack, u, v) / gram;
}

SchoutenSpectrum schouten_spectrum(const MetricJet& jet, const CurvaturePack& pack) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(pack.schouten, jet.g);
  if (solver.info() != Eigen::Success) throw DomainError("Schouten eigen-decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double weitzenboeck_gm(const MetricJet& jet, const CurvaturePack& pack, int m) {
  const int n = jet.dim();
  if (m < 1 || m > n - 1) {
    throw InputError("BadDegree", "form degree must be in 1.." + std::to_string(n - 1));
  }
  const Vector ev = schouten_spectrum(jet, pack).values;
  double low = 0.0, high = 0.0;
  for (int i = 0; i < n; ++i) (i < m ? low : high) += ev(i);
  return (n - m) * low + m * high;
}

double norm_g(const MetricJet& jet, const Tensor<4>& t) {
  const int n = jet.dim();
  // raise every index in turn: T^{abcd}
  Tensor<4> up = t;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor<4> next(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double acc = 0.0;
            for (int x = 0; x < n; ++x) {
              const int idx[4] = {a, b, c, d};
              int src[4] = {a, b, c, d};
              src[slot] = x;
              acc += jet.g_inv(idx[slot], x) * up(src[0], src[1], src[2], src[3]);
            }
            next(a, b, c, d) = acc;
          }
    up = std::move(next);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < t.data().size(); ++i) sum += t.data()[i] * up.data()[i];
  return std::sqrt(std::max(sum, 0.0));
}

double norm_g(const MetricJet& jet, const Tensor<3>& t) {
  const int n = jet.dim();
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double up = 0.0;
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) up += jet.g_inv(a, x) * jet.g_inv(b, y) * jet.g_inv(c, z) * t(x, y, z);
        sum += up * t(a, b, c);
      }
  return std::sqrt(std::max(sum, 0.0));
}

std::array<Vector, 2> orthonormal_pair(const MetricJet& jet, const Vector& u, const Vector& v) {
  const double uu = g_dot(jet, u, u);
  if (!(uu > 0.0)) throw DomainError("DegeneratePlane", "zero vector");
  Vector e1 = u / std::sqrt(uu);
  Vector w = v - g_dot(jet, v, e1) * e1;
  const double ww = g_dot(jet, w, w);
  if (!(ww > 1e-12 * g_dot(jet, v, v))) throw DomainError("DegeneratePlane", "vectors are dependent");
  return {e1, w / std::sqrt(ww)};
}

std::array<Vector, 2> random_plane(const MetricJet& jet, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = jet.dim();
  for (;;) {
    Vector u(n), v(n);
    for (int i = 0; i < n; ++i) u(i) = normal(rng);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    try {
      return orthonormal_pair(jet, u, v);
    } catch (const DomainError&) {
      // measure-zero event; draw again
    }
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double anisotropy(const MetricJet& jet, const CurvaturePack& pack, int samples, std::uint64_t seed,
                  std::span<const double> xi) {
  if (samples < 1) throw InputError("BadSamples", "anisotropy needs at least one sample plane");
  const int n = jet.dim();
  const double mean = pack.scalar / (n * (n - 1.0));
  double best = 0.0;
  std::mt19937_64 rng(mix_seed(seed, 0));
  for (int s = 0; s < samples; ++s) {
    const auto [u, v] = random_plane(jet, rng);
    best = std::max(best, std::abs(riemann_contract(pack, u, v) - mean));
  }
  if (!xi.empty()) {
    Vector x = Eigen::Map<const Vector>(xi.data(), n);
    x /= std::sqrt(g_dot(jet, x, x));
    // g-orthonormal completion of xi
    std::vector<Vector> basis{x};
    for (int c = 0; c < n && static_cast<int>(basis.size()) < n; ++c) {
      Vector e = Vector::Unit(n, c);
      for (const Vector& b : basis) e -= g_dot(jet, e, b) * b;
      const double ee = g_dot(jet, e, e);
      if (ee > 1e-6) basis.push_back(e / std::sqrt(ee));
    }
    if (basis.size() >= 3) {
      best = std::max(best, std::abs(riemann_contract(pack, basis[0], basis[1]) - mean));
      best = std::max(best, std::abs(riemann_contract(pack, basis[1], basis[2]) - mean));
    }
  }
  return best;
}

}  // namespace qcgeom
