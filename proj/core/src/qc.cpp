#include "qcgeom/qc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fd.hpp"
#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

// Fixed stream so that classification never depends on caller seeds.
constexpr std::uint64_t kResidualSeed = 0x51c0ffee;
constexpr int kResidualRandomPlanes = 8;

double decomposition_residual(const MetricJet& jet, const CurvaturePack& pack, const Matrix& basis,
                              const Vector& xi, double H, double N) {
  const int n = jet.dim();
  double worst = 0.0;
  auto check = [&](const Vector& u, const Vector& v) {
    const double k = riemann_contract(pack, u, v);
    worst = std::max(worst, std::abs(k - qc_model_curvature(jet, xi, H, N, u, v)));
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      check(basis.col(i), basis.col(j));
      const Vector mixed = (basis.col(i) + basis.col(j)) / std::sqrt(2.0);
      for (int k = 0; k < n; ++k) {
        if (k != i && k != j) check(mixed, basis.col(k));
      }
    }
  std::mt19937_64 rng(kResidualSeed);
  for (int s = 0; s < kResidualRandomPlanes; ++s) {
    const auto [u, v] = random_plane(jet, rng);
    check(u, v);
  }
  return worst;
}

void require_line_field(const QCReport& report) {
  if (report.point_class == PointClass::Isotropic ||
      (report.point_class == PointClass::QC && report.schouten_gap <= 10.0 * report.tolerances.iso)) {
    throw DomainError("NearIsotropic", "|H - N| too small for a distinguished line field");
  }
  if (report.point_class != PointClass::QC) throw DomainError("NonQCPoint", "point is not quasi-constant");
}

using detail::kStencilSlack;
using detail::richardson;
using detail::shifted;

}  // namespace

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Isotropic: return "Isotropic";
    case PointClass::QC: return "QC";
    case PointClass::NonQC: return "NonQC";
  }
  return "?";
}

Vector sign_normalized(Vector v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
  return v;
}

double qc_model_curvature(const MetricJet& jet, const Vector& xi, double H, double N, const Vector& u,
                          const Vector& v) {
  const double a = g_dot(jet, xi, u), b = g_dot(jet, xi, v);
  const double cos2 = std::min(1.0, a * a + b * b);
  return H * (1.0 - cos2) + N * cos2;
}

QCReport classify_point(const MetricJet& jet, const CurvaturePack& pack, const Tolerances& tol) {
  const int n = jet.dim();
  if (n < 3) throw InputError("BadDimension", "point classification needs n >= 3");

  QCReport report;
  report.tolerances = tol;
  report.scalar = pack.scalar;
  const SchoutenSpectrum spec = schouten_spectrum(jet, pack);
  const Vector& ev = spec.values;
  const double scale = 1.0 + std::abs(pack.scalar);

  if (ev(n - 1) - ev(0) < tol.iso * scale) {
    report.point_class = PointClass::Isotropic;
    report.H = report.N = pack.scalar / (n * (n - 1.0));
    report.decomposition_residual =
        decomposition_residual(jet, pack, spec.vectors, spec.vectors.col(0), report.H, report.N);
    return report;
  }

  // simple eigenvalue on top (cluster 0..n-2) or at the bottom (cluster 1..n-1)
  const double spread_top = ev(n - 2) - ev(0);
  const double spread_bottom = ev(n - 1) - ev(1);
  const bool simple_on_top = spread_top <= spread_bottom;
  const int simple = simple_on_top ? n - 1 : 0;
  const int first = simple_on_top ? 0 : 1;
  const double gap = simple_on_top ? ev(n - 1) - ev(n - 2) : ev(1) - ev(0);

  double repeated = 0.0;
  for (int i = first; i < first + n - 1; ++i) repeated += ev(i);
  repeated /= (n - 1);

  report.H = 2.0 * repeated;
  report.N = ev(simple) + 0.5 * report.H;
  report.schouten_gap = std::abs(report.N - report.H);
  const Vector xi = sign_normalized(spec.vectors.col(simple));
  report.xi = xi;
  report.decomposition_residual = decomposition_residual(jet, pack, spec.vectors, xi, report.H, report.N);

  if (gap < tol.iso * scale) {
    report.point_class = PointClass::NonQC;
  } else {
    report.point_class = report.decomposition_residual <= tol.qc ? PointClass::QC : PointClass::NonQC;
  }
  return report;
}

QCReport classify_at(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol, double slack) {
  const MetricJet jet = metric_jet(cm, p, slack);
  const CurvaturePack pack = curvature_pack(jet);
  return classify_point(jet, pack, tol);
}

HNPair hn_fields(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol) {
  const QCReport r = classify_at(cm, p, tol);
  return {r.H, r.N};
}

LeafCurvature leaf_curvature(const CompiledMetric& cm, std::span<const double> p, const QCReport& report,
                             const Tolerances& tol) {
  require_line_field(report);
  const int n = cm.dimension();
  const MetricJet jet = metric_jet(cm, p, kStencilSlack);

  LeafCurvature out;
  out.grad_H = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    out.grad_H(i) = richardson(
        [&](double step) {
          const Point q = shifted(p, i, step);
          return classify_at(cm, q, tol, kStencilSlack).H;
        },
        tol.fd_step);
  }
  out.xi_H = report.xi->dot(out.grad_H);
  out.grad_H_norm2 = out.grad_H.dot(jet.g_inv * out.grad_H);
  out.alpha = out.xi_H / (2.0 * (report.N - report.H));
  out.lambda = report.H + out.alpha * out.alpha;
  return out;
}

LeafCurvature leaf_curvature(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol) {
  return leaf_curvature(cm, p, classify_at(cm, p, tol), tol);
}

QCReport analyze_point(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol) {
  QCReport report = classify_at(cm, p, tol);
  if (report.point_class == PointClass::QC && report.schouten_gap > 10.0 * tol.iso) {
    const LeafCurvature leaf = leaf_curvature(cm, p, report, tol);
    report.lambda = leaf.lambda;
    report.alpha = leaf.alpha;
  }
  return report;
}

Vector aligned_xi(const CompiledMetric& cm, std::span<const double> q, const Vector& reference,
                  const Tolerances& tol, double slack) {
  const MetricJet jet = metric_jet(cm, q, slack);
  const CurvaturePack pack = curvature_pack(jet);
  const QCReport report = classify_point(jet, pack, tol);
  require_line_field(report);
  Vector xi = *report.xi;
  const double c = g_dot(jet, xi, reference) / std::sqrt(g_dot(jet, reference, reference));
  if (std::abs(c) < 0.1) {
    throw TraceError("SignAlignmentFailure", "line field turns too fast to orient at " + format_point(q));
  }
  if (c < 0.0) xi = -xi;
  return xi;
}

Matrix d_eta(const CompiledMetric& cm, std::span<const double> p, const Vector& xi, const Tolerances& tol) {
  const int n = cm.dimension();
  Matrix deriv(n, n);  // deriv(i, j) = d_i eta_j
  for (int i = 0; i < n; ++i) {
    const Vector row = richardson(
        [&](double step) -> Vector {
          const Point q = shifted(p, i, step);
          const Vector x = aligned_xi(cm, q, xi, tol, kStencilSlack);
          const std::vector<double> g = cm.values(q);
          return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(g.data(), n, n) * x;
        },
        tol.fd_step);
    deriv.row(i) = row.transpose();
  }
  return deriv - deriv.transpose();
}

Matrix horizontal_basis(const MetricJet& jet, const Vector& xi) {
  const int n = jet.dim();
  const Vector x = xi / std::sqrt(g_dot(jet, xi, xi));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  // most nearly orthogonal coordinate directions first
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ca = std::abs(g_dot(jet, Vector::Unit(n, a), x)) / std::sqrt(jet.g(a, a));
    const double cb = std::abs(g_dot(jet, Vector::Unit(n, b), x)) / std::sqrt(jet.g(b, b));
    return ca < cb;
  });
  std::vector<Vector> basis;
  for (int c : order) {
    if (static_cast<int>(basis.size()) == n - 1) break;
    Vector e = Vector::Unit(n, c);
    e -= g_dot(jet, e, x) * x;
    for (const Vector& b : basis) e -= g_dot(jet, e, b) * b;
    const double ee = g_dot(jet, e, e);
    if (ee > 1e-8 * jet.g(c, c)) basis.push_back(e / std::sqrt(ee));
  }
  Matrix out(n, n - 1);
  for (int a = 0; a < n - 1; ++a) out.col(a) = basis[a];
  return out;
}

double integrability_check(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol) {
  if (cm.dimension() != 3) throw InputError("BadDimension", "integrability check is defined for n = 3");
  const QCReport report = classify_at(cm, p, tol);
  require_line_field(report);
  const MetricJet jet = metric_jet(cm, p);
  const Matrix deta = d_eta(cm, p, *report.xi, tol);
  const Matrix d = horizontal_basis(jet, *report.xi);
  return std::abs(d.col(0).dot(deta * d.col(1)));
}

}  // namespace qcgeom
