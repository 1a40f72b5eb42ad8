#include "qcgeom/leaf_flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "fd.hpp"

namespace qcgeom {

using detail::kStencilSlack;
using detail::richardson;
using detail::shifted;

namespace {

Point axpy(std::span<const double> p, double s, const Vector& v) {
  Point q(p.begin(), p.end());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += s * v(static_cast<Eigen::Index>(i));
  return q;
}

bool has_line_field(const QCReport& r) {
  return r.point_class == PointClass::QC && r.schouten_gap > 10.0 * r.tolerances.iso;
}

std::string describe(const QCReport& r) {
  if (r.point_class == PointClass::QC) return "near-isotropic point";
  return r.point_class == PointClass::Isotropic ? "isotropic point" : "non-QC point";
}

// Classification at q, or nullopt-equivalent message when q is off the chart.
struct Probe {
  MetricJet jet;
  QCReport report;
};

Probe probe(const CompiledMetric& cm, std::span<const double> q, const Tolerances& tol, double slack) {
  MetricJet jet = metric_jet(cm, q, slack);
  QCReport report = classify_point(jet, curvature_pack(jet), tol);
  return {std::move(jet), std::move(report)};
}

// d_k xi^m by central differences of the sign-aligned field.
Matrix dxi(const CompiledMetric& cm, std::span<const double> p, const Vector& xi, const Tolerances& tol) {
  const int n = cm.dimension();
  Matrix out(n, n);  // out(m, k) = d_k xi^m
  for (int k = 0; k < n; ++k) {
    out.col(k) = richardson(
        [&](double step) -> Vector { return aligned_xi(cm, shifted(p, k, step), xi, tol, kStencilSlack); },
        tol.fd_step);
  }
  return out;
}

// (nabla_X xi) for every coordinate X = d_k, as columns.
Matrix covariant_dxi(const CompiledMetric& cm, std::span<const double> p, const CurvaturePack& pack,
                     const Vector& xi, const Tolerances& tol) {
  const int n = cm.dimension();
  Matrix nab = dxi(cm, p, xi, tol);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l) nab(m, k) += pack.gamma(m, k, l) * xi(l);
  return nab;
}

}  // namespace

double LeafTrace::H_drift() const {
  double d = 0.0;
  for (double h : H_values) d = std::max(d, std::abs(h - H_values.front()));
  return d;
}

double LeafTrace::lambda_drift() const {
  double d = 0.0;
  for (double l : lambda_values) d = std::max(d, std::abs(l - lambda_values.front()));
  return d;
}

LeafTrace integrate_leaf(const CompiledMetric& cm, std::span<const double> p0, int n_steps, double step,
                         std::uint64_t direction_seed, const Tolerances& tol) {
  const int n = cm.dimension();
  if (n_steps < 0) throw InputError("BadParams", "step count must be non-negative");
  if (!(step > 0.0)) throw InputError("BadParams", "step must be positive");

  LeafTrace trace;
  trace.step = step;

  auto leave = [&](const std::string& why, std::span<const double> q) {
    throw LeftQCRegion(why + " at " + format_point(q), trace);
  };

  // unit projection of e_dir onto D at q
  auto field = [&](std::span<const double> q, int dir) -> Vector {
    Probe pr;
    try {
      pr = probe(cm, q, tol, 0.0);
    } catch (const DomainError& e) {
      leave(std::string("left the chart (") + e.what() + ")", q);
    }
    if (!has_line_field(pr.report)) leave(describe(pr.report), q);
    const Vector& xi = *pr.report.xi;
    Vector v = Vector::Unit(n, dir);
    const double e_norm = std::sqrt(pr.jet.g(dir, dir));
    v -= g_dot(pr.jet, v, xi) * xi;
    const double len = std::sqrt(std::max(0.0, g_dot(pr.jet, v, v)));
    if (len < 0.05 * e_norm) {
      throw TraceError("StepTooLarge", "projected direction degenerates at " + format_point(q));
    }
    return v / len;
  };

  auto record = [&](std::span<const double> q) {
    QCReport report;
    try {
      report = classify_at(cm, q, tol);
    } catch (const DomainError& e) {
      leave(std::string("left the chart (") + e.what() + ")", q);
    }
    if (!has_line_field(report)) leave(describe(report), q);
    const LeafCurvature lc = leaf_curvature(cm, q, report, tol);
    trace.points.emplace_back(q.begin(), q.end());
    trace.H_values.push_back(report.H);
    trace.N_values.push_back(report.N);
    trace.lambda_values.push_back(lc.lambda);
    trace.alpha_values.push_back(lc.alpha);
  };

  record(p0);

  // first coordinate direction (from the seed) that is not nearly parallel to xi
  const QCReport r0 = classify_at(cm, p0, tol);
  const MetricJet j0 = metric_jet(cm, p0);
  int dir = static_cast<int>(direction_seed % static_cast<std::uint64_t>(n));
  for (int tries = 0; tries < n; ++tries, dir = (dir + 1) % n) {
    const Vector e = Vector::Unit(n, dir);
    const double c = g_dot(j0, e, *r0.xi) / std::sqrt(j0.g(dir, dir));
    if (std::abs(c) < 0.9) break;
  }
  trace.direction = dir;

  Point p(p0.begin(), p0.end());
  for (int s = 0; s < n_steps; ++s) {
    const Vector k1 = field(p, dir);
    const Vector k2 = field(axpy(p, 0.5 * step, k1), dir);
    const Vector k3 = field(axpy(p, 0.5 * step, k2), dir);
    const Vector k4 = field(axpy(p, step, k3), dir);
    p = axpy(p, step / 6.0, k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(p);
  }
  return trace;
}

LeafShape leaf_shape(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol) {
  const MetricJet jet = metric_jet(cm, p);
  const CurvaturePack pack = curvature_pack(jet);
  const QCReport report = classify_point(jet, pack, tol);
  const LeafCurvature lc = leaf_curvature(cm, p, report, tol);
  const Vector& xi = *report.xi;
  const Matrix nab = covariant_dxi(cm, p, pack, xi, tol);
  const Matrix basis = horizontal_basis(jet, xi);
  // II(X, Y) = g(nabla_X xi, Y) = Y^T g nab X
  const Matrix second = basis.transpose() * jet.g * nab * basis;
  return {0.5 * (second + second.transpose()), lc.alpha};
}

std::vector<double> umbilicity_residuals(const CompiledMetric& cm, const LeafTrace& trace, const Tolerances& tol) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const Point& q : trace.points) {
    const LeafShape shape = leaf_shape(cm, q, tol);
    const Eigen::Index d = shape.second_form.rows();
    const double dev = (shape.second_form - shape.alpha * Matrix::Identity(d, d)).norm();
    out.push_back(dev / (1.0 + std::abs(shape.alpha)));
  }
  return out;
}

double umbilicity_residual(const CompiledMetric& cm, const LeafTrace& trace, const Tolerances& tol) {
  const std::vector<double> r = umbilicity_residuals(cm, trace, tol);
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

void fill_umbilicity(const CompiledMetric& cm, LeafTrace& trace, const Tolerances& tol) {
  trace.umbilicity_residuals = umbilicity_residuals(cm, trace, tol);
}

XiFlowTrace xi_flow(const CompiledMetric& cm, std::span<const double> p0, double t_end, double step,
                    const Tolerances& tol) {
  if (!(step > 0.0)) throw InputError("BadParams", "step must be positive");
  const int steps = std::max(1, static_cast<int>(std::lround(std::abs(t_end) / step)));
  const double h = t_end / steps;

  XiFlowTrace out;
  auto leave = [&](const std::string& why, std::span<const double> q) {
    LeafTrace partial;
    partial.points = out.points;
    partial.step = h;
    partial.method = "rk4-xi";
    throw LeftQCRegion(why + " at " + format_point(q), std::move(partial));
  };
  auto field = [&](std::span<const double> q, const Vector& ref) -> Vector {
    try {
      return aligned_xi(cm, q, ref, tol, 0.0);
    } catch (const DomainError& e) {
      leave(e.what(), q);
    }
    return Vector();
  };
  auto record = [&](std::span<const double> q, const Vector& ref) -> Vector {
    Probe pr;
    try {
      pr = probe(cm, q, tol, 0.0);
    } catch (const DomainError& e) {
      leave(e.what(), q);
    }
    if (!has_line_field(pr.report)) leave(describe(pr.report), q);
    Vector xi = *pr.report.xi;
    if (ref.size() > 0 && g_dot(pr.jet, xi, ref) < 0.0) xi = -xi;
    const CurvaturePack pack = curvature_pack(pr.jet);
    const Matrix nab = covariant_dxi(cm, q, pack, xi, tol);
    const Vector acc = nab * xi;
    const Matrix basis = horizontal_basis(pr.jet, xi);
    double geo = 0.0;
    for (Eigen::Index a = 0; a < basis.cols(); ++a) geo = std::max(geo, std::abs(g_dot(pr.jet, acc, basis.col(a))));
    out.points.emplace_back(q.begin(), q.end());
    out.xi.push_back(xi);
    out.geodesicity.push_back(geo);
    out.unit_defect.push_back(std::abs(g_dot(pr.jet, xi, xi) - 1.0));
    return xi;
  };

  Vector ref = record(p0, Vector());
  Point p(p0.begin(), p0.end());
  for (int s = 0; s < steps; ++s) {
    const Vector k1 = field(p, ref);
    const Vector k2 = field(axpy(p, 0.5 * h, k1), k1);
    const Vector k3 = field(axpy(p, 0.5 * h, k2), k2);
    const Vector k4 = field(axpy(p, h, k3), k3);
    p = axpy(p, h / 6.0, k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ref = record(p, ref);
  }
  return out;
}

double holonomy_defect(const CompiledMetric& cm, std::span<const double> p0, double loop_scale, const Tolerances& tol) {
  if (cm.dimension() != 3) throw InputError("BadDimension", "holonomy defect is defined for n = 3");
  if (!(loop_scale > 0.0)) throw InputError("BadParams", "loop scale must be positive");

  const Probe center = probe(cm, p0, tol, 0.0);
  if (!has_line_field(center.report)) {
    throw LeftQCRegion(describe(center.report) + " at " + format_point(p0), LeafTrace{});
  }
  const Vector eta0 = center.jet.g * *center.report.xi;
  int third = 0;
  for (int c = 1; c < 3; ++c)
    if (std::abs(eta0(c)) > std::abs(eta0(third))) third = c;
  const int a = (third + 1) % 3, b = (third + 2) % 3;

  // horizontal lift of the coordinate direction `dir`: e_dir - (eta_dir / eta_third) e_third
  auto lift = [&](std::span<const double> q, int dir) -> Vector {
    const Probe pr = probe(cm, q, tol, kStencilSlack);
    if (!has_line_field(pr.report)) {
      throw LeftQCRegion(describe(pr.report) + " at " + format_point(q), LeafTrace{});
    }
    const Vector eta = pr.jet.g * *pr.report.xi;
    Vector w = Vector::Unit(3, dir);
    w(third) -= eta(dir) / eta(third);
    return w;
  };

  const double s = loop_scale;
  constexpr int kSub = 8;
  const double h = s / kSub;
  Point p(p0.begin(), p0.end());
  p[a] -= 0.5 * s;
  p[b] -= 0.5 * s;
  const Point start = p;
  const std::array<std::pair<int, double>, 4> legs{{{a, 1.0}, {b, 1.0}, {a, -1.0}, {b, -1.0}}};
  for (const auto& [dir, sign] : legs) {
    auto v = [&](std::span<const double> q) -> Vector { return sign * lift(q, dir); };
    for (int k = 0; k < kSub; ++k) {
      const Vector k1 = v(p);
      const Vector k2 = v(axpy(p, 0.5 * h, k1));
      const Vector k3 = v(axpy(p, 0.5 * h, k2));
      const Vector k4 = v(axpy(p, h, k3));
      p = axpy(p, h / 6.0, k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  Vector gap(3);
  for (int c = 0; c < 3; ++c) gap(c) = p[c] - start[c];

  const Vector wa = lift(p0, a), wb = lift(p0, b);
  const double gram = g_dot(center.jet, wa, wa) * g_dot(center.jet, wb, wb) -
                      std::pow(g_dot(center.jet, wa, wb), 2);
  return std::abs(eta0.dot(gap)) / (s * s * std::sqrt(gram));
}

void write_trace_csv(std::ostream& os, const LeafTrace& trace) {
  const std::size_t n = trace.points.empty() ? 0 : trace.points.front().size();
  os << "step";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i;
  os << ",H,N,lambda,alpha,umbilicity_residual\n";
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    os << k;
    for (double x : trace.points[k]) os << ',' << x;
    os << ',' << trace.H_values[k] << ',' << trace.N_values[k] << ',' << trace.lambda_values[k] << ','
       << trace.alpha_values[k] << ',';
    if (k < trace.umbilicity_residuals.size()) os << trace.umbilicity_residuals[k];
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qcgeom
