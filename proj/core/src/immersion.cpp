#include "qcgeom/immersion.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fd.hpp"
#include "qcgeom/errors.hpp"

namespace qcgeom {

using detail::kStencilSlack;
using detail::richardson;
using detail::shifted;

KappaChoice choose_kappa(const CompiledMetric& cm, std::span<const Point> grid, const Tolerances& tol) {
  if (grid.empty()) throw InputError("EmptyGrid", "kappa needs at least one sample point");
  KappaChoice out;
  out.min_H = std::numeric_limits<double>::infinity();
  for (const Point& p : grid) {
    const double H = hn_fields(cm, p, tol).H;
    if (H < out.min_H) {
      out.min_H = H;
      out.argmin = p;
    }
  }
  out.samples = grid.size();
  out.kappa = out.min_H <= 0.0 ? 1.0 - out.min_H : 0.0;
  return out;
}

Matrix second_fundamental_form(const MetricJet& jet, const QCReport& report, double kappa) {
  if (report.point_class == PointClass::NonQC) {
    throw DomainError("NonQCPoint", "no umbilic-plus-line second fundamental form at " + format_point(jet.point));
  }
  const double mu = report.H + kappa;
  if (!(mu > 0.0)) {
    throw ImmersionError("NonpositiveOperand",
                         "H + kappa = " + std::to_string(mu) + " <= 0 at " + format_point(jet.point));
  }
  const double a = std::sqrt(mu);
  Matrix h = a * jet.g;
  if (report.point_class == PointClass::QC) {
    const Vector eta = jet.g * *report.xi;
    h += ((report.N - report.H) / a) * (eta * eta.transpose());
  }
  return h;
}

double gauss_residual(const MetricJet& jet, const CurvaturePack& pack, const Matrix& h, double kappa) {
  const int n = jet.dim();
  const Matrix& g = jet.g;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rhs = -kappa * (g(j, k) * g(i, l) - g(i, k) * g(j, l)) + h(j, k) * h(i, l) - h(i, k) * h(j, l);
          worst = std::max(worst, std::abs(pack.riemann(i, j, k, l) - rhs));
        }
  return worst / (1.0 + pack.riemann.max_abs());
}

double codazzi_residual(const CompiledMetric& cm, std::span<const double> p, double kappa, const Tolerances& tol) {
  const int n = cm.dimension();
  const MetricJet jet = metric_jet(cm, p);
  const CurvaturePack pack = curvature_pack(jet);
  const QCReport center = classify_point(jet, pack, tol);
  const Matrix h0 = second_fundamental_form(jet, center, kappa);

  auto h_at = [&](std::span<const double> q) -> Matrix {
    const MetricJet j = metric_jet(cm, q, kStencilSlack);
    const QCReport r = classify_point(j, curvature_pack(j), tol);
    if (r.point_class != center.point_class) {
      throw DomainError("StencilClassificationChange",
                        std::string(to_string(center.point_class)) + " at " + format_point(p) + " but " +
                            std::string(to_string(r.point_class)) + " at " + format_point(q));
    }
    return second_fundamental_form(j, r, kappa);
  };

  std::vector<Matrix> dh(n);  // dh[k](i, j) = d_k h_ij
  for (int k = 0; k < n; ++k) {
    dh[k] = richardson([&](double step) -> Matrix { return h_at(shifted(p, k, step)); }, tol.fd_step);
  }
  auto nabla = [&](int k, int i, int j) {
    double v = dh[k](i, j);
    for (int m = 0; m < n; ++m) v -= pack.gamma(m, k, i) * h0(m, j) + pack.gamma(m, k, j) * h0(i, m);
    return v;
  };
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(nabla(i, j, k) - nabla(j, i, k)));
  return worst / (1.0 + h0.cwiseAbs().maxCoeff());
}

std::string_view to_string(GaussBranch b) {
  switch (b) {
    case GaussBranch::Unique: return "Unique";
    case GaussBranch::Family: return "Family";
    case GaussBranch::None: return "None";
  }
  return "?";
}

std::array<double, 6> gauss_n3_residuals(double mu, double nu, const std::array<double, 6>& h) {
  const auto [h11, h22, h33, h12, h13, h23] = h;
  return {h11 * h22 - h12 * h12 - mu, h11 * h33 - h13 * h13 - nu, h22 * h33 - h23 * h23 - nu,
          h23 * h11 - h12 * h13,      h13 * h11 - h12 * h23,      h12 * h33 - h13 * h23};
}

std::array<double, 6> gauss_n3_family_member(double mu, double h11, double h12) {
  if (h11 == 0.0) throw InputError("BadParams", "family member needs h11 != 0");
  return {h11, (mu + h12 * h12) / h11, 0.0, h12, 0.0, 0.0};
}

GaussN3Solution solve_gauss_n3(double mu, double nu) {
  if (!(mu > 0.0)) throw InputError("InvalidMu", "mu = " + std::to_string(mu) + " must be positive");
  GaussN3Solution out;
  if (!std::isfinite(nu) || !std::isfinite(mu)) {
    out.note = "non-finite data";
    return out;
  }
  if (nu == 0.0) {
    out.branch = GaussBranch::Family;
    out.note = "h33 = h13 = h23 = 0, h11 h22 - h12^2 = mu";
    out.h = gauss_n3_family_member(mu, std::sqrt(mu), 0.0);
    return out;
  }
  // nu != 0 forces h11 = h22 and vanishing off-diagonal terms in the adapted frame
  const double a = std::sqrt(mu);
  out.branch = GaussBranch::Unique;
  out.h = {a, a, nu / a, 0.0, 0.0, 0.0};
  out.note = "unique up to a global sign";
  return out;
}

double cap_radius(double H_S, double kappa) {
  if (kappa < 0.0) throw InputError("NegativeKappa", "kappa must be non-negative");
  if (!(H_S > 0.0)) throw DomainError("NoCap", "no hyperspherical cap for H_S = " + std::to_string(H_S));
  if (kappa == 0.0) return 1.0 / std::sqrt(H_S);
  // arctanh(q) with q = sqrt(kappa / (H_S + kappa)), written to avoid 1 - q cancellation
  const double q = std::sqrt(kappa / (H_S + kappa));
  return std::log((1.0 + q) * std::sqrt((H_S + kappa) / H_S)) / std::sqrt(kappa);
}

double hypersphere_curvature(double d, double kappa) {
  if (!(d > 0.0)) throw InputError("BadRadius", "radius must be positive");
  if (kappa < 0.0) throw InputError("NegativeKappa", "kappa must be non-negative");
  if (kappa == 0.0) return 1.0 / (d * d);
  const double s = std::sinh(std::sqrt(kappa) * d);
  return kappa / (s * s);
}

double ball_volume(double lambda, double kappa, int n) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("InvalidLambda", "lambda = " + std::to_string(lambda) + " must be positive");
  }
  if (n < 2) throw InputError("BadDimension", "ball volume needs n >= 2");
  if (kappa < 0.0) throw InputError("NegativeKappa", "kappa must be non-negative");
  const double half = 0.5 * n;
  const double pi_half = std::pow(std::numbers::pi, half);
  if (kappa == 0.0) {
    const double r = 1.0 / std::sqrt(lambda);
    return pi_half / std::tgamma(half + 1.0) * std::pow(r, n);
  }
  const double sk = std::sqrt(kappa);
  const double r = std::asinh(std::sqrt(kappa / lambda)) / sk;
  const double sphere = 2.0 * pi_half / std::tgamma(half);
  // t = r u keeps the integrand of order one whatever the radius
  const double a = sk * r;
  auto integrand = [&](double u) { return std::pow(std::sinh(a * u) / a, n - 1); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-13);
  return sphere * std::pow(r, n) * integral;
}

double minkowski_dot(const Vector& a, const Vector& b) {
  const Eigen::Index m = a.size() - 1;
  return a.head(m).dot(b.head(m)) - a(m) * b(m);
}

HyperboloidPoint hyperboloid_base_point(int ambient_dim, double kappa) {
  if (!(kappa > 0.0)) throw InputError("FlatAmbient", "hyperboloid model needs kappa > 0");
  HyperboloidPoint x{Vector::Zero(ambient_dim), kappa};
  x.coords(ambient_dim - 1) = 1.0 / std::sqrt(kappa);
  return x;
}

namespace {

void check_normal(const HyperboloidPoint& x, const Vector& normal) {
  if (!(x.kappa > 0.0)) throw InputError("FlatAmbient", "hyperboloid model needs kappa > 0");
  if (normal.size() != x.coords.size()) throw InputError("NotTangent", "normal has the wrong dimension");
  const double scale = 1.0 + x.coords.norm() * normal.norm();
  if (std::abs(minkowski_dot(normal, normal) - 1.0) > 1e-8 * scale) {
    throw InputError("NotUnitNormal", "normal must have unit Minkowski norm");
  }
  if (std::abs(minkowski_dot(x.coords, normal)) > 1e-8 * scale) {
    throw InputError("NotTangent", "normal is not tangent to the hyperboloid at x");
  }
}

}  // namespace

HyperboloidPoint normal_flow(const HyperboloidPoint& x, const Vector& normal, double t) {
  check_normal(x, normal);
  const double sk = std::sqrt(x.kappa);
  return {x.coords * std::cosh(sk * t) + normal * (std::sinh(sk * t) / sk), x.kappa};
}

Vector normal_flow_velocity(const HyperboloidPoint& x, const Vector& normal, double t) {
  check_normal(x, normal);
  const double sk = std::sqrt(x.kappa);
  return x.coords * (sk * std::sinh(sk * t)) + normal * std::cosh(sk * t);
}

Vector gauss_map(const HyperboloidPoint& x, const Vector& normal) {
  check_normal(x, normal);
  const Vector lead = x.coords + normal / std::sqrt(x.kappa);  // null, future-directed
  const Eigen::Index m = lead.size() - 1;
  return lead.head(m) / lead(m);
}

namespace {

struct Profile {
  double f, f1, f2;
};

Profile profile_at(const ExprNode& warp, std::span<const double> p, double r) {
  Point q(p.begin(), p.end());
  q[0] = r;
  const Jet3 j = eval_jet3(warp, q);
  return {j.value(), j.d(0), j.d(0, 0)};
}

[[noreturn]] void profile_error(double r, const std::string& why) {
  throw ImmersionError("ProfileDomainError", "no real profile at r = " + std::to_string(r) + ": " + why);
}

// Squared speed of the extra ambient coordinate (s for kappa > 0, z for kappa = 0).
double speed2(const Profile& pr, double kappa) {
  if (kappa == 0.0) return 1.0 - pr.f1 * pr.f1;
  return pr.f * pr.f + (1.0 - pr.f1 * pr.f1) / kappa;
}

}  // namespace

RotationalSample rotational_immersion(const ExprNode& warp, double kappa, std::span<const double> p) {
  return rotational_immersion(warp, kappa, p, p.empty() ? 0.0 : p[0]);
}

RotationalSample rotational_immersion(const ExprNode& warp, double kappa, std::span<const double> p,
                                      double r_ref) {
  const int n = static_cast<int>(p.size());
  if (n < 2 || n > kMaxDim) throw InputError("BadDimension", "rotational immersion needs 2 <= n <= 6");
  if (kappa < 0.0) throw InputError("NegativeKappa", "kappa must be non-negative");
  const double r = p[0];
  const Profile pr = profile_at(warp, p, r);
  if (!(pr.f > 0.0)) profile_error(r, "warp is not positive");

  // extra coordinate and its first two r-derivatives
  const double q2 = speed2(pr, kappa);
  if (!(q2 > 1e-14)) profile_error(r, "profile speed squared " + std::to_string(q2));
  const double q = std::sqrt(q2);
  double e0 = 0.0;
  if (r != r_ref) {
    auto speed = [&](double t) {
      const Profile at = profile_at(warp, p, t);
      const double s2 = speed2(at, kappa);
      if (s2 < 0.0) profile_error(t, "profile speed squared " + std::to_string(s2));
      const double s = std::sqrt(s2);
      return kappa == 0.0 ? s : s / (at.f * at.f + 1.0 / kappa);
    };
    e0 = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, r_ref, r, 12, 1e-13);
  }
  double e1, e2;
  const double dq = (kappa == 0.0 ? -pr.f1 * pr.f2 : pr.f * pr.f1 - pr.f1 * pr.f2 / kappa) / q;
  if (kappa == 0.0) {
    e1 = q;
    e2 = dq;
  } else {
    const double rho2 = pr.f * pr.f + 1.0 / kappa;
    e1 = q / rho2;
    e2 = dq / rho2 - q * 2.0 * pr.f * pr.f1 / (rho2 * rho2);
  }

  // everything as jets in the chart coordinates
  Point at(p.begin(), p.end());
  const Jet3 f = eval_jet3(warp, at);
  const Jet3 rj = Jet3::variable(n, 0, r);
  const Jet3 e = rj.compose(e0, e1, e2, 0.0);
  std::vector<Jet3> u(n, Jet3::constant(n, 1.0));
  Jet3 sin_prod = Jet3::constant(n, 1.0);
  for (int a = 1; a < n; ++a) {
    const Jet3 th = Jet3::variable(n, a, p[a]);
    u[a - 1] = sin_prod * cos(th);
    sin_prod = sin_prod * sin(th);
  }
  u[n - 1] = sin_prod;

  const bool hyper = kappa > 0.0;
  const int m = hyper ? n + 2 : n + 1;
  std::vector<Jet3> X;
  X.reserve(m);
  for (int c = 0; c < n; ++c) X.push_back(f * u[c]);
  if (hyper) {
    const Jet3 rho = sqrt(f * f + Jet3::constant(n, 1.0 / kappa));
    X.push_back(rho * sinh(e));
    X.push_back(rho * cosh(e));
  } else {
    X.push_back(e);
  }

  auto dot = [&](const Vector& a, const Vector& b) { return hyper ? minkowski_dot(a, b) : a.dot(b); };
  Vector pos(m);
  Matrix tangent(m, n);
  for (int c = 0; c < m; ++c) {
    pos(c) = X[c].value();
    for (int i = 0; i < n; ++i) tangent(c, i) = X[c].d(i);
  }

  RotationalSample out;
  out.point = {pos, kappa};
  out.induced_metric.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.induced_metric(i, j) = dot(tangent.col(i), tangent.col(j));

  // unit normal: orthogonal (in the ambient form) to the tangent space and, for kappa > 0, to X
  Matrix constraints(hyper ? n + 1 : n, m);
  for (int i = 0; i < n; ++i) constraints.row(i) = tangent.col(i).transpose();
  if (hyper) constraints.row(n) = pos.transpose();
  if (hyper) constraints.col(m - 1) *= -1.0;
  const Eigen::FullPivLU<Matrix> lu(constraints);
  const Matrix kernel = lu.kernel();
  if (kernel.cols() != 1) profile_error(r, "degenerate tangent space");
  Vector nu = kernel.col(0);
  const double nn = dot(nu, nu);
  if (!(nn > 0.0)) profile_error(r, "normal is not spacelike");
  nu /= std::sqrt(nn);

  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector second(m);
      for (int c = 0; c < m; ++c) second(c) = X[c].d(i, j);
      b(i, j) = dot(second, nu);
    }
  out.shape_operator = out.induced_metric.ldlt().solve(b);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.transpose()), out.induced_metric,
                                                             Eigen::EigenvaluesOnly);
  out.principal = es.eigenvalues();
  return out;
}

}  // namespace qcgeom
