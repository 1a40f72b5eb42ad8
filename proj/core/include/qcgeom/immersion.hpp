#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcgeom/qc.hpp"

namespace qcgeom {

// kappa = 1 - min H over the grid when that minimum is <= 0, else 0. The grid
// minimum stands in for inf H, so the result carries where it was found.
struct KappaChoice {
  double kappa = 0.0;
  double min_H = 0.0;
  Point argmin;
  std::size_t samples = 0;
};
KappaChoice choose_kappa(const CompiledMetric& cm, std::span<const Point> grid, const Tolerances& tol = {});

// h = sqrt(H + kappa) g + (N - H) / sqrt(H + kappa) eta (x) eta with eta = g(xi, .).
// Throws ImmersionError("NonpositiveOperand") when H + kappa <= 0 and
// DomainError("NonQCPoint") for NonQC reports.
Matrix second_fundamental_form(const MetricJet& jet, const QCReport& report, double kappa);

// max |R_ijkl + kappa (g_jk g_il - g_ik g_jl) - h_jk h_il + h_ik h_jl| / (1 + max |R|).
double gauss_residual(const MetricJet& jet, const CurvaturePack& pack, const Matrix& h, double kappa);

// max |(nabla_i h)_jk - (nabla_j h)_ik| / (1 + max |h|), with d h by central
// differences (Richardson) of the h field. Throws
// DomainError("StencilClassificationChange") when a stencil point classifies
// differently from p.
double codazzi_residual(const CompiledMetric& cm, std::span<const double> p, double kappa,
                        const Tolerances& tol = {});

// Gauss equations of a hypersurface in a 3-dimensional frame with principal
// sectional data mu = H + kappa (horizontal plane) and nu = N + kappa.
enum class GaussBranch { Unique, Family, None };
std::string_view to_string(GaussBranch b);

struct GaussN3Solution {
  GaussBranch branch = GaussBranch::None;
  // h11, h22, h33, h12, h13, h23; meaningful for Unique (up to a global sign)
  std::array<double, 6> h{};
  std::string note;
};

// Throws InputError("InvalidMu") when mu <= 0.
GaussN3Solution solve_gauss_n3(double mu, double nu);

// The six residuals of the system, in the order
// h11h22-h12^2-mu, h11h33-h13^2-nu, h22h33-h23^2-nu, h23h11-h12h13, h13h11-h12h23, h12h33-h13h23.
std::array<double, 6> gauss_n3_residuals(double mu, double nu, const std::array<double, 6>& h);

// Member of the nu = 0 family with prescribed h11 != 0 and h12.
std::array<double, 6> gauss_n3_family_member(double mu, double h11, double h12);

// Radius of the geodesic sphere of intrinsic curvature H_S in H^n_kappa.
// Throws DomainError("NoCap") when H_S <= 0 and InputError("NegativeKappa") when
// kappa < 0; kappa = 0 gives the Euclidean radius 1 / sqrt(H_S).
double cap_radius(double H_S, double kappa);

// Intrinsic curvature kappa / sinh^2(sqrt(kappa) d) of the geodesic sphere of
// radius d (1 / d^2 when kappa = 0). Inverse of cap_radius.
double hypersphere_curvature(double d, double kappa);

// Volume of the geodesic n-ball in H^n_kappa bounded by a sphere of intrinsic
// curvature lambda. Throws InputError("InvalidLambda") when lambda <= 0.
double ball_volume(double lambda, double kappa, int n);

// Ambient point. For kappa > 0: Minkowski R^{m,1} with the time coordinate
// last, on the sheet <x, x> = -1 / kappa with positive time. For kappa = 0 the
// coordinates are Euclidean.
struct HyperboloidPoint {
  Vector coords;
  double kappa = 0.0;
};

double minkowski_dot(const Vector& a, const Vector& b);
HyperboloidPoint hyperboloid_base_point(int ambient_dim, double kappa);

// exp_x(t nu) = x cosh(sqrt(kappa) t) + nu / sqrt(kappa) sinh(sqrt(kappa) t).
// Throws InputError("NotUnitNormal") / InputError("NotTangent").
HyperboloidPoint normal_flow(const HyperboloidPoint& x, const Vector& normal, double t);

// Endpoint at infinity of the ray t -> exp_x(t nu), as a unit vector of the
// spatial coordinates (the celestial sphere).
Vector gauss_map(const HyperboloidPoint& x, const Vector& normal);

// Velocity of the ray at time t; with -velocity as the new normal the flow runs back.
Vector normal_flow_velocity(const HyperboloidPoint& x, const Vector& normal, double t);

// Hypersurface of revolution for dr^2 + f(r)^2 g_{S^{n-1}} in the polar chart
// (r, theta_1, ..., theta_{n-1}):
//   kappa > 0: X = (f u(theta), rho sinh s, rho cosh s), rho^2 = f^2 + 1/kappa,
//              s'^2 = (f^2 + (1 - f'^2)/kappa) / rho^4
//   kappa = 0: X = (f u(theta), z), z'^2 = 1 - f'^2
// s (or z) is integrated from r_ref. Throws ImmersionError("ProfileDomainError")
// when the profile speed is not real at r.
struct RotationalSample {
  HyperboloidPoint point;
  Matrix induced_metric;
  Matrix shape_operator;  // g^{-1} b
  Vector principal;       // ascending eigenvalues of the shape operator
};
RotationalSample rotational_immersion(const ExprNode& warp, double kappa, std::span<const double> p,
                                      double r_ref);
RotationalSample rotational_immersion(const ExprNode& warp, double kappa, std::span<const double> p);

}  // namespace qcgeom
