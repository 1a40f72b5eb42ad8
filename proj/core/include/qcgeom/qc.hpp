#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "qcgeom/tensor.hpp"

namespace qcgeom {

struct Tolerances {
  double iso = 1e-7;      // Schouten spread threshold, relative to (1 + |R|)
  double qc = 1e-6;       // decomposition residual threshold
  double fd_step = 1e-4;  // finite-difference step for grad H, d(eta), d(xi), d(h)
};

enum class PointClass { Isotropic, QC, NonQC };
std::string_view to_string(PointClass c);

struct QCReport {
  PointClass point_class = PointClass::NonQC;
  std::optional<Vector> xi;  // unit line generator, sign-normalised
  double H = 0.0;            // curvature of planes orthogonal to xi
  double N = 0.0;            // curvature of planes containing xi
  std::optional<double> lambda;
  std::optional<double> alpha;
  double decomposition_residual = 0.0;
  double schouten_gap = 0.0;  // |N - H|
  double scalar = 0.0;
  Tolerances tolerances;
};

// Flips v so that its largest-magnitude component (first one on ties) is positive.
Vector sign_normalized(Vector v);

// Angle-weighted curvature model K = H sin^2 + N cos^2 for the plane spanned
// by the g-orthonormal pair (u, v); cos^2 = g(xi,u)^2 + g(xi,v)^2.
double qc_model_curvature(const MetricJet& jet, const Vector& xi, double H, double N, const Vector& u,
                          const Vector& v);

// Isotropic / QC / NonQC from the Schouten spectrum and a plane-decomposition
// check. Requires n >= 3.
QCReport classify_point(const MetricJet& jet, const CurvaturePack& pack, const Tolerances& tol = {});

// Builds jet, pack and report at p; `slack` widens the domain box for
// finite-difference stencils.
QCReport classify_at(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {},
                     double slack = 0.0);

struct HNPair {
  double H = 0.0;
  double N = 0.0;
};
// Smooth extension of (H, N): isotropic points report R / (n (n - 1)) twice.
HNPair hn_fields(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {});

struct LeafCurvature {
  double lambda = 0.0;
  double alpha = 0.0;        // xi(H) / (2 (N - H)) for the sign-normalised xi at p
  double xi_H = 0.0;         // xi(H)
  double grad_H_norm2 = 0.0; // |grad H|^2_g
  Vector grad_H;             // coordinate differential dH
};
// Central differences of H with one Richardson step. Throws
// DomainError("NearIsotropic") when |H - N| <= 10 tol.iso or the point is not QC.
LeafCurvature leaf_curvature(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {});
// Same, reusing an existing report at p.
LeafCurvature leaf_curvature(const CompiledMetric& cm, std::span<const double> p, const QCReport& report,
                             const Tolerances& tol);

// Classifies and fills lambda / alpha when the point is QC away from the
// isotropic set.
QCReport analyze_point(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {});

// xi at q with its sign aligned to `reference` (g-inner product at q).
// Throws TraceError("SignAlignmentFailure") when |cos| < 0.1 and
// DomainError("NearIsotropic") when q is not a QC point.
Vector aligned_xi(const CompiledMetric& cm, std::span<const double> q, const Vector& reference,
                  const Tolerances& tol, double slack);

// d(eta)_{ij} = d_i eta_j - d_j eta_i for eta = g(xi, .), by central
// differences of the sign-aligned xi field (Richardson-extrapolated).
Matrix d_eta(const CompiledMetric& cm, std::span<const double> p, const Vector& xi, const Tolerances& tol);

// g-orthonormal basis of the orthogonal complement of xi (columns).
Matrix horizontal_basis(const MetricJet& jet, const Vector& xi);

// |d(eta)(X, Y)| for a g-orthonormal basis {X, Y} of D = xi^perp; n = 3 only.
double integrability_check(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {});

}  // namespace qcgeom
