#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qcgeom/errors.hpp"
#include "qcgeom/qc.hpp"

namespace qcgeom {

// Curve inside a curvature leaf (an integral manifold of D = xi^perp).
struct LeafTrace {
  std::vector<Point> points;
  std::vector<double> H_values;
  std::vector<double> N_values;
  std::vector<double> lambda_values;
  std::vector<double> alpha_values;
  std::vector<double> umbilicity_residuals;  // filled by fill_umbilicity
  double step = 0.0;
  int direction = 0;  // coordinate index projected onto D
  std::string method = "rk4";

  std::size_t size() const { return points.size(); }
  double H_drift() const;       // max |H_i - H_0|
  double lambda_drift() const;  // max |lambda_i - lambda_0|
};

// Raised when a trace reaches an isotropic, non-QC or out-of-chart point; the
// points accepted so far travel with it.
class LeftQCRegion : public TraceError {
 public:
  LeftQCRegion(const std::string& message, LeafTrace partial)
      : TraceError("LeftQCRegion", message), partial_(std::make_shared<LeafTrace>(std::move(partial))) {}
  const LeafTrace& partial() const { return *partial_; }

 private:
  std::shared_ptr<const LeafTrace> partial_;
};

// Fixed-step RK4 along the unit field obtained by projecting the coordinate
// direction (direction_seed mod n, skipping directions nearly parallel to xi)
// onto D. Throws LeftQCRegion or TraceError("StepTooLarge").
LeafTrace integrate_leaf(const CompiledMetric& cm, std::span<const double> p0, int n_steps, double step,
                         std::uint64_t direction_seed, const Tolerances& tol = {});

// Leaf second fundamental form II(X_a, X_b) = g(nabla_{X_a} xi, X_b) in a
// g-orthonormal basis {X_a} of D, with alpha at the same point.
struct LeafShape {
  Matrix second_form;
  double alpha = 0.0;
};
LeafShape leaf_shape(const CompiledMetric& cm, std::span<const double> p, const Tolerances& tol = {});

// |II - alpha I|_F / (1 + |alpha|) at each trace point, and the maximum.
std::vector<double> umbilicity_residuals(const CompiledMetric& cm, const LeafTrace& trace,
                                         const Tolerances& tol = {});
double umbilicity_residual(const CompiledMetric& cm, const LeafTrace& trace, const Tolerances& tol = {});
void fill_umbilicity(const CompiledMetric& cm, LeafTrace& trace, const Tolerances& tol = {});

// Integral curve of the sign-aligned unit field xi with a geodesicity monitor
// max_a |g(nabla_xi xi, X_a)| over a basis of D.
struct XiFlowTrace {
  std::vector<Point> points;
  std::vector<Vector> xi;
  std::vector<double> geodesicity;
  std::vector<double> unit_defect;  // |g(xi, xi) - 1|
};
XiFlowTrace xi_flow(const CompiledMetric& cm, std::span<const double> p0, double t_end, double step,
                    const Tolerances& tol = {});

// Horizontal transport around a coordinate square of side loop_scale centred
// at p0; returns |eta(gap)| / (area of the lifted square). n = 3 only.
double holonomy_defect(const CompiledMetric& cm, std::span<const double> p0, double loop_scale,
                       const Tolerances& tol = {});

// step, x0..x{n-1}, H, N, lambda, alpha, umbilicity_residual
void write_trace_csv(std::ostream& os, const LeafTrace& trace);

}  // namespace qcgeom
