#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qcgeom/metric.hpp"

namespace qcgeom {

using CatalogParams = std::map<std::string, std::string, std::less<>>;

// Where a ground-truth value comes from: a textbook fact, a closed form worked
// out for the family, a number measured by an independent computation, or a
// value quoted from the literature that is kept for reference only.
enum class AnnotationSource { Standard, ClosedForm, Computed, Reported };
std::string_view to_string(AnnotationSource s);

struct Annotation {
  std::string quantity;
  std::string value;
  AnnotationSource source = AnnotationSource::Standard;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  CatalogParams defaults;
  std::vector<Annotation> annotations;
};

// euclidean, sphere, hyperbolic, warped, heisenberg, hopf_cylinder, graph.
const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(std::string_view name);  // throws UnknownCatalogName

// Throws InputError("UnknownCatalogName") / InputError("BadParams").
MetricSpec builtin(std::string_view name, const CatalogParams& params = {});

// dr^2 + f(r)^2 g_{S^{n-1}} in the chart (r, t1, ..., t_{n-1}); `f` is an
// expression in r (or x0).
MetricSpec warped_metric(int n, std::string_view f, Interval r_range);

// 0 for t <= 0, 1 for t >= delta, infinitely flat at both ends, 1/2 at delta/2.
// Throws InputError("BadDelta") when delta <= 0.
double flat_bump(double t, double delta);

struct Segment {
  enum class Kind { Cap, Tube, Form };
  Kind kind = Kind::Tube;
  double curvature = 0.0;  // Cap (> 0) and Form
  double radius = 0.0;     // Tube
  double length = 0.0;     // 0 = derive from the neighbouring warp values (Cap only)
};

// Linear chain of pieces glued along t; the warp switches from one piece's
// profile to the next over [junction, junction + delta].
struct GraphBuildSpec {
  int dimension = 3;
  std::vector<Segment> segments;
  double delta = 0.2;
};

// "cap:K[:LEN],tube:RHO:LEN,form:K:LEN"
GraphBuildSpec parse_graph_segments(std::string_view text, int dimension, double delta);

struct GraphLayout {
  std::vector<double> junctions;  // interior junction positions
  double length = 0.0;            // total t-length
  std::string warp;               // expression in x0
};
// Throws InputError("JunctionMismatch") / InputError("NonpositiveWarp") / InputError("BadParams").
GraphLayout graph_layout(const GraphBuildSpec& spec);
MetricSpec graph_build(const GraphBuildSpec& spec);

}  // namespace qcgeom
