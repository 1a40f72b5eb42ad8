#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qcgeom/catalog.hpp"
#include "qcgeom/errors.hpp"
#include "qcgeom/leaf_flow.hpp"

using namespace qcgeom;

TEST_CASE("leaves of a warped product are the spheres r = const") {
  const oracle::SinWarp w;
  for (int n = 3; n <= 4; ++n) {
    const CompiledMetric cm(builtin("warped", {{"n", std::to_string(n)}}));
    std::vector<double> p0(n, 1.3);
    p0[0] = 0.7;
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      LeafTrace t = integrate_leaf(cm, p0, 60, 0.01, seed);
      fill_umbilicity(cm, t);
      INFO("n=" << n << " seed=" << seed);
      REQUIRE(t.size() == 61);
      CHECK(t.method == "rk4");
      for (const Point& q : t.points) CHECK(std::abs(q[0] - 0.7) < 1e-9);
      CHECK(t.H_drift() < 1e-9);
      CHECK(t.lambda_drift() < 1e-6);
      CHECK(t.lambda_values[0] == doctest::Approx(w.lambda(0.7)).epsilon(1e-6));
      for (double u : t.umbilicity_residuals) CHECK(u < 1e-6);
      // the trace actually moves
      double moved = 0.0;
      for (int i = 1; i < n; ++i) moved += std::abs(t.points.back()[i] - p0[i]);
      CHECK(moved > 0.1);
    }
  }
}

TEST_CASE("leaf second fundamental form is alpha times the identity") {
  const oracle::SinWarp w;
  const CompiledMetric cm(builtin("warped", {{"n", "4"}}));
  const LeafShape s = leaf_shape(cm, std::vector<double>{2.0, 1.0, 1.5, 0.3});
  REQUIRE(s.second_form.rows() == 3);
  CHECK(s.alpha == doctest::Approx(w.alpha(2.0)).epsilon(1e-6));
  CHECK((s.second_form - s.alpha * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("leaf tracing stops where the line field does") {
  SUBCASE("isotropic start") {
    const CompiledMetric cm(builtin("sphere", {{"n", "3"}}));
    CHECK_THROWS_AS(integrate_leaf(cm, std::vector<double>{1.0, 1.0, 1.0}, 10, 0.01, 0), LeftQCRegion);
  }
  SUBCASE("leaving the chart keeps the partial trace") {
    const CompiledMetric cm(builtin("warped", {{"n", "3"}}));
    try {
      integrate_leaf(cm, std::vector<double>{0.7, 0.3, 1.0}, 500, 0.05, 0);
      FAIL("expected LeftQCRegion");
    } catch (const LeftQCRegion& e) {
      CHECK(e.kind() == "LeftQCRegion");
      CHECK(e.partial().size() > 1);
      CHECK(e.partial().size() < 501);
      for (const Point& q : e.partial().points) CHECK(cm.contains(q));
    }
  }
}

TEST_CASE("xi flow: geodesic unit field") {
  const CompiledMetric cm(builtin("warped", {{"n", "3"}}));
  const XiFlowTrace t = xi_flow(cm, std::vector<double>{0.5, 1.0, 1.0}, 1.0, 0.05);
  REQUIRE(t.points.size() >= 2);
  CHECK(t.points.back()[0] == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(t.points.back()[1] == doctest::Approx(1.0));
  for (double gd : t.geodesicity) CHECK(gd < 1e-6);
  for (double ud : t.unit_defect) CHECK(ud < 1e-10);
}

TEST_CASE("holonomy defect separates integrable and non-integrable D") {
  const CompiledMetric warped(builtin("warped", {{"n", "3"}}));
  CHECK(holonomy_defect(warped, std::vector<double>{0.7, 1.0, 1.0}, 1e-2) < 1e-6);
  const CompiledMetric heis(builtin("heisenberg"));
  // |d eta| = 1 on a unit horizontal area
  CHECK(holonomy_defect(heis, std::vector<double>{0.1, 0.2, 0.3}, 1e-2) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("trace CSV layout") {
  const CompiledMetric cm(builtin("warped", {{"n", "3"}}));
  LeafTrace t = integrate_leaf(cm, std::vector<double>{0.7, 1.0, 1.0}, 3, 0.01, 1);
  fill_umbilicity(cm, t);
  std::ostringstream os;
  write_trace_csv(os, t);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "step,x0,x1,x2,H,N,lambda,alpha,umbilicity_residual");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == 4);
}
