#pragma once

#include <span>

#include "qcgeom/metric.hpp"

namespace qcgeom::detail {

// Central difference of f at step h and h/2, combined by one Richardson step.
template <class F>
auto richardson(F&& f, double h) -> decltype(f(h)) {
  using T = decltype(f(h));
  auto central = [&](double step) -> T { return T((f(step) - f(-step)) * (1.0 / (2.0 * step))); };
  const T coarse = central(h);
  const T fine = central(0.5 * h);
  return T((4.0 * fine - coarse) * (1.0 / 3.0));
}

inline Point shifted(std::span<const double> p, int coord, double step) {
  Point q(p.begin(), p.end());
  q[coord] += step;
  return q;
}

// Stencils may step this far outside the domain box.
inline constexpr double kStencilSlack = 0.05;

}  // namespace qcgeom::detail
