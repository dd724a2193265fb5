#pragma once

#include <functional>
#include <vector>

namespace ultrarelax {

// Adaptive composite Simpson quadrature. The error control is absolute:
// recursion bisects a panel until the Richardson estimate of its error is
// below the panel's share of tol, up to max_depth levels. Panels are first
// split at the supplied breakpoints so integrands that are only piecewise
// smooth (temperature schedule boundaries) never straddle a kink.
struct QuadratureOptions {
  double tol = 1e-10;
  int max_depth = 40;
  std::vector<double> breakpoints;
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

}  // namespace ultrarelax
