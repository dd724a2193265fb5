#include "ultrarelax/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

namespace {

struct Panel {
  double x;
  double fx;
};

double adaptive(const std::function<double(double)>& f, Panel a, Panel b, Panel m,
                double whole, double tol, int depth) {
  const double xl = 0.5 * (a.x + m.x);
  const double xr = 0.5 * (m.x + b.x);
  const Panel l{xl, f(xl)};
  const Panel r{xr, f(xr)};
  const double left = (m.x - a.x) / 6.0 * (a.fx + 4.0 * l.fx + m.fx);
  const double right = (b.x - m.x) / 6.0 * (m.fx + 4.0 * r.fx + b.fx);
  const double delta = left + right - whole;
  // 1/15 Richardson factor for Simpson; accept when within budget or when
  // the bisection limit is reached (panel width ~ (b-a)/2^40, where any
  // smooth integrand is resolved to roundoff anyway).
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, m, l, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, r, right, 0.5 * tol, depth - 1);
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const Panel pa{a, f(a)};
  const Panel pb{b, f(b)};
  const Panel pm{0.5 * (a + b), f(0.5 * (a + b))};
  const double whole = (b - a) / 6.0 * (pa.fx + 4.0 * pm.fx + pb.fx);
  return adaptive(f, pa, pb, pm, whole, tol, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (!f) throw ConfigError("integrate: missing integrand");
  if (options.tol <= 0.0) throw ConfigError("integrate: tolerance must be positive");
  if (options.max_depth < 1) throw ConfigError("integrate: max_depth must be >= 1");
  if (b < a) return -integrate(f, b, a, options);

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : options.breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double tol_each = options.tol / static_cast<double>(cuts.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += integrate_smooth(f, cuts[i], cuts[i + 1], tol_each, options.max_depth);
  return sum;
}

}  // namespace ultrarelax
