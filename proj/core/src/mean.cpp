#include "ultrarelax/mean.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

namespace {

void check_simplex(const Eigen::VectorXd& u) {
  if (u.size() < 1) throw ConfigError("mean evolution: empty state vector");
  if (std::abs(u.sum() - 1.0) > 1e-12)
    throw ConfigError("mean evolution: initial occupations must sum to 1 within 1e-12");
  if (u.minCoeff() < -1e-12)
    throw ConfigError("mean evolution: initial occupations must be non-negative");
}

std::vector<double> ascending_grid(const std::vector<double>& grid, const char* who) {
  if (grid.empty()) throw ConfigError(std::string(who) + ": empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError(std::string(who) + ": time grid must be strictly increasing");
  return grid;
}

}  // namespace

Eigen::MatrixXd generator_matrix(const LandscapeModel& model, double t) {
  model.validate();
  const int n = model.num_basins;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int from = 0; from < n; ++from) {
    double out = 0.0;
    for (int to = 0; to < n; ++to) {
      if (to == from) continue;
      const double w = model.exchange_rate(to, from)(t);
      if (!(w >= 0.0)) throw ConfigError("generator: exchange rates must be non-negative");
      q(to, from) = w;
      out += w;
    }
    q(from, from) = -out;
  }
  return q;
}

const Eigen::VectorXd& MeanEvolution::at_time(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t best = static_cast<std::size_t>(it - times.begin());
  if (best == times.size() || (best > 0 && t - times[best - 1] < times[best] - t)) --best;
  if (times.empty() || std::abs(times[best] - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw ConfigError("mean evolution: time " + std::to_string(t) + " is not on the recorded grid");
  return states[best];
}

MeanEvolution evolve_mean_trotter(const Eigen::VectorXd& u0, const LandscapeModel& model,
                                  double s, double t, int steps) {
  model.validate();
  check_simplex(u0);
  if (steps < 1) throw ConfigError("trotter: steps must be >= 1");
  if (!(t >= s)) throw ConfigError("trotter: end time must be >= start time");

  MeanEvolution evo;
  evo.method = "trotter";
  evo.times.reserve(static_cast<std::size_t>(steps) + 1);
  evo.states.reserve(static_cast<std::size_t>(steps) + 1);
  evo.times.push_back(s);
  evo.states.push_back(u0);

  const double h = (t - s) / static_cast<double>(steps);
  Eigen::VectorXd u = u0;
  for (int k = 1; k <= steps; ++k) {
    const double tk = s + h * static_cast<double>(k);
    const Eigen::MatrixXd factor = (h * generator_matrix(model, tk)).exp();
    u = factor * u;
    evo.times.push_back(tk);
    evo.states.push_back(u);
  }
  return evo;
}

MeanEvolution evolve_mean_rk4(const Eigen::VectorXd& u0, const LandscapeModel& model,
                              double s, double t, double dt) {
  model.validate();
  check_simplex(u0);
  if (!(dt > 0.0)) throw ConfigError("rk4: dt must be positive");
  if (!(t >= s)) throw ConfigError("rk4: end time must be >= start time");

  const auto steps = std::max<long long>(1, std::llround((t - s) / dt));
  const double h = (t - s) / static_cast<double>(steps);

  MeanEvolution evo;
  evo.method = "rk4";
  evo.times.reserve(static_cast<std::size_t>(steps) + 1);
  evo.states.reserve(static_cast<std::size_t>(steps) + 1);
  evo.times.push_back(s);
  evo.states.push_back(u0);

  Eigen::VectorXd u = u0;
  for (long long k = 0; k < steps; ++k) {
    const double tk = s + h * static_cast<double>(k);
    const Eigen::MatrixXd qa = generator_matrix(model, tk);
    const Eigen::MatrixXd qm = generator_matrix(model, tk + 0.5 * h);
    const Eigen::MatrixXd qb = generator_matrix(model, tk + h);
    const Eigen::VectorXd k1 = qa * u;
    const Eigen::VectorXd k2 = qm * (u + 0.5 * h * k1);
    const Eigen::VectorXd k3 = qm * (u + 0.5 * h * k2);
    const Eigen::VectorXd k4 = qb * (u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (u.minCoeff() < -1e-9)
      throw NumericalError("rk4: occupation went below -1e-9 at t=" +
                           std::to_string(tk + h) + "; reduce dt");
    const double drift = std::abs(u.sum() - 1.0);
    if (drift > 1e-12) {
      evo.max_renormalization = std::max(evo.max_renormalization, drift);
      u /= u.sum();
    }
    evo.times.push_back(tk + h);
    evo.states.push_back(u);
  }
  return evo;
}

TwoStateSolution p1_closed_form(const RateFn& gain, const RateFn& loss,
                                const std::vector<double>& grid, double p1_0,
                                QuadratureOptions quadrature) {
  if (!gain || !loss) throw ConfigError("p1_closed_form: missing rate functions");
  const auto times = ascending_grid(grid, "p1_closed_form");
  if (p1_0 < 0.0 || p1_0 > 1.0)
    throw ConfigError("p1_closed_form: initial occupation must lie in [0, 1]");

  const auto lambda = [&](double s) { return gain(s) + loss(s); };
  QuadratureOptions inner = quadrature;
  inner.tol = std::min(quadrature.tol * 1e-2, 1e-12);

  TwoStateSolution sol;
  sol.method = "closed_form_two_state";
  sol.times = times;
  sol.p1.reserve(times.size());
  sol.p2.reserve(times.size());
  double p1 = p1_0;
  double p2 = 1.0 - p1_0;
  sol.p1.push_back(p1);
  sol.p2.push_back(p2);

  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = times[i - 1];
    const double b = times[i];
    const double dl = integrate(lambda, a, b, inner);
    // Remaining exponent from s to the cell end, evaluated fresh per sample;
    // keeps every exponential argument non-positive regardless of rate size.
    const auto tail = [&](double s) { return integrate(lambda, s, b, inner); };
    const double flow1 = integrate([&](double s) { return std::exp(-tail(s)) * gain(s); }, a, b, quadrature);
    const double flow2 = integrate([&](double s) { return std::exp(-tail(s)) * loss(s); }, a, b, quadrature);
    p1 = p1 * std::exp(-dl) + flow1;
    p2 = p2 * std::exp(-dl) + flow2;
    sol.p1.push_back(p1);
    sol.p2.push_back(p2);
  }
  return sol;
}

TwoStateSolution p1_taylor_piecewise(const RateFn& gain, const RateFn& loss,
                                     const std::vector<double>& partition, double p1_0) {
  if (!gain || !loss) throw ConfigError("p1_taylor_piecewise: missing rate functions");
  const auto times = ascending_grid(partition, "p1_taylor_piecewise");
  if (p1_0 < 0.0 || p1_0 > 1.0)
    throw ConfigError("p1_taylor_piecewise: initial occupation must lie in [0, 1]");

  TwoStateSolution sol;
  sol.method = "frozen_rate_cells";
  sol.times = times;
  double p1 = p1_0;
  double p2 = 1.0 - p1_0;
  sol.p1.push_back(p1);
  sol.p2.push_back(p2);

  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = times[i - 1];
    const double g = gain(a);
    const double l = loss(a);
    const double lam = g + l;
    const double width = times[i] - a;
    if (lam > 0.0) {
      const double decay = std::exp(-lam * width);
      const double fill = -std::expm1(-lam * width);  // 1 - e^{-lam w}, accurately
      p1 = p1 * decay + (g / lam) * fill;
      p2 = p2 * decay + (l / lam) * fill;
    }
    sol.p1.push_back(p1);
    sol.p2.push_back(p2);
  }
  return sol;
}

}  // namespace ultrarelax
