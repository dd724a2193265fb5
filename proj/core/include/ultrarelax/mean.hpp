#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ultrarelax/landscape.hpp"
#include "ultrarelax/quadrature.hpp"

namespace ultrarelax {

// Basin-occupation generator at time t: Q(i, j) = exchange rate j -> i for
// i != j, diagonal set so every column sums to zero. d/dt u = Q(t) u keeps
// u on the probability simplex.
Eigen::MatrixXd generator_matrix(const LandscapeModel& model, double t);

// Trajectory of the basin-occupation vector on a fixed time grid.
struct MeanEvolution {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::string method;
  // Largest |1 - sum(u)| the integrator corrected (rk4 only).
  double max_renormalization = 0.0;

  // State at a grid time. Lookup is by value with a tight tolerance; asking
  // for an off-grid time is a usage error, not an interpolation.
  const Eigen::VectorXd& at_time(double t) const;
};

// Product formula: u <- exp(h Q(s + k h)) u for k = 1..steps, h = (t-s)/steps,
// earliest factor applied first. Each factor is a scaling-and-squaring Pade
// matrix exponential, so every factor is column-stochastic to roundoff and
// the trajectory never leaves the simplex. First-order accurate in h for
// time-dependent rates, exact (to the exponential's accuracy) for constant
// ones.
MeanEvolution evolve_mean_trotter(const Eigen::VectorXd& u0, const LandscapeModel& model,
                                  double s, double t, int steps);

// Classical fixed-step fourth-order Runge-Kutta on the same ODE. dt is
// rounded so an integer number of steps lands on t exactly. The running sum
// is renormalized whenever it drifts from 1 by more than 1e-12 (drift is
// recorded); an entry below -1e-9 aborts with a step-size diagnostic.
MeanEvolution evolve_mean_rk4(const Eigen::VectorXd& u0, const LandscapeModel& model,
                              double s, double t, double dt);

struct TwoStateSolution {
  std::vector<double> times;
  std::vector<double> p1;  // occupation of the tracked basin
  std::vector<double> p2;  // computed from its own equation, not as 1 - p1
  std::string method;
};

// Exact integrating-factor solution of
//   p1' = gain(t) p2 - loss(t) p1,  p2 = 1 - p1 initially via (p1_0, 1-p1_0),
// written in the overflow-safe form
//   p1(t) = p1(a) e^{-dL} + int_a^t e^{-(L(t)-L(s))} gain(s) ds,
// advanced cell by cell over the grid with nested adaptive quadrature.
// p2 follows the mirrored equation, so p1 + p2 = 1 is a genuine accuracy
// check rather than an identity.
TwoStateSolution p1_closed_form(const RateFn& gain, const RateFn& loss,
                                const std::vector<double>& grid, double p1_0 = 1.0,
                                QuadratureOptions quadrature = {});

// Frozen-rate propagation: within each partition cell the rates are held at
// their left-endpoint values and the constant-rate two-state solution is
// applied exactly. First-order accurate in the cell width; exact for
// constant rates on any partition.
TwoStateSolution p1_taylor_piecewise(const RateFn& gain, const RateFn& loss,
                                     const std::vector<double>& partition, double p1_0 = 1.0);

}  // namespace ultrarelax
