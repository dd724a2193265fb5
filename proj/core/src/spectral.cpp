#include "ultrarelax/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

namespace {

QuadratureOptions merge_breakpoints(QuadratureOptions base, const std::vector<double>& extra) {
  base.breakpoints.insert(base.breakpoints.end(), extra.begin(), extra.end());
  return base;
}

int gamma_scale_for(const WaveletIndex& index, EigenlevelConvention convention) {
  return convention == EigenlevelConvention::support ? index.scale : index.scale - 1;
}

std::vector<double> checked_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("survival: empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError("survival: time grid must be strictly increasing");
  return grid;
}

}  // namespace

double gamma_eigenvalue(const RadialProfile& profile, double outflow, int scale, double t) {
  if (scale > 0) throw ConfigError("gamma: scale must be <= 0");
  if (outflow < 0.0) throw ConfigError("gamma: outflow rate must be non-negative");
  const int m = -scale;
  return radial_tail_integral(profile, m, t) + ball_volume(profile.p, scale - 1) * profile.level(m, t) +
         outflow;
}

double integrated_gamma(const RadialProfile& profile, const RateFn& outflow, int scale, double s,
                        double t, const QuadratureOptions& quadrature) {
  if (scale > 0) throw ConfigError("integrated_gamma: scale must be <= 0");
  const RateFn out = outflow ? outflow : constant_rate(0.0);
  return integrate([&](double tau) { return gamma_eigenvalue(profile, out(tau), scale, tau); }, s, t,
                   quadrature);
}

MeanEvolver make_rk4_mean_evolver(double dt) {
  if (!(dt > 0.0)) throw ConfigError("mean evolver: dt must be positive");
  return [dt](const Eigen::VectorXd& u0, const LandscapeModel& model, double s, double t) {
    return evolve_mean_rk4(u0, model, s, t, dt).states.back();
  };
}

MeanEvolver make_trotter_mean_evolver(int steps) {
  if (steps < 1) throw ConfigError("mean evolver: steps must be >= 1");
  return [steps](const Eigen::VectorXd& u0, const LandscapeModel& model, double s, double t) {
    return evolve_mean_trotter(u0, model, s, t, steps).states.back();
  };
}

SpectralState expand_ball_indicator(const BallSpec& ball, const LandscapeModel& model) {
  model.validate();
  validate_ball(model.p, ball);
  if (ball.basin >= model.num_basins)
    throw ConfigError("expand: ball basin exceeds the model");

  SpectralState state;
  state.mean = Eigen::VectorXd::Zero(model.num_basins);
  state.mean(ball.basin) = 1.0;

  const int p = model.p;
  for (int r = ball.scale + 1; r <= 0; ++r) {
    const int m = -r;
    const std::vector<std::uint8_t> offset(ball.center.begin(), ball.center.begin() + m);
    const int child_digit = ball.center[static_cast<std::size_t>(m)];
    const double amplitude = std::sqrt(static_cast<double>(ipow(p, m)));
    for (int j = 1; j < p; ++j) {
      const double phase =
          -2.0 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(child_digit) /
          static_cast<double>(p);
      state.terms.push_back(
          WaveletTerm{WaveletIndex{ball.basin, r, j, offset}, std::polar(amplitude, phase)});
    }
  }
  return state;
}

SpectralState evolve_spectral(const SpectralState& state, const LandscapeModel& model, double s,
                              double t, const MeanEvolver& mean_evolver,
                              const SpectralOptions& options) {
  model.validate();
  if (!(t >= s)) throw ConfigError("evolve_spectral: end time must be >= start time");
  if (!mean_evolver) throw ConfigError("evolve_spectral: missing mean evolver");
  if (state.mean.size() != model.num_basins)
    throw ConfigError("evolve_spectral: mean vector does not match the basin count");

  SpectralState next;
  next.mean = mean_evolver(state.mean, model, s, t);

  const auto quadrature = merge_breakpoints(options.quadrature, model.time_breakpoints);
  std::map<std::pair<int, int>, double> damping;
  next.terms.reserve(state.terms.size());
  for (const auto& term : state.terms) {
    validate_wavelet(model.p, term.index);
    if (term.index.basin >= model.num_basins)
      throw ConfigError("evolve_spectral: term basin exceeds the model");
    const int gscale = gamma_scale_for(term.index, options.convention);
    const auto key = std::make_pair(term.index.basin, gscale);
    auto it = damping.find(key);
    if (it == damping.end()) {
      const int basin = term.index.basin;
      const RateFn outflow = [&model, basin](double tau) { return model.exit_rate(basin, tau); };
      const double exponent = integrated_gamma(model.profiles[static_cast<std::size_t>(basin)],
                                               outflow, gscale, s, t, quadrature);
      it = damping.emplace(key, std::exp(-exponent)).first;
    }
    next.terms.push_back(WaveletTerm{term.index, term.coefficient * it->second});
  }
  return next;
}

double reconstruct_density(const SpectralState& state, const LandscapeModel& model,
                           const TreeAddress& x) {
  model.validate();
  validate_address(model.p, x);
  if (x.basin >= model.num_basins) throw ConfigError("reconstruct: address basin exceeds the model");
  std::complex<double> value{state.mean(x.basin), 0.0};
  for (const auto& term : state.terms)
    value += term.coefficient * eval_wavelet(model.p, term.index, x);
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw NumericalError("reconstruct: density has a non-cancelling imaginary part " +
                         std::to_string(value.imag()));
  return value.real();
}

SurvivalSeries survival_probability(const BallSpec& ball, const LandscapeModel& model,
                                    const std::vector<double>& grid,
                                    const SurvivalOptions& options) {
  model.validate();
  validate_ball(model.p, ball);
  const auto times = checked_grid(grid);

  const auto initial = expand_ball_indicator(ball, model);
  const double volume = ball_volume(model.p, ball.scale);
  const int tracked = ball.basin;

  // Terms sharing a damping exponent collapse to one weight.
  std::map<int, double> group_weight;
  for (const auto& term : initial.terms) {
    const int gscale = gamma_scale_for(term.index, options.convention);
    group_weight[gscale] += std::norm(term.coefficient);
  }

  const auto quadrature = merge_breakpoints(options.quadrature, model.time_breakpoints);
  const RateFn outflow = [&model, tracked](double tau) { return model.exit_rate(tracked, tau); };
  const auto& profile = model.profiles[static_cast<std::size_t>(tracked)];

  SurvivalSeries series;
  series.times = times;
  series.survival.reserve(times.size());
  series.mean_occupation.reserve(times.size());

  // Mean occupations along the grid.
  std::vector<double> occupation(times.size());
  occupation[0] = 1.0;
  if (options.mean_evolver) {
    series.mean_method = "custom";
    Eigen::VectorXd u = initial.mean;
    for (std::size_t i = 1; i < times.size(); ++i) {
      u = options.mean_evolver(u, model, times[i - 1], times[i]);
      occupation[i] = u(tracked);
    }
  } else if (model.num_basins == 1) {
    series.mean_method = "isolated_basin";
    std::fill(occupation.begin(), occupation.end(), 1.0);
  } else if (model.num_basins == 2) {
    series.mean_method = "closed_form_two_state";
    const int other = 1 - tracked;
    QuadratureOptions mean_quadrature = quadrature;
    const auto sol = p1_closed_form(model.exchange_rate(tracked, other),
                                    model.exchange_rate(other, tracked), times, 1.0, mean_quadrature);
    occupation = sol.p1;
  } else {
    series.mean_method = "rk4";
    double min_cell = times.back() - times.front();
    for (std::size_t i = 1; i < times.size(); ++i) min_cell = std::min(min_cell, times[i] - times[i - 1]);
    const auto evolver = make_rk4_mean_evolver(std::max(min_cell / 64.0, 1e-300));
    Eigen::VectorXd u = initial.mean;
    for (std::size_t i = 1; i < times.size(); ++i) {
      u = evolver(u, model, times[i - 1], times[i]);
      occupation[i] = u(tracked);
    }
  }

  std::map<int, double> exponent;
  for (const auto& [gscale, weight] : group_weight) exponent[gscale] = 0.0;

  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0)
      for (auto& [gscale, expo] : exponent)
        expo += integrated_gamma(profile, outflow, gscale, times[i - 1], times[i], quadrature);
    double wavelet_part = 0.0;
    for (const auto& [gscale, weight] : group_weight) wavelet_part += weight * std::exp(-exponent[gscale]);
    series.survival.push_back(volume * (occupation[i] + wavelet_part));
    series.mean_occupation.push_back(occupation[i]);
  }
  return series;
}

}  // namespace ultrarelax
