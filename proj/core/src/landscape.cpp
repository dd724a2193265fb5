#include "ultrarelax/landscape.hpp"

#include <string>
#include <utility>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

const RateFn& LandscapeModel::exchange_rate(int to, int from) const {
  if (to < 0 || to >= num_basins || from < 0 || from >= num_basins || to == from)
    throw ConfigError("landscape: exchange rate indices out of range");
  return exchange[static_cast<std::size_t>(to) * static_cast<std::size_t>(num_basins) +
                  static_cast<std::size_t>(from)];
}

double LandscapeModel::exit_rate(int basin, double t) const {
  if (basin < 0 || basin >= num_basins)
    throw ConfigError("landscape: basin index out of range");
  double sum = 0.0;
  for (int to = 0; to < num_basins; ++to)
    if (to != basin) sum += exchange_rate(to, basin)(t);
  return sum;
}

void LandscapeModel::validate() const {
  if (!is_prime(p)) throw ConfigError("landscape: p must be prime, got " + std::to_string(p));
  if (num_basins < 1) throw ConfigError("landscape: need at least one basin");
  if (static_cast<int>(profiles.size()) != num_basins)
    throw ConfigError("landscape: expected one radial profile per basin");
  for (const auto& prof : profiles) {
    if (prof.p != p) throw ConfigError("landscape: profile p differs from model p");
    if (prof.levels.empty()) throw ConfigError("landscape: profile has no levels");
  }
  const auto n2 = static_cast<std::size_t>(num_basins) * static_cast<std::size_t>(num_basins);
  if (exchange.size() != n2 && !(num_basins == 1 && exchange.empty()))
    throw ConfigError("landscape: exchange table must be N x N");
  for (int to = 0; to < num_basins; ++to)
    for (int from = 0; from < num_basins; ++from)
      if (to != from && !exchange_rate(to, from))
        throw ConfigError("landscape: missing exchange rate");
}

LandscapeModel make_two_basin_model(int p, RadialProfile basin0_profile,
                                    RadialProfile basin1_profile, RateFn gain_into_0,
                                    RateFn loss_from_0, std::vector<double> time_breakpoints) {
  LandscapeModel model;
  model.p = p;
  model.num_basins = 2;
  model.profiles = {std::move(basin0_profile), std::move(basin1_profile)};
  model.exchange.resize(4);
  model.exchange[0 * 2 + 1] = std::move(gain_into_0);
  model.exchange[1 * 2 + 0] = std::move(loss_from_0);
  model.time_breakpoints = std::move(time_breakpoints);
  model.validate();
  return model;
}

}  // namespace ultrarelax
