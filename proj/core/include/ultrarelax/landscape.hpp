#pragma once

#include <vector>

#include "ultrarelax/profile.hpp"
#include "ultrarelax/tree.hpp"

namespace ultrarelax {

// Full kinetic model: N metabasins, each carrying a depth-resolvable radial
// jump profile, plus an N x N matrix of exchange rates between basins.
// exchange[to * N + from] is the rate at which mass sitting anywhere in
// basin `from` moves (uniformly) into basin `to`; diagonal slots are unused.
// All rates are functions of time. time_breakpoints lists the instants where
// any rate may lose smoothness (temperature protocol boundaries); quadrature
// and step-based solvers split there.
struct LandscapeModel {
  int p = 3;
  int num_basins = 1;
  std::vector<RadialProfile> profiles;
  std::vector<RateFn> exchange;
  std::vector<double> time_breakpoints;

  const RateFn& exchange_rate(int to, int from) const;

  // Total rate of leaving `basin` toward all other basins at time t.
  double exit_rate(int basin, double t) const;

  // Structural checks: prime p, one profile per basin with matching p,
  // exchange table of size N*N with callable off-diagonal entries.
  void validate() const;
};

// Two-basin convenience builder. Basin 0 is the tracked one: gain_into_0
// feeds it from basin 1, loss_from_0 drains it toward basin 1.
LandscapeModel make_two_basin_model(int p, RadialProfile basin0_profile,
                                    RadialProfile basin1_profile, RateFn gain_into_0,
                                    RateFn loss_from_0,
                                    std::vector<double> time_breakpoints = {});

}  // namespace ultrarelax
