#pragma once

#include <cstdint>
#include <vector>

#include "ultrarelax/landscape.hpp"

namespace ultrarelax {

// One realized trajectory of the jump process at quotient depth n.
// states[0] is the sampled initial leaf; states[k] is entered at
// jump_times[k-1]. Thinned (rejected) proposals leave no trace.
struct SamplePath {
  std::uint64_t path_index = 0;
  std::vector<double> jump_times;
  std::vector<TreeAddress> states;
};

struct McOptions {
  std::uint64_t paths = 100000;
  std::uint64_t seed = 1;
  int threads = 0;           // 0: hardware concurrency
  double bound_safety = 1.05;
  int bound_samples = 64;    // per smooth schedule piece when bounding rates
};

// Leaf-occupation counts at each checkpoint, dense (basin-major) indexing.
// counts[i][leaf] over all paths; occupancy of any region follows by
// summing leaves. Aggregation order is fixed by path index, so results are
// byte-identical for a fixed seed regardless of the thread count.
struct McResult {
  std::vector<double> times;
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t paths = 0;
  double rate_bound_hz = 0.0;  // thinning bound actually used
};

// Exit rate of a leaf in `basin` at time t: intra-basin shells resolvable at
// depth n plus the exchange rates out of the basin.
double mc_exit_rate(const LandscapeModel& model, int n, int basin, double t);

// Thinning bound: the maximum exit rate over basins and over the time
// window, sampled at schedule breakpoints and inside every smooth piece,
// inflated by bound_safety. A proposal exceeding the bound at runtime throws
// NumericalError (the bound was not an upper bound; fix the model sampling).
double mc_rate_bound(const LandscapeModel& model, int n, double t_begin, double t_end,
                     const McOptions& options = {});

// Simulates one path; deterministic in (seed, path_index).
SamplePath mc_sample_path(const LandscapeModel& model, const BallSpec& initial, int n,
                          double horizon, std::uint64_t seed, std::uint64_t path_index,
                          double rate_bound_hz);

// Ensemble run: paths independent trajectories started uniformly in
// `initial`, occupation counted at the checkpoint times (which must be
// ascending; the last one is the horizon).
McResult mc_simulate(const LandscapeModel& model, const BallSpec& initial, int n,
                     const std::vector<double>& checkpoints, const McOptions& options = {});

// Fraction of paths inside `ball` at checkpoint index i.
double mc_ball_occupancy(const McResult& result, const LandscapeModel& model, int n,
                         const BallSpec& ball, std::size_t checkpoint);

// Upper-tail probability of a chi-square statistic with dof degrees of
// freedom (regularized incomplete gamma).
double chi_square_pvalue(double statistic, int dof);

}  // namespace ultrarelax
