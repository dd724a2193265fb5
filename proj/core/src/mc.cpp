#include "ultrarelax/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "ultrarelax/dense.hpp"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/rng.hpp"

namespace ultrarelax {

namespace {

// Uniform leaf inside the ball: the constrained prefix is copied, every
// deeper digit is drawn uniformly.
TreeAddress random_leaf_in_ball(CounterRng& rng, int p, int n, const BallSpec& ball) {
  TreeAddress leaf;
  leaf.basin = ball.basin;
  leaf.digits.resize(static_cast<std::size_t>(n));
  const int fixed = -ball.scale;
  for (int m = 0; m < n; ++m) {
    leaf.digits[static_cast<std::size_t>(m)] =
        m < fixed ? ball.center[static_cast<std::size_t>(m)]
                  : static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(p)));
  }
  return leaf;
}

}  // namespace

double mc_exit_rate(const LandscapeModel& model, int n, int basin, double t) {
  return radial_tail_integral(model.profiles[static_cast<std::size_t>(basin)], n - 1, t) +
         model.exit_rate(basin, t);
}

double mc_rate_bound(const LandscapeModel& model, int n, double t_begin, double t_end,
                     const McOptions& options) {
  if (!(t_end > t_begin)) throw ConfigError("mc_rate_bound: window must have positive length");
  if (options.bound_samples < 1) throw ConfigError("mc_rate_bound: bound_samples must be positive");
  std::vector<double> cuts{t_begin, t_end};
  for (double b : model.time_breakpoints)
    if (b > t_begin && b < t_end) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double peak = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    for (int k = 0; k <= options.bound_samples; ++k) {
      const double t =
          cuts[i] + (cuts[i + 1] - cuts[i]) * (static_cast<double>(k) / options.bound_samples);
      for (int basin = 0; basin < model.num_basins; ++basin)
        peak = std::max(peak, mc_exit_rate(model, n, basin, t));
    }
  }
  if (!(peak > 0.0)) throw ConfigError("mc_rate_bound: no positive exit rate in the window");
  return peak * options.bound_safety;
}

SamplePath mc_sample_path(const LandscapeModel& model, const BallSpec& initial, int n,
                          double horizon, std::uint64_t seed, std::uint64_t path_index,
                          double rate_bound_hz) {
  const int p = model.p;
  CounterRng rng(seed, path_index);
  SamplePath path;
  path.path_index = path_index;
  path.states.push_back(random_leaf_in_ball(rng, p, n, initial));
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate_bound_hz);
    if (t >= horizon) break;
    const TreeAddress& here = path.states.back();
    const int basin = here.basin;
    const double cross = model.exit_rate(basin, t);
    const double intra =
        radial_tail_integral(model.profiles[static_cast<std::size_t>(basin)], n - 1, t);
    const double total = cross + intra;
    if (total > rate_bound_hz)
      throw NumericalError("mc_sample_path: exit rate exceeds the thinning bound");
    if (rng.uniform() * rate_bound_hz >= total) continue;  // thinned proposal
    double v = rng.uniform() * total;
    TreeAddress next;
    if (v < cross) {
      // Exchange move: pick the destination basin by cumulative rate, then a
      // uniform leaf there (incoming exchange mass spreads uniformly).
      int target = basin;
      for (int to = 0; to < model.num_basins; ++to) {
        if (to == basin) continue;
        v -= model.exchange_rate(to, basin)(t);
        target = to;
        if (v < 0.0) break;
      }
      BallSpec whole;
      whole.basin = target;
      next = random_leaf_in_ball(rng, p, n, whole);
    } else {
      // Intra-basin move: pick the shell by cumulative measure-weighted rate.
      // Landing uniformly in the shell at distance p^{-m} means keeping the
      // first m digits, moving digit m off its current value, and drawing the
      // rest fresh.
      v -= cross;
      int shell = n - 1;
      for (int m = 0; m < n; ++m) {
        v -= shell_measure(p, m) * model.profiles[static_cast<std::size_t>(basin)].level(m, t);
        if (v < 0.0) {
          shell = m;
          break;
        }
      }
      next = here;
      const auto hop = 1 + rng.below(static_cast<std::uint64_t>(p - 1));
      next.digits[static_cast<std::size_t>(shell)] = static_cast<std::uint8_t>(
          (here.digits[static_cast<std::size_t>(shell)] + hop) % static_cast<std::uint64_t>(p));
      for (int m = shell + 1; m < n; ++m)
        next.digits[static_cast<std::size_t>(m)] =
            static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(p)));
    }
    path.jump_times.push_back(t);
    path.states.push_back(std::move(next));
  }
  return path;
}

McResult mc_simulate(const LandscapeModel& model, const BallSpec& initial, int n,
                     const std::vector<double>& checkpoints, const McOptions& options) {
  model.validate();
  validate_ball(model.p, initial);
  if (initial.basin < 0 || initial.basin >= model.num_basins)
    throw ConfigError("mc_simulate: initial basin out of range");
  if (n < 1 || n < -initial.scale)
    throw ConfigError("mc_simulate: depth too shallow for the initial ball");
  if (options.paths == 0) throw ConfigError("mc_simulate: paths must be positive");
  if (checkpoints.empty()) throw ConfigError("mc_simulate: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0)) throw ConfigError("mc_simulate: checkpoints must be positive");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
      throw ConfigError("mc_simulate: checkpoints must be strictly increasing");
  }
  const double horizon = checkpoints.back();
  const double bound = mc_rate_bound(model, n, 0.0, horizon, options);
  const auto dim = static_cast<std::size_t>(dense_dimension(model, n));
  const std::size_t slots = checkpoints.size();

  const unsigned hw = std::thread::hardware_concurrency();
  auto threads = static_cast<std::uint64_t>(
      options.threads > 0 ? options.threads : static_cast<int>(hw ? hw : 1u));
  threads = std::min(threads, options.paths);

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::vector<std::uint64_t>>& counts) {
    for (std::uint64_t k = lo; k < hi; ++k) {
      const SamplePath path = mc_sample_path(model, initial, n, horizon, options.seed, k, bound);
      std::size_t jump = 0;
      for (std::size_t i = 0; i < slots; ++i) {
        while (jump < path.jump_times.size() && path.jump_times[jump] <= checkpoints[i]) ++jump;
        counts[i][dense_index(model, n, path.states[jump])] += 1;
      }
    }
  };

  std::vector<std::vector<std::vector<std::uint64_t>>> partial(
      threads, std::vector<std::vector<std::uint64_t>>(slots, std::vector<std::uint64_t>(dim, 0)));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(threads);
  const std::uint64_t chunk = (options.paths + threads - 1) / threads;
  for (std::uint64_t w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min(options.paths, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        run_range(lo, hi, partial[w]);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& worker : pool) worker.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  McResult result;
  result.times = checkpoints;
  result.paths = options.paths;
  result.rate_bound_hz = bound;
  // Integer sums are exact, so the merged counts cannot depend on how the
  // paths were split across threads.
  result.counts.assign(slots, std::vector<std::uint64_t>(dim, 0));
  for (const auto& block : partial)
    for (std::size_t i = 0; i < slots; ++i)
      for (std::size_t j = 0; j < dim; ++j) result.counts[i][j] += block[i][j];
  return result;
}

double mc_ball_occupancy(const McResult& result, const LandscapeModel& model, int n,
                         const BallSpec& ball, std::size_t checkpoint) {
  if (checkpoint >= result.counts.size())
    throw ConfigError("mc_ball_occupancy: checkpoint out of range");
  validate_ball(model.p, ball);
  std::uint64_t inside = 0;
  const auto& slot = result.counts[checkpoint];
  for (std::size_t idx = 0; idx < slot.size(); ++idx) {
    if (slot[idx] == 0) continue;
    if (ball_contains(ball, dense_address(model, n, idx))) inside += slot[idx];
  }
  return static_cast<double>(inside) / static_cast<double>(result.paths);
}

double chi_square_pvalue(double statistic, int dof) {
  if (dof < 1) throw ConfigError("chi_square_pvalue: dof must be positive");
  if (!(statistic >= 0.0)) throw ConfigError("chi_square_pvalue: statistic must be nonnegative");
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace ultrarelax
