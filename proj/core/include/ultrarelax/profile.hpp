#pragma once

#include <functional>
#include <vector>

namespace ultrarelax {

// Every rate in the library is an evaluable function of time, so all
// consumers (spectral solver, mean-sector solvers, dense oracle, sampler)
// see bit-identical values.
using RateFn = std::function<double(double)>;

RateFn constant_rate(double value_hz);

enum class TailRule {
  constant_extend,  // levels beyond the last stored one repeat it
  zero,             // levels beyond the last stored one vanish
};

// Radial jump-rate profile of one basin: level m holds w(p^{-m}, t), the
// rate density toward points at distance p^{-m}. Rates must be positive
// where used; the tail rule defines levels past the stored list.
struct RadialProfile {
  int p = 2;
  std::vector<RateFn> levels;
  TailRule tail = TailRule::constant_extend;

  // w(p^{-m}, t); applies the tail rule for m >= levels.size().
  // Throws ConfigError if the profile stores no levels at all.
  double level(int m, double t) const;
};

RadialProfile constant_radial_profile(int p, const std::vector<double>& w_hz,
                                      TailRule tail = TailRule::constant_extend);

// Integral of w(|x - y|, t) over the punctured ball of radius p^{-0}..p^{-k}
// shells around a fixed point: sum_{m=0..k} (p^{-m} - p^{-m-1}) w(p^{-m}, t).
// This is both the truncation term feeding the relaxation eigenvalues and,
// with k = n-1, the intra-basin exit rate of the depth-n sampler.
double radial_tail_integral(const RadialProfile& profile, int k, double t);

// Limit k -> infinity. Under a constant tail the remainder past the stored
// levels sums geometrically to p^{-M-1} * w_M(t) (M = last stored level);
// under a zero tail it is the finite sum.
double radial_total_rate(const RadialProfile& profile, double t);

}  // namespace ultrarelax
