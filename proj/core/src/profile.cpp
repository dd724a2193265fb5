#include "ultrarelax/profile.hpp"

#include <string>

#include "ultrarelax/errors.hpp"
#include "ultrarelax/tree.hpp"

namespace ultrarelax {

RateFn constant_rate(double value_hz) {
  return [value_hz](double) { return value_hz; };
}

double RadialProfile::level(int m, double t) const {
  if (m < 0) throw ConfigError("radial profile: level must be >= 0");
  if (levels.empty()) throw ConfigError("radial profile: no levels defined");
  const auto count = static_cast<int>(levels.size());
  if (m < count) return levels[static_cast<std::size_t>(m)](t);
  switch (tail) {
    case TailRule::constant_extend:
      return levels.back()(t);
    case TailRule::zero:
      return 0.0;
  }
  throw ConfigError("radial profile: unknown tail rule");
}

RadialProfile constant_radial_profile(int p, const std::vector<double>& w_hz, TailRule tail) {
  if (!is_prime(p)) throw ConfigError("radial profile: p must be prime, got " + std::to_string(p));
  RadialProfile profile;
  profile.p = p;
  profile.tail = tail;
  profile.levels.reserve(w_hz.size());
  for (double w : w_hz) {
    if (w <= 0.0) throw ConfigError("radial profile: rates must be strictly positive");
    profile.levels.push_back(constant_rate(w));
  }
  return profile;
}

double radial_tail_integral(const RadialProfile& profile, int k, double t) {
  if (k < 0) throw ConfigError("radial_tail_integral: truncation level must be >= 0");
  double sum = 0.0;
  for (int m = 0; m <= k; ++m) sum += shell_measure(profile.p, m) * profile.level(m, t);
  return sum;
}

double radial_total_rate(const RadialProfile& profile, double t) {
  if (profile.levels.empty()) throw ConfigError("radial profile: no levels defined");
  const int last = static_cast<int>(profile.levels.size()) - 1;
  double sum = radial_tail_integral(profile, last, t);
  if (profile.tail == TailRule::constant_extend)
    sum += ball_volume(profile.p, -(last + 1)) * profile.levels.back()(t);
  return sum;
}

}  // namespace ultrarelax
