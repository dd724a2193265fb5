#include "ultrarelax/tree.hpp"

#include <string>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t ipow(int p, int e) {
  if (p < 1 || e < 0) throw ConfigError("ipow: base must be >= 1, exponent >= 0");
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / static_cast<std::uint64_t>(p))
      throw ConfigError("ipow: overflow at " + std::to_string(p) + "^" + std::to_string(e));
    r *= static_cast<std::uint64_t>(p);
  }
  return r;
}

double ball_volume(int p, int scale) {
  if (p < 2) throw ConfigError("ball_volume: p must be >= 2");
  if (scale > 0) throw ConfigError("ball_volume: scale must be <= 0");
  return 1.0 / static_cast<double>(ipow(p, -scale));
}

double shell_measure(int p, int m) {
  if (p < 2) throw ConfigError("shell_measure: p must be >= 2");
  if (m < 0) throw ConfigError("shell_measure: level must be >= 0");
  return ball_volume(p, -m) - ball_volume(p, -m - 1);
}

void validate_address(int p, const TreeAddress& x) {
  if (p < 2) throw ConfigError("address: p must be >= 2");
  if (x.basin < 0) throw ConfigError("address: basin must be >= 0");
  for (auto d : x.digits)
    if (d >= p) throw ConfigError("address: digit " + std::to_string(d) + " out of range for p=" + std::to_string(p));
}

void validate_ball(int p, const BallSpec& ball) {
  if (p < 2) throw ConfigError("ball: p must be >= 2");
  if (ball.basin < 0) throw ConfigError("ball: basin must be >= 0");
  if (ball.scale > 0) throw ConfigError("ball: scale must be <= 0, got " + std::to_string(ball.scale));
  if (static_cast<int>(ball.center.size()) < -ball.scale)
    throw ConfigError("ball: center needs at least " + std::to_string(-ball.scale) + " digits");
  for (auto d : ball.center)
    if (d >= p) throw ConfigError("ball: center digit out of range for p=" + std::to_string(p));
}

double padic_distance(int p, const TreeAddress& a, const TreeAddress& b) {
  validate_address(p, a);
  validate_address(p, b);
  if (a.basin != b.basin)
    throw ConfigError("padic_distance: addresses lie in different basins");
  if (a.depth() != b.depth())
    throw ConfigError("padic_distance: addresses have different depths");
  int k = 0;
  while (k < a.depth() && a.digits[k] == b.digits[k]) ++k;
  if (k == a.depth()) return 0.0;
  return ball_volume(p, -k);
}

bool ball_contains(const BallSpec& ball, const TreeAddress& x) {
  if (x.basin != ball.basin) return false;
  int m = -ball.scale;
  if (x.depth() < m) throw ConfigError("ball_contains: address shallower than ball scale");
  for (int i = 0; i < m; ++i)
    if (x.digits[i] != ball.center[i]) return false;
  return true;
}

std::uint64_t leaf_ordinal(int p, const TreeAddress& x) {
  validate_address(p, x);
  std::uint64_t ord = 0;
  for (auto d : x.digits) ord = ord * static_cast<std::uint64_t>(p) + d;
  return ord;
}

TreeAddress leaf_address(int p, int n, int basin, std::uint64_t ordinal) {
  if (n < 0) throw ConfigError("leaf_address: depth must be >= 0");
  if (ordinal >= ipow(p, n)) throw ConfigError("leaf_address: ordinal out of range");
  TreeAddress x;
  x.basin = basin;
  x.digits.resize(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    x.digits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(ordinal % static_cast<std::uint64_t>(p));
    ordinal /= static_cast<std::uint64_t>(p);
  }
  return x;
}

}  // namespace ultrarelax
