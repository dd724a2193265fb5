#include "ultrarelax/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

void validate_wavelet(int p, const WaveletIndex& w) {
  if (p < 2) throw ConfigError("wavelet: p must be >= 2");
  if (w.basin < 0) throw ConfigError("wavelet: basin must be >= 0");
  if (w.scale > 0) throw ConfigError("wavelet: scale must be <= 0");
  if (w.j < 1 || w.j >= p)
    throw ConfigError("wavelet: frequency index j must lie in 1.." + std::to_string(p - 1));
  if (static_cast<int>(w.offset.size()) != -w.scale)
    throw ConfigError("wavelet: offset must have exactly " + std::to_string(-w.scale) + " digits");
  for (auto d : w.offset)
    if (d >= p) throw ConfigError("wavelet: offset digit out of range for p=" + std::to_string(p));
}

BallSpec wavelet_support(const WaveletIndex& w) {
  return BallSpec{w.basin, w.offset, w.scale};
}

std::complex<double> eval_wavelet(int p, const WaveletIndex& w, const TreeAddress& x) {
  validate_wavelet(p, w);
  validate_address(p, x);
  const int m = -w.scale;
  if (x.depth() < m + 1)
    throw ConfigError("eval_wavelet: address depth " + std::to_string(x.depth()) +
                      " cannot resolve the child digit of a scale " + std::to_string(w.scale) + " wavelet");
  if (x.basin != w.basin) return {0.0, 0.0};
  for (int i = 0; i < m; ++i)
    if (x.digits[i] != w.offset[i]) return {0.0, 0.0};
  const int c = x.digits[m];
  const double amplitude = std::sqrt(static_cast<double>(ipow(p, m)));  // p^{-scale/2}
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(w.j) * static_cast<double>(c) / static_cast<double>(p);
  return std::polar(amplitude, phase);
}

std::vector<WaveletIndex> enumerate_wavelets(int p, int n, int basin) {
  if (n < 1) throw ConfigError("enumerate_wavelets: depth must be >= 1");
  std::vector<WaveletIndex> out;
  out.reserve(ipow(p, n) - 1);
  for (int r = 0; r >= 1 - n; --r) {
    const int m = -r;
    const std::uint64_t balls = ipow(p, m);
    for (std::uint64_t b = 0; b < balls; ++b) {
      const TreeAddress center = leaf_address(p, m, basin, b);
      for (int j = 1; j < p; ++j)
        out.push_back(WaveletIndex{basin, r, j, center.digits});
    }
  }
  return out;
}

}  // namespace ultrarelax
