#pragma once

#include <complex>
#include <vector>

#include "ultrarelax/tree.hpp"

namespace ultrarelax {

// Orthonormal wavelet on one basin. The wavelet with scale r (r <= 0) is
// supported on the ball of volume p^r whose first -r digits are `offset`;
// on that ball it takes the constant modulus p^{-r/2} and the phase
// exp(2*pi*i*j*c/p), where c is the digit of the evaluation point one level
// below the supporting ball (its child index) and j in 1..p-1. Each wavelet
// integrates to zero against Haar measure, and distinct indices are
// orthogonal. Offsets are digit strings relative to the basin's own subtree
// root; no global embedding or global phase enters.
struct WaveletIndex {
  int basin = 0;
  int scale = 0;                      // r <= 0, support volume p^scale
  int j = 1;                          // 1..p-1
  std::vector<std::uint8_t> offset;   // exactly -scale digits

  friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};

void validate_wavelet(int p, const WaveletIndex& w);

// The ball the wavelet lives on.
BallSpec wavelet_support(const WaveletIndex& w);

// Pointwise value at x. Requires x.depth() >= -scale + 1 so the child digit
// is resolvable; throws ConfigError otherwise. Returns 0 outside the support.
std::complex<double> eval_wavelet(int p, const WaveletIndex& w, const TreeAddress& x);

// All wavelets of one basin representable at quotient depth n, i.e. scales
// r = 1-n .. 0: exactly p^n - 1 of them, which together with the basin
// constant span the depth-n quotient.
std::vector<WaveletIndex> enumerate_wavelets(int p, int n, int basin);

}  // namespace ultrarelax
