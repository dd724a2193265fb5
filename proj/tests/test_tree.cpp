#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/profile.hpp"
#include "ultrarelax/tree.hpp"
#include "ultrarelax/wavelet.hpp"

using namespace ultrarelax;

namespace {

TreeAddress addr(int basin, std::vector<std::uint8_t> digits) {
  return TreeAddress{basin, std::move(digits)};
}

// Riemann sum of f over all depth-n leaves of one basin, leaf mass p^{-n}.
template <typename F>
std::complex<double> basin_integral(int p, int n, int basin, F&& f) {
  std::complex<double> acc{0.0, 0.0};
  const double mass = ball_volume(p, -n);
  for (std::uint64_t i = 0; i < ipow(p, n); ++i) acc += f(leaf_address(p, n, basin, i)) * mass;
  return acc;
}

}  // namespace

TEST_CASE("ultrametric distance on depth-n quotients") {
  CHECK(padic_distance(2, addr(0, {0, 0, 0}), addr(0, {0, 0, 1})) == 0.25);
  CHECK(padic_distance(3, addr(0, {1, 2}), addr(0, {2, 2})) == 1.0);
  CHECK(padic_distance(3, addr(0, {1, 2}), addr(0, {1, 2})) == 0.0);
  CHECK(padic_distance(3, addr(1, {0, 2}), addr(1, {0, 1})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(padic_distance(3, addr(0, {1}), addr(1, {1})), ConfigError);
  CHECK_THROWS_AS(padic_distance(3, addr(0, {1}), addr(0, {1, 0})), ConfigError);
  CHECK_THROWS_AS(padic_distance(3, addr(0, {3}), addr(0, {0})), ConfigError);
}

TEST_CASE("strong triangle inequality, exhaustively at small depth") {
  const int p = 3, n = 3;
  const auto leaves = ipow(p, n);
  std::vector<TreeAddress> xs;
  for (std::uint64_t i = 0; i < leaves; ++i) xs.push_back(leaf_address(p, n, 0, i));
  for (const auto& a : xs)
    for (const auto& b : xs) {
      const double dab = padic_distance(p, a, b);
      CHECK(dab == padic_distance(p, b, a));
      for (const auto& c : xs) {
        const double dac = padic_distance(p, a, c);
        const double dbc = padic_distance(p, b, c);
        CHECK(dac <= std::max(dab, dbc));
      }
    }
}

TEST_CASE("ball volume and shell partition") {
  CHECK(ball_volume(3, -1) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(ball_volume(2, -3) == 0.125);
  CHECK(ball_volume(5, 0) == 1.0);
  CHECK_THROWS_AS(ball_volume(3, 1), ConfigError);

  for (int p : {2, 3, 5})
    for (int n = 1; n <= 6; ++n) {
      double total = ball_volume(p, -n);
      for (int m = 0; m < n; ++m) total += shell_measure(p, m);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("ball membership by digit prefix") {
  const BallSpec ball{0, {1, 2}, -2};
  CHECK(ball_contains(ball, addr(0, {1, 2, 0})));
  CHECK(ball_contains(ball, addr(0, {1, 2, 2})));
  CHECK_FALSE(ball_contains(ball, addr(0, {1, 1, 0})));
  CHECK_FALSE(ball_contains(ball, addr(1, {1, 2, 0})));

  const BallSpec whole{2, {}, 0};
  CHECK(ball_contains(whole, addr(2, {0, 1})));
  CHECK_FALSE(ball_contains(whole, addr(0, {0, 1})));

  CHECK_THROWS_AS(validate_ball(3, BallSpec{0, {1}, -2}), ConfigError);
  CHECK_THROWS_AS(validate_ball(3, BallSpec{0, {}, 1}), ConfigError);
}

TEST_CASE("leaf enumeration round trip") {
  const int p = 3, n = 3;
  for (std::uint64_t i = 0; i < ipow(p, n); ++i) {
    const auto x = leaf_address(p, n, 1, i);
    CHECK(x.depth() == n);
    CHECK(leaf_ordinal(p, x) == i);
  }
  CHECK(leaf_address(3, 3, 0, 5).digits == std::vector<std::uint8_t>{0, 1, 2});
  CHECK_THROWS_AS(leaf_address(3, 2, 0, 9), ConfigError);
}

TEST_CASE("wavelet index validation") {
  CHECK_THROWS_AS(validate_wavelet(3, WaveletIndex{0, 0, 0, {}}), ConfigError);
  CHECK_THROWS_AS(validate_wavelet(3, WaveletIndex{0, 0, 3, {}}), ConfigError);
  CHECK_THROWS_AS(validate_wavelet(3, WaveletIndex{0, -1, 1, {}}), ConfigError);
  CHECK_THROWS_AS(validate_wavelet(3, WaveletIndex{0, 0, 1, {0}}), ConfigError);
  CHECK_NOTHROW(validate_wavelet(3, WaveletIndex{0, -2, 2, {2, 1}}));
}

TEST_CASE("wavelet pointwise values") {
  // Scale 0: modulus 1, phase driven by the coarsest digit.
  const WaveletIndex w0{0, 0, 1, {}};
  for (int c = 0; c < 3; ++c) {
    const auto v = eval_wavelet(3, w0, addr(0, {static_cast<std::uint8_t>(c), 0}));
    CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::arg(v) == doctest::Approx(2.0 * M_PI * c / 3.0 - (c == 2 ? 2.0 * M_PI : 0.0)).epsilon(1e-12));
  }
  // j = 2 doubles the phase step.
  const WaveletIndex w2{0, 0, 2, {}};
  const auto v2 = eval_wavelet(3, w2, addr(0, {1, 0}));
  CHECK(std::arg(v2) == doctest::Approx(4.0 * M_PI / 3.0 - 2.0 * M_PI).epsilon(1e-12));

  // Deeper support raises the modulus to p^{-scale/2}.
  const WaveletIndex wm1{0, -1, 1, {2}};
  CHECK(std::abs(eval_wavelet(3, wm1, addr(0, {2, 1, 0}))) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(eval_wavelet(2, WaveletIndex{0, -1, 1, {0}}, addr(0, {0, 1}))) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // Zero outside the supporting ball or in another basin.
  CHECK(eval_wavelet(3, wm1, addr(0, {1, 1, 0})) == std::complex<double>{0.0, 0.0});
  CHECK(eval_wavelet(3, wm1, addr(1, {2, 1, 0})) == std::complex<double>{0.0, 0.0});

  // Depth must resolve one digit below the support.
  CHECK_THROWS_AS(eval_wavelet(3, wm1, addr(0, {2})), ConfigError);
}

TEST_CASE("wavelets integrate to zero and form an orthonormal family") {
  for (int p : {2, 3}) {
    const int n = (p == 2) ? 4 : 3;
    const auto ws = enumerate_wavelets(p, n, 0);
    CHECK(ws.size() == ipow(p, n) - 1);

    for (const auto& w : ws) {
      const auto mean = basin_integral(p, n, 0, [&](const TreeAddress& x) { return eval_wavelet(p, w, x); });
      CHECK(std::abs(mean) <= 1e-14);
    }

    for (std::size_t a = 0; a < ws.size(); ++a)
      for (std::size_t b = a; b < ws.size(); ++b) {
        const auto ip = basin_integral(p, n, 0, [&](const TreeAddress& x) {
          return eval_wavelet(p, ws[a], x) * std::conj(eval_wavelet(p, ws[b], x));
        });
        if (a == b)
          CHECK(std::abs(ip - 1.0) <= 1e-12);
        else
          CHECK(std::abs(ip) <= 1e-12);
      }
  }
}

TEST_CASE("wavelet support matches its spec ball") {
  const int p = 3, n = 3;
  for (const auto& w : enumerate_wavelets(p, n, 0)) {
    const auto ball = wavelet_support(w);
    for (std::uint64_t i = 0; i < ipow(p, n); ++i) {
      const auto x = leaf_address(p, n, 0, i);
      const bool inside = ball_contains(ball, x);
      const bool nonzero = std::abs(eval_wavelet(p, w, x)) > 0.0;
      CHECK(inside == nonzero);
    }
  }
}

TEST_CASE("radial profiles and the shell-weighted tail integral") {
  const auto prof = constant_radial_profile(3, {6.0, 3.0});
  CHECK(prof.level(0, 0.0) == 6.0);
  CHECK(prof.level(1, 0.0) == 3.0);
  CHECK(prof.level(5, 0.0) == 3.0);  // constant tail

  auto zero_tail = constant_radial_profile(3, {6.0, 3.0}, TailRule::zero);
  CHECK(zero_tail.level(2, 0.0) == 0.0);

  CHECK(radial_tail_integral(prof, 0, 0.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(radial_tail_integral(prof, 1, 0.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
  CHECK(radial_total_rate(prof, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(radial_total_rate(zero_tail, 0.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(constant_radial_profile(3, {6.0, -1.0}), ConfigError);
  CHECK_THROWS_AS(constant_radial_profile(4, {6.0}), ConfigError);
  CHECK_THROWS_AS(RadialProfile{}.level(0, 0.0), ConfigError);

  // Time-dependent levels are evaluated at the requested instant.
  RadialProfile tdep;
  tdep.p = 3;
  tdep.levels = {[](double t) { return 6.0 + t; }, [](double t) { return 3.0 * t; }};
  CHECK(radial_tail_integral(tdep, 1, 1.0) == doctest::Approx((2.0 / 3.0) * 7.0 + (2.0 / 9.0) * 3.0).epsilon(1e-15));
}
