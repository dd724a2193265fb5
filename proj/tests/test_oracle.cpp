#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ultrarelax/dense.hpp"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/mc.hpp"
#include "ultrarelax/mean.hpp"
#include "ultrarelax/rng.hpp"
#include "ultrarelax/spectral.hpp"

using namespace ultrarelax;

namespace {

LandscapeModel one_basin_model(int p, const std::vector<double>& w_hz) {
  LandscapeModel model;
  model.p = p;
  model.num_basins = 1;
  model.profiles = {constant_radial_profile(p, w_hz)};
  model.exchange = {RateFn{}};
  return model;
}

}  // namespace

TEST_CASE("counter rng reproduces the philox reference blocks") {
  // Known-answer vectors for the 10-round generator with the canonical
  // multiplier/Weyl constants.
  const std::array<std::uint32_t, 4> zero_ctr{0, 0, 0, 0};
  const std::array<std::uint32_t, 2> zero_key{0, 0};
  const auto zeros = Philox4x32::block(zero_ctr, zero_key);
  CHECK(zeros == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  const std::array<std::uint32_t, 4> ones_ctr{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
  const std::array<std::uint32_t, 2> ones_key{0xffffffffu, 0xffffffffu};
  const auto ones = Philox4x32::block(ones_ctr, ones_key);
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  const std::array<std::uint32_t, 4> pi_ctr{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
  const std::array<std::uint32_t, 2> pi_key{0xa4093822u, 0x299f31d0u};
  const auto pi = Philox4x32::block(pi_ctr, pi_key);
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter rng streams are deterministic and separated") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  CounterRng c(42, 8);
  bool any_differs = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next64();
    CHECK(va == b.next64());
    any_differs = any_differs || va != c.next64();
  }
  CHECK(any_differs);
}

TEST_CASE("counter rng deviates have the advertised ranges and moments") {
  CounterRng rng(2024, 0);
  bool hit[3] = {false, false, false};
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto d = rng.below(3);
    CHECK(d < 3);
    hit[d] = true;
  }
  CHECK(hit[0]);
  CHECK(hit[1]);
  CHECK(hit[2]);

  double sum = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const double e = rng.exponential(4.0);
    CHECK(e >= 0.0);
    sum += e;
  }
  CHECK(sum / draws == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("dense indexing is a bijection ordered basin-major") {
  auto model = one_basin_model(3, {6.0, 3.0});
  model.num_basins = 2;
  model.profiles.push_back(model.profiles[0]);
  model.exchange = {RateFn{}, constant_rate(1.0), constant_rate(2.0), RateFn{}};

  const int n = 2;
  const int dim = dense_dimension(model, n);
  CHECK(dim == 18);
  for (int i = 0; i < dim; ++i) {
    const auto x = dense_address(model, n, static_cast<std::size_t>(i));
    CHECK(dense_index(model, n, x) == static_cast<std::size_t>(i));
    CHECK(x.basin == i / 9);
  }
  // Ordinal follows the digits, coarsest digit most significant.
  const auto x5 = dense_address(model, n, 5);
  CHECK(x5.digits == std::vector<std::uint8_t>{1, 2});
  CHECK(dense_dimension(model, 5) == 486);
  CHECK_THROWS_AS(dense_dimension(model, 7), ConfigError);
}

TEST_CASE("dense generator on a two-leaf space is the symmetric two-state matrix") {
  const auto model = one_basin_model(2, {3.0});
  const auto q = build_dense_generator(model, 1, 0.0);
  CHECK(q.rows() == 2);
  CHECK(q(0, 1) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(q(1, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(q(0, 0) == doctest::Approx(-1.5).epsilon(1e-15));
  // Eigenvalues 0 and -3 = -(total jump rate), the depth-1 relaxation rate.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gamma_eigenvalue(model.profiles[0], 0.0, 0, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("dense generator entries follow the distance classes and columns sum to zero") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  const auto q = build_dense_generator(model, 2, 0.0);
  CHECK(q.rows() == 9);
  // Leaves 00 and 01 share one digit: distance 1/3, rate density 3, leaf
  // volume 1/9.
  CHECK(q(0, 1) == doctest::Approx(3.0 / 9.0).epsilon(1e-15));
  // Leaves 00 and 10: no common digit, distance 1, rate density 6.
  CHECK(q(0, 3) == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
  for (int col = 0; col < 9; ++col) CHECK(std::abs(q.col(col).sum()) < 1e-13);
}

TEST_CASE("dense spectrum matches the predicted relaxation rates with multiplicities") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  const auto report = spectral_match(model, 2, 0.0, 1e-10);
  CHECK(report.ok);
  CHECK(report.max_rel_mismatch < 1e-10);
  CHECK(report.max_imag < 1e-10);
  REQUIRE(report.dense_eigenvalues.size() == 9);
  const std::vector<double> frozen{-6.0, -6.0, -5.0, -5.0, -5.0, -5.0, -5.0, -5.0, 0.0};
  for (std::size_t i = 0; i < frozen.size(); ++i)
    CHECK(report.dense_eigenvalues[i] == doctest::Approx(frozen[i]).epsilon(1e-12));
}

TEST_CASE("dense spectrum of a two-basin model includes exchange shifts and the mean sector") {
  const auto profile = constant_radial_profile(3, {6.0, 3.0});
  const auto model = make_two_basin_model(3, profile, profile, constant_rate(2.0),
                                          constant_rate(4.0));
  const auto report = spectral_match(model, 2, 0.0, 1e-8);
  CHECK(report.ok);
  // Tracked basin drains at 4/s, the other at 2/s; every intra-basin rate is
  // shifted by its basin's outflow, and the mean sector adds {0, -6}.
  const std::vector<double> frozen{-10, -10, -9, -9, -9, -9, -9, -9, -8, -8,
                                   -7,  -7,  -7, -7, -7, -7, -6, 0};
  REQUIRE(report.dense_eigenvalues.size() == frozen.size());
  for (std::size_t i = 0; i < frozen.size(); ++i)
    CHECK(report.dense_eigenvalues[i] == doctest::Approx(frozen[i]).epsilon(1e-10));
}

TEST_CASE("pairing each scale with the rate one level deeper fails the spectrum audit") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  const auto report = spectral_match(model, 2, 0.0, 1e-8, EigenlevelConvention::child);
  CHECK_FALSE(report.ok);
  CHECK(report.max_rel_mismatch > 0.1);
}

TEST_CASE("uniform ball mass spreads over exactly the contained leaves") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const auto mass = uniform_ball_mass(model, 2, ball);
  CHECK(mass.sum() == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 9; ++i) CHECK(mass(i) == (i < 3 ? doctest::Approx(1.0 / 3).epsilon(1e-15)
                                                      : doctest::Approx(0.0)));

  BallSpec leaf;
  leaf.center = {1, 2};
  leaf.scale = -2;
  const auto point = uniform_ball_mass(model, 2, leaf);
  CHECK(point(5) == 1.0);
  CHECK(point.sum() == 1.0);

  BallSpec whole;
  whole.scale = 0;
  const auto flat = uniform_ball_mass(model, 2, whole);
  for (int i = 0; i < 9; ++i) CHECK(flat(i) == doctest::Approx(1.0 / 9).epsilon(1e-15));
}

TEST_CASE("dense ode agrees with the diagonal wavelet evolution on leaf densities") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const int n = 2;
  const double t_end = 0.1;

  const auto dense = solve_dense_ode(uniform_ball_mass(model, n, ball), model, n, {0.0, t_end},
                                     1e-3);
  CHECK(dense.max_renormalization < 1e-11);
  CHECK(dense.states.back().minCoeff() >= 0.0);
  CHECK(dense.states.back().sum() == doctest::Approx(1.0).epsilon(1e-13));

  const auto spectral = evolve_spectral(expand_ball_indicator(ball, model), model, 0.0, t_end,
                                        make_rk4_mean_evolver(1e-3));
  const double leaf_volume = ball_volume(model.p, -n);
  for (int i = 0; i < 9; ++i) {
    const double predicted =
        reconstruct_density(spectral, model, dense_address(model, n, static_cast<std::size_t>(i)));
    CHECK(dense.states.back()(i) == doctest::Approx(predicted * leaf_volume).epsilon(1e-9));
  }
}

TEST_CASE("dense ode error shrinks at fourth order in the step") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const int n = 2;
  const double t_end = 0.1;
  const auto exact = evolve_spectral(expand_ball_indicator(ball, model), model, 0.0, t_end,
                                     make_rk4_mean_evolver(1e-3));
  const double leaf_volume = ball_volume(model.p, -n);
  const auto mass0 = uniform_ball_mass(model, n, ball);

  const auto error_at = [&](double dt) {
    const auto evo = solve_dense_ode(mass0, model, n, {0.0, t_end}, dt);
    double err = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double predicted =
          reconstruct_density(exact, model, dense_address(model, n, static_cast<std::size_t>(i)));
      err = std::max(err, std::abs(evo.states.back()(i) - predicted * leaf_volume));
    }
    return err;
  };
  const double coarse = error_at(0.02);
  const double fine = error_at(0.01);
  CHECK(coarse > 0.0);
  CHECK(coarse / fine > 10.0);
  CHECK(coarse / fine < 24.0);
}

TEST_CASE("sampler exit rate adds resolvable shells and basin outflow") {
  const auto profile = constant_radial_profile(3, {6.0, 3.0});
  const auto model = make_two_basin_model(3, profile, profile, constant_rate(2.0),
                                          constant_rate(4.0));
  // Shells: (1 - 1/3) 6 + (1/3 - 1/9) 3 = 14/3 at depth 2.
  CHECK(mc_exit_rate(model, 2, 0, 0.0) == doctest::Approx(14.0 / 3 + 4.0).epsilon(1e-14));
  CHECK(mc_exit_rate(model, 2, 1, 0.0) == doctest::Approx(14.0 / 3 + 2.0).epsilon(1e-14));
  McOptions options;
  CHECK(mc_rate_bound(model, 2, 0.0, 1.0, options) ==
        doctest::Approx((14.0 / 3 + 4.0) * 1.05).epsilon(1e-14));
}

TEST_CASE("sample paths are reproducible and sit on valid leaves") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const double bound = mc_rate_bound(model, 2, 0.0, 2.0, {});
  const auto a = mc_sample_path(model, ball, 2, 2.0, 99, 5, bound);
  const auto b = mc_sample_path(model, ball, 2, 2.0, 99, 5, bound);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.states == b.states);
  CHECK(!a.states.empty());
  CHECK(ball_contains(ball, a.states.front()));
  for (std::size_t i = 0; i < a.jump_times.size(); ++i) {
    CHECK(a.jump_times[i] > (i ? a.jump_times[i - 1] : 0.0));
    CHECK(a.jump_times[i] < 2.0);
    CHECK(a.states[i + 1] != a.states[i]);
    validate_address(model.p, a.states[i + 1]);
    CHECK(a.states[i + 1].depth() == 2);
  }

  const auto c = mc_sample_path(model, ball, 2, 2.0, 99, 6, bound);
  CHECK(a.jump_times != c.jump_times);
}

TEST_CASE("a rate bound below the true exit rate is rejected at run time") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.scale = 0;
  CHECK_THROWS_AS(mc_sample_path(model, ball, 2, 10.0, 1, 0, 2.0), NumericalError);
}

TEST_CASE("ensemble counts conserve paths and ignore the thread split") {
  const auto profile = constant_radial_profile(3, {6.0, 3.0});
  const auto model = make_two_basin_model(3, profile, profile, constant_rate(2.0),
                                          constant_rate(4.0));
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const std::vector<double> checkpoints{0.05, 0.2, 0.5};

  McOptions serial;
  serial.paths = 2000;
  serial.seed = 31;
  serial.threads = 1;
  McOptions parallel = serial;
  parallel.threads = 4;

  const auto a = mc_simulate(model, ball, 2, checkpoints, serial);
  const auto b = mc_simulate(model, ball, 2, checkpoints, parallel);
  CHECK(a.counts == b.counts);
  CHECK(a.paths == 2000);
  for (const auto& slot : a.counts) {
    std::uint64_t total = 0;
    for (auto c : slot) total += c;
    CHECK(total == serial.paths);
  }

  McOptions reseeded = serial;
  reseeded.seed = 32;
  const auto c = mc_simulate(model, ball, 2, checkpoints, reseeded);
  CHECK(a.counts != c.counts);
}

TEST_CASE("sampled ball survival tracks the closed-form decay") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec ball;
  ball.center = {0};
  ball.scale = -1;
  const std::vector<double> checkpoints{0.05, 0.15, 0.3};

  McOptions options;
  options.paths = 20000;
  options.seed = 7;
  const auto result = mc_simulate(model, ball, 2, checkpoints, options);

  const auto series = survival_probability(ball, model, {0.0, 0.05, 0.15, 0.3});
  CHECK(series.survival[0] == 1.0);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    // The ball keeps mass (1 + 2 exp(-6t)) / 3 when the basin is isolated.
    const double expected = (1.0 + 2.0 * std::exp(-6.0 * checkpoints[i])) / 3.0;
    CHECK(series.survival[i + 1] == doctest::Approx(expected).epsilon(1e-10));
    const double observed = mc_ball_occupancy(result, model, 2, ball, i);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(options.paths));
    CHECK(std::abs(observed - expected) < 3.0 * se);

    BallSpec whole;
    whole.scale = 0;
    CHECK(mc_ball_occupancy(result, model, 2, whole, i) == 1.0);
  }
}

TEST_CASE("sampled basin occupancy tracks the two-state relaxation") {
  const auto profile = constant_radial_profile(3, {30.0});
  const double gain = 40.0;
  const double loss = 60.0;
  const auto model =
      make_two_basin_model(3, profile, profile, constant_rate(gain), constant_rate(loss));
  BallSpec basin0;
  basin0.scale = 0;
  const std::vector<double> checkpoints{0.005, 0.01, 0.02, 0.05};

  McOptions options;
  options.paths = 20000;
  options.seed = 11;
  const auto result = mc_simulate(model, basin0, 1, checkpoints, options);
  const double stationary = gain / (gain + loss);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double expected =
        stationary + (1.0 - stationary) * std::exp(-(gain + loss) * checkpoints[i]);
    const double observed = mc_ball_occupancy(result, model, 1, basin0, i);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(options.paths));
    CHECK(std::abs(observed - expected) < 3.0 * se);
  }
}

TEST_CASE("long-horizon sampling is uniform by the chi-square test") {
  const auto model = one_basin_model(3, {6.0, 3.0});
  BallSpec leaf;
  leaf.center = {0, 0};
  leaf.scale = -2;

  McOptions options;
  options.paths = 18000;
  options.seed = 3;
  const auto result = mc_simulate(model, leaf, 2, {3.0}, options);
  const double expected = static_cast<double>(options.paths) / 9.0;
  double statistic = 0.0;
  for (auto c : result.counts[0]) {
    const double d = static_cast<double>(c) - expected;
    statistic += d * d / expected;
  }
  CHECK(chi_square_pvalue(statistic, 8) > 0.01);
}

TEST_CASE("chi-square tail probabilities match closed forms") {
  CHECK(chi_square_pvalue(0.0, 5) == doctest::Approx(1.0).epsilon(1e-15));
  // Two degrees of freedom: upper tail exp(-x/2).
  CHECK(chi_square_pvalue(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  // One degree of freedom at x = 1: erfc(1/sqrt(2)).
  CHECK(chi_square_pvalue(1.0, 1) == doctest::Approx(0.31731050786291415).epsilon(1e-13));
  CHECK_THROWS_AS(chi_square_pvalue(-1.0, 3), ConfigError);
  CHECK_THROWS_AS(chi_square_pvalue(1.0, 0), ConfigError);
}
