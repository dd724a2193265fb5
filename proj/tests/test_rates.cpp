#include <cmath>

#include "doctest.h"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/quadrature.hpp"
#include "ultrarelax/rates.hpp"
#include "ultrarelax/schedule.hpp"

using namespace ultrarelax;

TEST_CASE("temperature schedules hold, ramp, and approach targets") {
  // Bare schedule is constant.
  TemperatureSchedule flat(300.0);
  CHECK(flat.temperature_at(-1.0) == 300.0);
  CHECK(flat.temperature_at(0.0) == 300.0);
  CHECK(flat.temperature_at(7.5) == 300.0);

  // Linear ramp used by the heating protocol: 309 K to 316.15 K over 50 s.
  TemperatureSchedule ramp(309.0);
  ramp.linear_to(316.15, 50.0);
  CHECK(ramp.temperature_at(0.0) == 309.0);
  CHECK(ramp.temperature_at(25.0) == doctest::Approx(312.575).epsilon(1e-14));
  CHECK(ramp.temperature_at(50.0) == doctest::Approx(316.15).epsilon(1e-15));
  CHECK(ramp.temperature_at(80.0) == doctest::Approx(316.15).epsilon(1e-15));

  // Exponential approach: quench from 300 K, time constant 2e-5 s, segment
  // ends at 1e-3 s = 50 time constants, so the target is reached exactly in
  // double precision and held afterwards.
  TemperatureSchedule quench(300.0);
  quench.exp_approach_to(200.0, 2.0e-5, 1.0e-3);
  CHECK(quench.temperature_at(0.0) == 300.0);
  CHECK(quench.temperature_at(2.0e-5) == doctest::Approx(200.0 + 100.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(quench.temperature_at(1.0e-3) == 200.0);
  CHECK(quench.temperature_at(1.0) == 200.0);
}

TEST_CASE("temperature is continuous across every segment boundary") {
  TemperatureSchedule s(300.0);
  s.hold_until(1.0).linear_to(280.0, 2.0).exp_approach_to(250.0, 0.4, 5.0).hold_until(9.0);

  const auto pts = s.breakpoints();
  CHECK(pts.size() == 5);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double t = pts[i];
    const double left = s.temperature_at(std::nextafter(t, -1.0));
    const double right = s.temperature_at(t);
    CHECK(std::abs(left - right) <= 1e-12 * right);
  }
  // Exactly at a boundary the next segment starts from the value the
  // previous one reached.
  CHECK(s.temperature_at(2.0) == 280.0);

  CHECK_THROWS_AS(s.hold_until(8.0), ConfigError);              // must advance
  CHECK_THROWS_AS(s.linear_to(-3.0, 20.0), ConfigError);        // positive temperatures
  CHECK_THROWS_AS(TemperatureSchedule(0.0), ConfigError);
  CHECK_THROWS_AS(s.exp_approach_to(100.0, 0.0, 20.0), ConfigError);
}

TEST_CASE("thermally activated rates with unit discipline") {
  const auto spec = arrhenius_ev(1.0e12, 0.5);
  const double r300 = arrhenius_rate(spec, 300.0);
  CHECK(r300 == doctest::Approx(3.98e3).epsilon(1e-2));
  CHECK(r300 == doctest::Approx(1.0e12 * std::exp(-0.5 / (8.617333e-5 * 300.0))).epsilon(1e-15));

  // Glass intra-basin levels at 300 K.
  CHECK(arrhenius_rate(arrhenius_ev(1.0e12, 0.40), 300.0) == doctest::Approx(1.90e5).epsilon(1e-2));
  CHECK(arrhenius_rate(arrhenius_ev(1.0e12, 0.38), 300.0) == doctest::Approx(4.12e5).epsilon(1e-2));

  const auto molar = arrhenius_molar(1.0e12, 50.0e3);
  CHECK(arrhenius_rate(molar, 300.0) == doctest::Approx(1.0e12 * std::exp(-50.0e3 / (8.314 * 300.0))).epsilon(1e-15));

  // Cooling lowers an activated rate.
  CHECK(arrhenius_rate(spec, 200.0) < arrhenius_rate(spec, 300.0));

  // eV barriers pair with k_B, molar barriers with R; anything else throws.
  CHECK_NOTHROW(make_arrhenius(1.0e12, 0.5, BarrierUnit::electron_volt, 8.617333e-5));
  CHECK_NOTHROW(make_arrhenius(1.0e12, 50.0e3, BarrierUnit::joule_per_mole, 8.314));
  CHECK_THROWS_AS(make_arrhenius(1.0e12, 0.5, BarrierUnit::electron_volt, 8.314), ConfigError);
  CHECK_THROWS_AS(make_arrhenius(1.0e12, 50.0e3, BarrierUnit::joule_per_mole, 8.617333e-5), ConfigError);

  CHECK_THROWS_AS(arrhenius_rate(spec, 0.0), ConfigError);
  CHECK_THROWS_AS(arrhenius_ev(-1.0, 0.5), ConfigError);

  // Closure over a schedule sees the scheduled temperature.
  TemperatureSchedule quench(300.0);
  quench.exp_approach_to(200.0, 2.0e-5, 1.0e-3);
  const auto fn = arrhenius_rate_fn(spec, quench);
  CHECK(fn(0.0) == arrhenius_rate(spec, 300.0));
  CHECK(fn(1.0) == arrhenius_rate(spec, 200.0));
}

TEST_CASE("solvent viscosity sets the attempt rate") {
  // eta(22 C) = 0.226 + 1.0723 exp(-12/33)
  const double eta22 = 0.226 + 1.0723 * std::exp(-12.0 / 33.0);
  CHECK(eta22 == doctest::Approx(0.97140).epsilon(1e-4));

  // At 22 C the prefactor is the base rate, exactly.
  CHECK(viscosity_prefactor_hz(295.15) == 1.0e5);

  // Warmer solvent, lower viscosity, faster attempts.
  CHECK(viscosity_prefactor_hz(316.15) == doctest::Approx(1.0e5 * eta22 / (0.226 + 1.0723 * std::exp(-1.0))).epsilon(1e-12));
  CHECK(viscosity_prefactor_hz(316.15) > viscosity_prefactor_hz(295.15));
}

TEST_CASE("two-state folding rates against frozen references") {
  const ProteinThermo thermo;

  // At the melting temperature the heat-capacity bracket vanishes and the
  // activation exponents reduce to (dH - T dS)/(R T).
  const double tm = thermo.melt_temp_k;
  const auto at_tm = protein_rates(thermo, tm);
  const double k0_tm = viscosity_prefactor_hz(tm);
  CHECK(std::log(k0_tm / at_tm.fold_hz) == doctest::Approx(13.9237701).epsilon(1e-7));
  CHECK(std::log(k0_tm / at_tm.unfold_hz) == doctest::Approx(14.0752240).epsilon(1e-7));
  // Folding is still slightly faster at the melting temperature itself; the
  // rates cross a fraction of a kelvin above it.
  CHECK(at_tm.fold_hz > at_tm.unfold_hz);

  double lo = tm, hi = tm + 2.0;
  auto gap = [&](double T) {
    const auto k = protein_rates(thermo, T);
    return k.fold_hz - k.unfold_hz;
  };
  REQUIRE(gap(lo) > 0.0);
  REQUIRE(gap(hi) < 0.0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(tm + 0.1838598).epsilon(1e-6));

  // Endpoint rates of the 309 K -> 316.15 K protocol.
  const auto cold = protein_rates(thermo, 309.0);
  CHECK(cold.fold_hz == doctest::Approx(0.38826288).epsilon(1e-7));
  CHECK(cold.unfold_hz == doctest::Approx(0.014219553).epsilon(1e-7));
  const auto hot = protein_rates(thermo, 316.15);
  CHECK(hot.fold_hz == doctest::Approx(0.027718808).epsilon(1e-7));
  CHECK(hot.unfold_hz == doctest::Approx(0.35860863).epsilon(1e-7));

  CHECK_THROWS_AS(protein_rates(thermo, -1.0), ConfigError);
}

TEST_CASE("denatured-basin radial profile follows the unfolding rate") {
  const ProteinThermo thermo;
  TemperatureSchedule ramp(309.0);
  ramp.linear_to(316.15, 50.0);
  const auto profile = protein_radial_profile(thermo, ramp);

  const double ku0 = protein_rates(thermo, 309.0).unfold_hz;
  CHECK(profile.level(0, 0.0) == doctest::Approx(std::pow(ku0, 0.25)).epsilon(1e-15));
  CHECK(profile.level(1, 0.0) == doctest::Approx(std::pow(ku0, 0.5)).epsilon(1e-15));
  CHECK(profile.level(4, 0.0) == profile.level(1, 0.0));  // constant tail

  const double ku50 = protein_rates(thermo, 316.15).unfold_hz;
  CHECK(profile.level(0, 50.0) == doctest::Approx(std::pow(ku50, 0.25)).epsilon(1e-15));

  // Internal moves stay faster than escape from the basin across the ramp:
  // fractional powers of a sub-hertz rate dominate the rate itself.
  for (double t = 0.0; t <= 50.0; t += 5.0) {
    const auto k = protein_rates(thermo, ramp.temperature_at(t));
    CHECK(profile.level(0, t) > profile.level(1, t));
    CHECK(profile.level(1, t) > k.unfold_hz);
  }
}

TEST_CASE("adaptive quadrature with breakpoint splitting") {
  // Polynomial: Simpson is exact on cubics.
  CHECK(integrate([](double x) { return x * x * x; }, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));

  // Smooth transcendental against the closed form.
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 5.0) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));

  // Orientation flip.
  CHECK(integrate([](double x) { return std::exp(-x); }, 5.0, 0.0) ==
        doctest::Approx(-(1.0 - std::exp(-5.0))).epsilon(1e-12));

  // Piecewise integrand with a kink: exact once the breakpoint is declared.
  QuadratureOptions opts;
  opts.breakpoints = {1.0};
  const auto kinked = [](double x) { return x < 1.0 ? x : 2.0 - x; };
  CHECK(integrate(kinked, 0.0, 2.0, opts) == doctest::Approx(1.0).epsilon(1e-12));

  // Narrow transient inside a long window, the shape of a quench integrand.
  const auto transient = [](double x) { return 1.0 + 100.0 * std::exp(-x / 2.0e-5); };
  const double expected = 1.0e-2 + 100.0 * 2.0e-5;  // tail beyond 1e-2 is ~e^{-500}
  CHECK(integrate(transient, 0.0, 1.0e-2) == doctest::Approx(expected).epsilon(1e-10));

  // Empty interval and argument validation.
  CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
  QuadratureOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad), ConfigError);
}

TEST_CASE("scheduled rate integrates consistently across a quench") {
  // Integral of an activated rate through the quench, reference by a dense
  // trapezoid sweep refined to convergence.
  TemperatureSchedule quench(300.0);
  quench.exp_approach_to(200.0, 2.0e-5, 1.0e-3);
  const auto rate = arrhenius_rate_fn(arrhenius_ev(1.0e12, 0.5), quench);

  QuadratureOptions opts;
  opts.tol = 1e-10;
  opts.breakpoints = quench.breakpoints();
  const double adaptive = integrate(rate, 0.0, 1.0e-2, opts);

  const int panels = 4'000'000;
  const double h = 1.0e-2 / panels;
  double trapezoid = 0.5 * (rate(0.0) + rate(1.0e-2));
  for (int i = 1; i < panels; ++i) trapezoid += rate(i * h);
  trapezoid *= h;

  CHECK(adaptive == doctest::Approx(trapezoid).epsilon(1e-8));
}
