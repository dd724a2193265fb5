#pragma once

#include "ultrarelax/profile.hpp"
#include "ultrarelax/schedule.hpp"

namespace ultrarelax {

namespace constants {
inline constexpr double k_boltzmann_ev_per_k = 8.617333e-5;
inline constexpr double gas_constant_j_per_mol_k = 8.314;
inline constexpr double zero_celsius_k = 273.15;
}  // namespace constants

// Which thermal constant a barrier pairs with: eV barriers divide by
// k_B * T, molar barriers by R * T. Mixing is rejected at construction so a
// mismatched (barrier, constant) pair cannot silently produce rates that are
// wrong by a factor of ~1e5.
enum class BarrierUnit { electron_volt, joule_per_mole };

struct ArrheniusSpec {
  double prefactor_hz = 0.0;
  double barrier = 0.0;
  BarrierUnit unit = BarrierUnit::electron_volt;
};

ArrheniusSpec arrhenius_ev(double prefactor_hz, double barrier_ev);
ArrheniusSpec arrhenius_molar(double prefactor_hz, double barrier_j_per_mol);

// Checking constructor: the caller states which thermal constant it intends
// to divide by, and a value inconsistent with the barrier unit throws.
ArrheniusSpec make_arrhenius(double prefactor_hz, double barrier, BarrierUnit unit,
                             double thermal_constant);

// W * exp(-U / (k T)) with k chosen by the barrier unit. Temperature in
// kelvin, strictly positive.
double arrhenius_rate(const ArrheniusSpec& spec, double temp_k);

// The same rate as a function of time through a temperature protocol.
RateFn arrhenius_rate_fn(const ArrheniusSpec& spec, const TemperatureSchedule& schedule);

// Two-state folding thermodynamics. Enthalpies in J/mol, entropies in
// J/(mol K), heat capacity steps in J/(mol K); all referenced to the melting
// temperature. Activation free energy at temperature T:
//   dG(T) = dH - T dS + dCp (T - T_melt + T ln(T_melt / T))
// and the rate is attempt_rate(T) * exp(-dG / (R T)).
struct ProteinThermo {
  double melt_temp_k = 312.9;
  double fold_dh_j_per_mol = -333.0e3;
  double fold_ds_j_per_mol_k = -1.18e3;
  double fold_dcp_j_per_mol_k = -48.0e3;
  double unfold_dh_j_per_mol = 337.0e3;
  double unfold_ds_j_per_mol_k = 0.96e3;
  double unfold_dcp_j_per_mol_k = -38.0e3;
  double attempt_rate_hz = 1.0e5;  // at 22 C, scaled elsewhere by viscosity
};

// Solvent-limited attempt rate: base_rate_hz * eta(22 C) / eta(T), with the
// empirical water viscosity eta(c) = 0.226 + 1.0723 exp(-(c - 10)/33) in
// centipoise, c in Celsius. Equals base_rate_hz exactly at 22 C.
double viscosity_prefactor_hz(double temp_k, double base_rate_hz = 1.0e5);

struct FoldingRates {
  double fold_hz = 0.0;    // native-ward conversion rate
  double unfold_hz = 0.0;  // denatured-ward conversion rate
};

FoldingRates protein_rates(const ProteinThermo& thermo, double temp_k);

// Intra-basin radial profile of the denatured basin: jump rates at the two
// resolved distance levels are fractional powers of the unfolding rate,
//   w(p^0, t) = k_u(T(t))^{1/4},  w(p^{-1}, t) = k_u(T(t))^{1/2},
// extended by a constant tail. Keeps internal reconfiguration faster than
// basin exchange at every temperature of interest.
RadialProfile protein_radial_profile(const ProteinThermo& thermo,
                                     const TemperatureSchedule& schedule, int p = 3);

}  // namespace ultrarelax
