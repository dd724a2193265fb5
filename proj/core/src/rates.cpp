#include "ultrarelax/rates.hpp"

#include <cmath>
#include <string>

#include "ultrarelax/errors.hpp"
#include "ultrarelax/tree.hpp"

namespace ultrarelax {

namespace {

void check_spec(const ArrheniusSpec& spec) {
  if (!(spec.prefactor_hz > 0.0)) throw ConfigError("arrhenius: prefactor must be positive");
  if (spec.barrier < 0.0) throw ConfigError("arrhenius: barrier must be non-negative");
}

double thermal_constant_for(BarrierUnit unit) {
  return unit == BarrierUnit::electron_volt ? constants::k_boltzmann_ev_per_k
                                            : constants::gas_constant_j_per_mol_k;
}

}  // namespace

ArrheniusSpec arrhenius_ev(double prefactor_hz, double barrier_ev) {
  ArrheniusSpec spec{prefactor_hz, barrier_ev, BarrierUnit::electron_volt};
  check_spec(spec);
  return spec;
}

ArrheniusSpec arrhenius_molar(double prefactor_hz, double barrier_j_per_mol) {
  ArrheniusSpec spec{prefactor_hz, barrier_j_per_mol, BarrierUnit::joule_per_mole};
  check_spec(spec);
  return spec;
}

ArrheniusSpec make_arrhenius(double prefactor_hz, double barrier, BarrierUnit unit,
                             double thermal_constant) {
  if (thermal_constant != thermal_constant_for(unit))
    throw ConfigError(
        "arrhenius: thermal constant " + std::to_string(thermal_constant) +
        " does not match the barrier unit (eV barriers pair with k_B = 8.617333e-5 eV/K, "
        "J/mol barriers with R = 8.314 J/(mol K))");
  ArrheniusSpec spec{prefactor_hz, barrier, unit};
  check_spec(spec);
  return spec;
}

double arrhenius_rate(const ArrheniusSpec& spec, double temp_k) {
  check_spec(spec);
  if (!(temp_k > 0.0)) throw ConfigError("arrhenius: temperature must be positive");
  return spec.prefactor_hz * std::exp(-spec.barrier / (thermal_constant_for(spec.unit) * temp_k));
}

RateFn arrhenius_rate_fn(const ArrheniusSpec& spec, const TemperatureSchedule& schedule) {
  check_spec(spec);
  return [spec, schedule](double t) { return arrhenius_rate(spec, schedule.temperature_at(t)); };
}

double viscosity_prefactor_hz(double temp_k, double base_rate_hz) {
  if (!(temp_k > 0.0)) throw ConfigError("viscosity prefactor: temperature must be positive");
  if (!(base_rate_hz > 0.0)) throw ConfigError("viscosity prefactor: base rate must be positive");
  static const double eta_22c = 0.226 + 1.0723 * std::exp(-(22.0 - 10.0) / 33.0);
  const double celsius = temp_k - constants::zero_celsius_k;
  const double eta = 0.226 + 1.0723 * std::exp(-(celsius - 10.0) / 33.0);
  return base_rate_hz * eta_22c / eta;
}

FoldingRates protein_rates(const ProteinThermo& thermo, double temp_k) {
  if (!(temp_k > 0.0)) throw ConfigError("protein rates: temperature must be positive");
  if (!(thermo.melt_temp_k > 0.0)) throw ConfigError("protein rates: melting temperature must be positive");
  const double rt = constants::gas_constant_j_per_mol_k * temp_k;
  // Heat-capacity bracket, zero at the melting temperature.
  const double bracket = temp_k - thermo.melt_temp_k + temp_k * std::log(thermo.melt_temp_k / temp_k);
  const double dg_fold =
      thermo.fold_dh_j_per_mol - temp_k * thermo.fold_ds_j_per_mol_k + thermo.fold_dcp_j_per_mol_k * bracket;
  const double dg_unfold =
      thermo.unfold_dh_j_per_mol - temp_k * thermo.unfold_ds_j_per_mol_k + thermo.unfold_dcp_j_per_mol_k * bracket;
  const double attempt = viscosity_prefactor_hz(temp_k, thermo.attempt_rate_hz);
  return FoldingRates{attempt * std::exp(-dg_fold / rt), attempt * std::exp(-dg_unfold / rt)};
}

RadialProfile protein_radial_profile(const ProteinThermo& thermo,
                                     const TemperatureSchedule& schedule, int p) {
  if (!is_prime(p)) throw ConfigError("protein profile: p must be prime");
  RadialProfile profile;
  profile.p = p;
  profile.tail = TailRule::constant_extend;
  profile.levels = {
      [thermo, schedule](double t) {
        return std::pow(protein_rates(thermo, schedule.temperature_at(t)).unfold_hz, 0.25);
      },
      [thermo, schedule](double t) {
        return std::pow(protein_rates(thermo, schedule.temperature_at(t)).unfold_hz, 0.5);
      },
  };
  return profile;
}

}  // namespace ultrarelax
