#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ultrarelax/landscape.hpp"
#include "ultrarelax/rates.hpp"
#include "ultrarelax/schedule.hpp"
#include "ultrarelax/tree.hpp"

namespace ultrarelax {

// Declarative rate law, compiled against the run's temperature schedule.
// kind selects the law and which fields are read:
//   constant        rate_hz
//   arrhenius_ev    prefactor_hz, barrier_ev
//   arrhenius_jmol  prefactor_hz, barrier_j_per_mol
//   protein_fold    power  (rate = k_f(T(t))^power)
//   protein_unfold  power  (rate = k_u(T(t))^power)
struct RateSpec {
  std::string kind = "constant";
  double rate_hz = 0.0;
  double prefactor_hz = 0.0;
  double barrier_ev = 0.0;
  double barrier_j_per_mol = 0.0;
  double power = 1.0;
};

struct ProfileSpec {
  std::vector<RateSpec> levels;
  std::string tail = "constant";  // constant | zero
};

// One off-diagonal exchange entry: mass flows from basin `from` into `to`.
struct ExchangeSpec {
  int to = 0;
  int from = 0;
  RateSpec rate;
};

struct ScheduleSpec {
  double start_temp_k = 300.0;
  double start_time_s = 0.0;
  struct SegmentSpec {
    std::string shape;  // hold | linear | exp_approach
    double t_end_s = 0.0;
    double target_k = 0.0;  // linear, exp_approach
    double tau_s = 0.0;     // exp_approach
  };
  std::vector<SegmentSpec> segments;
};

// Output time grid; always starts at t = 0. Log spacing keeps the first
// positive point at t_first_s (0 means t_end_s * 1e-6).
struct GridSpec {
  double t_end_s = 1.0;
  int points = 101;
  std::string spacing = "linear";  // linear | log
  double t_first_s = 0.0;
};

struct SolverSpec {
  double quadrature_tol = 1e-10;
  int trotter_steps_per_cell = 16;
  double rk4_dt_s = 0.0;            // 0: derived from the peak rate
  std::string eigenlevel = "child";  // scale convention used for emitted S(t)
};

struct OracleSpec {
  int depth = 2;
  std::uint64_t paths = 20000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string eigenlevel = "support";  // convention the dense audit checks
  double spectrum_rel_tol = 1e-8;
  double trajectory_tol = 1e-5;
  double chi_square_significance = 0.01;
};

// Glass-quench sweep: one run per target temperature, every run cooling
// from schedule.start_temp_k along an exponential approach completed (to
// double precision) by quench_end_s.
struct GlassQuenchSpec {
  std::vector<double> targets_k{290.0, 260.0, 230.0, 200.0};
  double quench_end_s = 1e-3;
  double tau_s = 2e-5;
};

// Full run description; round-trips losslessly through JSON and is embedded,
// fully resolved, in every output bundle.
struct ScenarioConfig {
  std::string scenario = "custom";  // glass | protein | custom
  int p = 3;
  ScheduleSpec schedule;
  std::vector<ProfileSpec> basins;
  std::vector<ExchangeSpec> exchange;
  BallSpec initial_ball;
  GridSpec grid;
  SolverSpec solver;
  OracleSpec oracle;
  ProteinThermo thermo;
  GlassQuenchSpec glass_quench;
};

ScenarioConfig default_glass_config();
ScenarioConfig default_protein_config();
ScenarioConfig default_custom_config();
// By scenario name; unknown names throw ConfigError.
ScenarioConfig default_config_for(const std::string& scenario);

// JSON text <-> config. Parsing rejects unknown keys and wrong types with
// field-level messages (ConfigError); serialization writes every field plus
// the library version string, so dumps are stable and self-describing.
ScenarioConfig parse_config_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config_file(const std::string& path);  // IoError on read failure

// Compilation of the declarative pieces.
TemperatureSchedule build_schedule(const ScheduleSpec& spec);
RateFn compile_rate(const RateSpec& spec, const TemperatureSchedule& schedule,
                    const ProteinThermo& thermo);
LandscapeModel build_model(const ScenarioConfig& cfg, const TemperatureSchedule& schedule);
std::vector<double> build_grid(const GridSpec& spec);

// What a runner produced: files written, a printable report, and the exit
// code the CLI should return (0 ok, 3 tolerance breach).
struct RunArtifacts {
  std::vector<std::string> files;
  std::string summary;
  int exit_code = 0;
};

// Quench sweep: per-target CSV (t_s, temp_k, p1_closed, p1_trotter,
// survival), targets run in parallel.
RunArtifacts run_glass_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

// Folding ramp: rate curves, populations + survival, and frozen-temperature
// control relaxations.
RunArtifacts run_protein_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

// Dense-grid audit: eigenvalue match, trajectory max error, Monte Carlo
// chi-square; exit code 3 if any tolerance is breached.
RunArtifacts run_oracle_compare(const ScenarioConfig& cfg, const std::string& out_dir);

// Stochastic ensemble on the configured model; emits occupancy series and
// the raw leaf counts (byte-identical for identical config + seed).
RunArtifacts run_mc(const ScenarioConfig& cfg, const std::string& out_dir);

// Arbitrary configured model: mean occupations and survival on the grid.
RunArtifacts run_custom(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace ultrarelax
