#include "ultrarelax/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "ultrarelax/csv.hpp"
#include "ultrarelax/dense.hpp"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/mc.hpp"
#include "ultrarelax/mean.hpp"
#include "ultrarelax/spectral.hpp"
#include "ultrarelax/version.hpp"

namespace ultrarelax {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON plumbing: strict field checking so a typo in a config file is a
// ConfigError naming the field, never a silently applied default.

void check_keys(const Json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string(where) + ": unknown field '" + item.key() + "'");
  }
}

double get_double(const Json& j, const char* where, const char* key, double fallback,
                  bool required = false) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
    return fallback;
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& j, const char* where, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(std::string(where) + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t get_u64(const Json& j, const char* where, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
    throw ConfigError(std::string(where) + ": '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const Json& j, const char* where, const char* key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(where) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

Json rate_to_json(const RateSpec& rate) {
  Json j;
  j["kind"] = rate.kind;
  if (rate.kind == "constant") {
    j["rate_hz"] = rate.rate_hz;
  } else if (rate.kind == "arrhenius_ev") {
    j["prefactor_hz"] = rate.prefactor_hz;
    j["barrier_ev"] = rate.barrier_ev;
  } else if (rate.kind == "arrhenius_jmol") {
    j["prefactor_hz"] = rate.prefactor_hz;
    j["barrier_j_per_mol"] = rate.barrier_j_per_mol;
  } else if (rate.kind == "protein_fold" || rate.kind == "protein_unfold") {
    j["power"] = rate.power;
  } else {
    throw ConfigError("rate: unknown kind '" + rate.kind + "'");
  }
  return j;
}

RateSpec rate_from_json(const Json& j, const std::string& where) {
  RateSpec rate;
  rate.kind = get_string(j, where.c_str(), "kind", "");
  if (rate.kind == "constant") {
    check_keys(j, where.c_str(), {"kind", "rate_hz"});
    rate.rate_hz = get_double(j, where.c_str(), "rate_hz", 0.0, true);
  } else if (rate.kind == "arrhenius_ev") {
    check_keys(j, where.c_str(), {"kind", "prefactor_hz", "barrier_ev"});
    rate.prefactor_hz = get_double(j, where.c_str(), "prefactor_hz", 0.0, true);
    rate.barrier_ev = get_double(j, where.c_str(), "barrier_ev", 0.0, true);
  } else if (rate.kind == "arrhenius_jmol") {
    check_keys(j, where.c_str(), {"kind", "prefactor_hz", "barrier_j_per_mol"});
    rate.prefactor_hz = get_double(j, where.c_str(), "prefactor_hz", 0.0, true);
    rate.barrier_j_per_mol = get_double(j, where.c_str(), "barrier_j_per_mol", 0.0, true);
  } else if (rate.kind == "protein_fold" || rate.kind == "protein_unfold") {
    check_keys(j, where.c_str(), {"kind", "power"});
    rate.power = get_double(j, where.c_str(), "power", 1.0);
  } else {
    throw ConfigError(where + ": unknown rate kind '" + rate.kind + "'");
  }
  return rate;
}

Json schedule_to_json(const ScheduleSpec& spec) {
  Json j;
  j["start_temp_k"] = spec.start_temp_k;
  j["start_time_s"] = spec.start_time_s;
  Json segments = Json::array();
  for (const auto& seg : spec.segments) {
    Json s;
    s["shape"] = seg.shape;
    s["t_end_s"] = seg.t_end_s;
    if (seg.shape == "linear" || seg.shape == "exp_approach") s["target_k"] = seg.target_k;
    if (seg.shape == "exp_approach") s["tau_s"] = seg.tau_s;
    segments.push_back(std::move(s));
  }
  j["segments"] = std::move(segments);
  return j;
}

ScheduleSpec schedule_from_json(const Json& j) {
  ScheduleSpec spec;
  check_keys(j, "schedule", {"start_temp_k", "start_time_s", "segments"});
  spec.start_temp_k = get_double(j, "schedule", "start_temp_k", spec.start_temp_k);
  spec.start_time_s = get_double(j, "schedule", "start_time_s", spec.start_time_s);
  if (j.contains("segments")) {
    if (!j.at("segments").is_array()) throw ConfigError("schedule: 'segments' must be an array");
    for (const auto& s : j.at("segments")) {
      ScheduleSpec::SegmentSpec seg;
      seg.shape = get_string(s, "schedule segment", "shape", "");
      if (seg.shape == "hold") {
        check_keys(s, "schedule segment", {"shape", "t_end_s"});
      } else if (seg.shape == "linear") {
        check_keys(s, "schedule segment", {"shape", "t_end_s", "target_k"});
      } else if (seg.shape == "exp_approach") {
        check_keys(s, "schedule segment", {"shape", "t_end_s", "target_k", "tau_s"});
      } else {
        throw ConfigError("schedule segment: unknown shape '" + seg.shape + "'");
      }
      seg.t_end_s = get_double(s, "schedule segment", "t_end_s", 0.0, true);
      seg.target_k = get_double(s, "schedule segment", "target_k", 0.0,
                                seg.shape == "linear" || seg.shape == "exp_approach");
      seg.tau_s = get_double(s, "schedule segment", "tau_s", 0.0, seg.shape == "exp_approach");
      spec.segments.push_back(seg);
    }
  }
  return spec;
}

Json ball_to_json(const BallSpec& ball) {
  Json j;
  j["basin"] = ball.basin;
  j["center"] = Json::array();
  for (auto d : ball.center) j["center"].push_back(static_cast<int>(d));
  j["scale"] = ball.scale;
  return j;
}

BallSpec ball_from_json(const Json& j) {
  check_keys(j, "initial_ball", {"basin", "center", "scale"});
  BallSpec ball;
  ball.basin = get_int(j, "initial_ball", "basin", 0);
  ball.scale = get_int(j, "initial_ball", "scale", 0);
  if (j.contains("center")) {
    if (!j.at("center").is_array())
      throw ConfigError("initial_ball: 'center' must be an array of digits");
    for (const auto& d : j.at("center")) {
      if (!d.is_number_integer() || d.get<int>() < 0 || d.get<int>() > 255)
        throw ConfigError("initial_ball: center digits must be small non-negative integers");
      ball.center.push_back(static_cast<std::uint8_t>(d.get<int>()));
    }
  }
  return ball;
}

Json thermo_to_json(const ProteinThermo& t) {
  Json j;
  j["melt_temp_k"] = t.melt_temp_k;
  j["fold_dh_j_per_mol"] = t.fold_dh_j_per_mol;
  j["fold_ds_j_per_mol_k"] = t.fold_ds_j_per_mol_k;
  j["fold_dcp_j_per_mol_k"] = t.fold_dcp_j_per_mol_k;
  j["unfold_dh_j_per_mol"] = t.unfold_dh_j_per_mol;
  j["unfold_ds_j_per_mol_k"] = t.unfold_ds_j_per_mol_k;
  j["unfold_dcp_j_per_mol_k"] = t.unfold_dcp_j_per_mol_k;
  j["attempt_rate_hz"] = t.attempt_rate_hz;
  return j;
}

ProteinThermo thermo_from_json(const Json& j) {
  ProteinThermo t;
  check_keys(j, "protein_thermo",
             {"melt_temp_k", "fold_dh_j_per_mol", "fold_ds_j_per_mol_k", "fold_dcp_j_per_mol_k",
              "unfold_dh_j_per_mol", "unfold_ds_j_per_mol_k", "unfold_dcp_j_per_mol_k",
              "attempt_rate_hz"});
  t.melt_temp_k = get_double(j, "protein_thermo", "melt_temp_k", t.melt_temp_k);
  t.fold_dh_j_per_mol = get_double(j, "protein_thermo", "fold_dh_j_per_mol", t.fold_dh_j_per_mol);
  t.fold_ds_j_per_mol_k =
      get_double(j, "protein_thermo", "fold_ds_j_per_mol_k", t.fold_ds_j_per_mol_k);
  t.fold_dcp_j_per_mol_k =
      get_double(j, "protein_thermo", "fold_dcp_j_per_mol_k", t.fold_dcp_j_per_mol_k);
  t.unfold_dh_j_per_mol =
      get_double(j, "protein_thermo", "unfold_dh_j_per_mol", t.unfold_dh_j_per_mol);
  t.unfold_ds_j_per_mol_k =
      get_double(j, "protein_thermo", "unfold_ds_j_per_mol_k", t.unfold_ds_j_per_mol_k);
  t.unfold_dcp_j_per_mol_k =
      get_double(j, "protein_thermo", "unfold_dcp_j_per_mol_k", t.unfold_dcp_j_per_mol_k);
  t.attempt_rate_hz = get_double(j, "protein_thermo", "attempt_rate_hz", t.attempt_rate_hz);
  return t;
}

// ---------------------------------------------------------------------------
// Output plumbing.

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string ensure_out_dir(const std::string& out_dir) {
  const std::string dir = out_dir.empty() ? "." : out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.flush();
  if (!file) throw IoError("write to " + path + " failed");
}

std::string write_config_bundle(const ScenarioConfig& cfg, const std::string& dir,
                                const std::string& prefix) {
  const std::string path = join_path(dir, prefix + "_config.json");
  write_text(path, config_to_json(cfg));
  return path;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EigenlevelConvention convention_from(const std::string& name, const char* where) {
  if (name == "support") return EigenlevelConvention::support;
  if (name == "child") return EigenlevelConvention::child;
  throw ConfigError(std::string(where) + ": eigenlevel must be 'support' or 'child', got '" +
                    name + "'");
}

QuadratureOptions quadrature_for(const ScenarioConfig& cfg, const LandscapeModel& model) {
  QuadratureOptions quad;
  quad.tol = cfg.solver.quadrature_tol;
  quad.breakpoints = model.time_breakpoints;
  return quad;
}

// Tracked-basin trajectory of the product-formula integrator, chained cell
// by cell over the output grid.
std::vector<double> trotter_p1_series(const LandscapeModel& model, const std::vector<double>& grid,
                                      int steps_per_cell, int tracked) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.num_basins);
  u(tracked) = 1.0;
  std::vector<double> out;
  out.reserve(grid.size());
  out.push_back(u(tracked));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    u = evolve_mean_trotter(u, model, grid[i - 1], grid[i], steps_per_cell).states.back();
    out.push_back(u(tracked));
  }
  return out;
}

// Mean-sector evolver backed by the exact two-state integrating-factor
// solution; used wherever a two-basin model needs the mean advanced inside
// the spectral solver.
MeanEvolver two_state_evolver(const LandscapeModel& model, QuadratureOptions quad) {
  const RateFn gain = model.exchange_rate(0, 1);
  const RateFn loss = model.exchange_rate(1, 0);
  return [gain, loss, quad](const Eigen::VectorXd& u, const LandscapeModel&, double s, double t) {
    const auto sol = p1_closed_form(gain, loss, {s, t}, u(0), quad);
    Eigen::VectorXd v(2);
    v << sol.p1.back(), sol.p2.back();
    return v;
  };
}

double auto_dense_dt(const ScenarioConfig& cfg, const LandscapeModel& model, int n,
                     double horizon) {
  if (cfg.solver.rk4_dt_s > 0.0) return cfg.solver.rk4_dt_s;
  // Peak total exit rate bounds the stiffest eigenvalue; 0.05/peak keeps the
  // integrator deep inside its stability and accuracy region.
  return 0.05 / mc_rate_bound(model, n, 0.0, horizon, {});
}

void require_two_tracked_basins(const ScenarioConfig& cfg, const char* where) {
  if (cfg.basins.size() != 2)
    throw ConfigError(std::string(where) + ": needs exactly two basins, got " +
                      std::to_string(cfg.basins.size()));
  if (cfg.initial_ball.basin != 0)
    throw ConfigError(std::string(where) + ": the tracked initial ball must sit in basin 0");
}

TemperatureSchedule glass_target_schedule(const ScenarioConfig& cfg, double target_k) {
  TemperatureSchedule schedule(cfg.schedule.start_temp_k, cfg.schedule.start_time_s);
  schedule.exp_approach_to(target_k, cfg.glass_quench.tau_s, cfg.glass_quench.quench_end_s);
  return schedule;
}

// The schedule a non-sweep runner (oracle-compare, mc, custom) should use:
// glass configs describe a sweep, so those runs pin the first quench target.
TemperatureSchedule runner_schedule(const ScenarioConfig& cfg) {
  if (cfg.scenario == "glass" && cfg.schedule.segments.empty()) {
    if (cfg.glass_quench.targets_k.empty())
      throw ConfigError("glass: no quench targets configured");
    return glass_target_schedule(cfg, cfg.glass_quench.targets_k.front());
  }
  return build_schedule(cfg.schedule);
}

}  // namespace

// ---------------------------------------------------------------------------
// Defaults.

ScenarioConfig default_glass_config() {
  ScenarioConfig cfg;
  cfg.scenario = "glass";
  cfg.p = 3;
  cfg.schedule.start_temp_k = 300.0;

  ProfileSpec profile;
  RateSpec coarse;
  coarse.kind = "arrhenius_ev";
  coarse.prefactor_hz = 1e12;
  coarse.barrier_ev = 0.4;
  RateSpec fine = coarse;
  fine.barrier_ev = 0.38;
  profile.levels = {coarse, fine};
  cfg.basins = {profile, profile};

  RateSpec gain;  // return flow into the tracked basin
  gain.kind = "arrhenius_ev";
  gain.prefactor_hz = 1e12;
  gain.barrier_ev = 0.8;
  RateSpec loss = gain;  // escape from the tracked basin
  loss.barrier_ev = 0.5;
  ExchangeSpec into0{0, 1, gain};
  ExchangeSpec outof0{1, 0, loss};
  cfg.exchange = {into0, outof0};

  cfg.initial_ball.basin = 0;
  cfg.initial_ball.center = {0};
  cfg.initial_ball.scale = -1;

  cfg.grid.t_end_s = 1e-2;
  cfg.grid.points = 161;
  cfg.grid.spacing = "log";
  cfg.grid.t_first_s = 1e-7;

  cfg.solver.eigenlevel = "child";
  cfg.oracle.depth = 3;
  cfg.oracle.paths = 20000;
  return cfg;
}

ScenarioConfig default_protein_config() {
  ScenarioConfig cfg;
  cfg.scenario = "protein";
  cfg.p = 3;
  cfg.schedule.start_temp_k = 309.0;
  ScheduleSpec::SegmentSpec ramp;
  ramp.shape = "linear";
  ramp.target_k = 316.15;
  ramp.t_end_s = 50.0;
  cfg.schedule.segments = {ramp};

  ProfileSpec profile;
  RateSpec quarter;
  quarter.kind = "protein_unfold";
  quarter.power = 0.25;
  RateSpec half = quarter;
  half.power = 0.5;
  profile.levels = {quarter, half};
  cfg.basins = {profile, profile};

  RateSpec unfolding;  // native basin -> denatured basin, feeds the tracked one
  unfolding.kind = "protein_unfold";
  RateSpec folding;  // drains the tracked basin
  folding.kind = "protein_fold";
  ExchangeSpec into0{0, 1, unfolding};
  ExchangeSpec outof0{1, 0, folding};
  cfg.exchange = {into0, outof0};

  cfg.initial_ball.basin = 0;
  cfg.initial_ball.center = {0};
  cfg.initial_ball.scale = -1;

  cfg.grid.t_end_s = 50.0;
  cfg.grid.points = 501;
  cfg.grid.spacing = "linear";

  cfg.solver.eigenlevel = "child";
  cfg.oracle.depth = 3;
  cfg.oracle.paths = 100000;
  return cfg;
}

ScenarioConfig default_custom_config() {
  ScenarioConfig cfg;
  cfg.scenario = "custom";
  cfg.p = 3;
  cfg.schedule.start_temp_k = 300.0;

  ProfileSpec profile;
  RateSpec fast;
  fast.kind = "constant";
  fast.rate_hz = 30.0;
  RateSpec slow = fast;
  slow.rate_hz = 10.0;
  profile.levels = {fast, slow};
  cfg.basins = {profile, profile};

  RateSpec gain;
  gain.kind = "constant";
  gain.rate_hz = 40.0;
  RateSpec loss = gain;
  loss.rate_hz = 60.0;
  ExchangeSpec into0{0, 1, gain};
  ExchangeSpec outof0{1, 0, loss};
  cfg.exchange = {into0, outof0};

  cfg.initial_ball.basin = 0;
  cfg.initial_ball.center = {0};
  cfg.initial_ball.scale = -1;

  cfg.grid.t_end_s = 0.05;
  cfg.grid.points = 51;
  cfg.grid.spacing = "linear";

  cfg.solver.eigenlevel = "support";
  cfg.oracle.depth = 2;
  cfg.oracle.paths = 20000;
  return cfg;
}

ScenarioConfig default_config_for(const std::string& scenario) {
  if (scenario == "glass") return default_glass_config();
  if (scenario == "protein") return default_protein_config();
  if (scenario == "custom") return default_custom_config();
  throw ConfigError("unknown scenario '" + scenario + "' (expected glass, protein, or custom)");
}

// ---------------------------------------------------------------------------
// Serialization.

std::string config_to_json(const ScenarioConfig& cfg) {
  Json j;
  j["version"] = version_string;
  j["scenario"] = cfg.scenario;
  j["p"] = cfg.p;
  j["schedule"] = schedule_to_json(cfg.schedule);
  j["basins"] = Json::array();
  for (const auto& basin : cfg.basins) {
    Json b;
    b["levels"] = Json::array();
    for (const auto& level : basin.levels) b["levels"].push_back(rate_to_json(level));
    b["tail"] = basin.tail;
    j["basins"].push_back(std::move(b));
  }
  j["exchange"] = Json::array();
  for (const auto& e : cfg.exchange) {
    Json x;
    x["to"] = e.to;
    x["from"] = e.from;
    x["rate"] = rate_to_json(e.rate);
    j["exchange"].push_back(std::move(x));
  }
  j["initial_ball"] = ball_to_json(cfg.initial_ball);
  j["grid"] = {{"t_end_s", cfg.grid.t_end_s},
               {"points", cfg.grid.points},
               {"spacing", cfg.grid.spacing},
               {"t_first_s", cfg.grid.t_first_s}};
  j["solver"] = {{"quadrature_tol", cfg.solver.quadrature_tol},
                 {"trotter_steps_per_cell", cfg.solver.trotter_steps_per_cell},
                 {"rk4_dt_s", cfg.solver.rk4_dt_s},
                 {"eigenlevel", cfg.solver.eigenlevel}};
  j["oracle"] = {{"depth", cfg.oracle.depth},
                 {"paths", cfg.oracle.paths},
                 {"seed", cfg.oracle.seed},
                 {"threads", cfg.oracle.threads},
                 {"eigenlevel", cfg.oracle.eigenlevel},
                 {"spectrum_rel_tol", cfg.oracle.spectrum_rel_tol},
                 {"trajectory_tol", cfg.oracle.trajectory_tol},
                 {"chi_square_significance", cfg.oracle.chi_square_significance}};
  j["protein_thermo"] = thermo_to_json(cfg.thermo);
  j["glass_quench"] = {{"targets_k", cfg.glass_quench.targets_k},
                       {"quench_end_s", cfg.glass_quench.quench_end_s},
                       {"tau_s", cfg.glass_quench.tau_s}};
  return j.dump(2) + "\n";
}

ScenarioConfig parse_config_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"version", "scenario", "p", "schedule", "basins", "exchange", "initial_ball",
              "grid", "solver", "oracle", "protein_thermo", "glass_quench"});

  ScenarioConfig cfg;
  cfg.scenario = get_string(j, "config", "scenario", cfg.scenario);
  if (cfg.scenario != "glass" && cfg.scenario != "protein" && cfg.scenario != "custom")
    throw ConfigError("config: unknown scenario '" + cfg.scenario + "'");
  cfg.p = get_int(j, "config", "p", cfg.p);

  if (j.contains("schedule")) cfg.schedule = schedule_from_json(j.at("schedule"));

  cfg.basins.clear();
  if (j.contains("basins")) {
    if (!j.at("basins").is_array()) throw ConfigError("config: 'basins' must be an array");
    for (const auto& b : j.at("basins")) {
      check_keys(b, "basin", {"levels", "tail"});
      ProfileSpec profile;
      profile.tail = get_string(b, "basin", "tail", profile.tail);
      if (profile.tail != "constant" && profile.tail != "zero")
        throw ConfigError("basin: tail must be 'constant' or 'zero'");
      if (!b.contains("levels") || !b.at("levels").is_array() || b.at("levels").empty())
        throw ConfigError("basin: 'levels' must be a non-empty array");
      for (const auto& level : b.at("levels"))
        profile.levels.push_back(rate_from_json(level, "basin level"));
      cfg.basins.push_back(std::move(profile));
    }
  }
  if (cfg.basins.empty()) throw ConfigError("config: at least one basin is required");

  if (j.contains("exchange")) {
    if (!j.at("exchange").is_array()) throw ConfigError("config: 'exchange' must be an array");
    for (const auto& x : j.at("exchange")) {
      check_keys(x, "exchange entry", {"to", "from", "rate"});
      ExchangeSpec e;
      e.to = get_int(x, "exchange entry", "to", -1);
      e.from = get_int(x, "exchange entry", "from", -1);
      if (!x.contains("rate")) throw ConfigError("exchange entry: missing 'rate'");
      e.rate = rate_from_json(x.at("rate"), "exchange rate");
      cfg.exchange.push_back(std::move(e));
    }
  }

  if (j.contains("initial_ball")) cfg.initial_ball = ball_from_json(j.at("initial_ball"));

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, "grid", {"t_end_s", "points", "spacing", "t_first_s"});
    cfg.grid.t_end_s = get_double(g, "grid", "t_end_s", cfg.grid.t_end_s);
    cfg.grid.points = get_int(g, "grid", "points", cfg.grid.points);
    cfg.grid.spacing = get_string(g, "grid", "spacing", cfg.grid.spacing);
    cfg.grid.t_first_s = get_double(g, "grid", "t_first_s", cfg.grid.t_first_s);
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver", {"quadrature_tol", "trotter_steps_per_cell", "rk4_dt_s", "eigenlevel"});
    cfg.solver.quadrature_tol = get_double(s, "solver", "quadrature_tol", cfg.solver.quadrature_tol);
    cfg.solver.trotter_steps_per_cell =
        get_int(s, "solver", "trotter_steps_per_cell", cfg.solver.trotter_steps_per_cell);
    cfg.solver.rk4_dt_s = get_double(s, "solver", "rk4_dt_s", cfg.solver.rk4_dt_s);
    cfg.solver.eigenlevel = get_string(s, "solver", "eigenlevel", cfg.solver.eigenlevel);
    convention_from(cfg.solver.eigenlevel, "solver");
  }

  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    check_keys(o, "oracle",
               {"depth", "paths", "seed", "threads", "eigenlevel", "spectrum_rel_tol",
                "trajectory_tol", "chi_square_significance"});
    cfg.oracle.depth = get_int(o, "oracle", "depth", cfg.oracle.depth);
    cfg.oracle.paths = get_u64(o, "oracle", "paths", cfg.oracle.paths);
    cfg.oracle.seed = get_u64(o, "oracle", "seed", cfg.oracle.seed);
    cfg.oracle.threads = get_int(o, "oracle", "threads", cfg.oracle.threads);
    cfg.oracle.eigenlevel = get_string(o, "oracle", "eigenlevel", cfg.oracle.eigenlevel);
    convention_from(cfg.oracle.eigenlevel, "oracle");
    cfg.oracle.spectrum_rel_tol =
        get_double(o, "oracle", "spectrum_rel_tol", cfg.oracle.spectrum_rel_tol);
    cfg.oracle.trajectory_tol = get_double(o, "oracle", "trajectory_tol", cfg.oracle.trajectory_tol);
    cfg.oracle.chi_square_significance =
        get_double(o, "oracle", "chi_square_significance", cfg.oracle.chi_square_significance);
  }

  if (j.contains("protein_thermo")) cfg.thermo = thermo_from_json(j.at("protein_thermo"));

  if (j.contains("glass_quench")) {
    const auto& g = j.at("glass_quench");
    check_keys(g, "glass_quench", {"targets_k", "quench_end_s", "tau_s"});
    if (g.contains("targets_k")) {
      if (!g.at("targets_k").is_array())
        throw ConfigError("glass_quench: 'targets_k' must be an array");
      cfg.glass_quench.targets_k.clear();
      for (const auto& t : g.at("targets_k")) {
        if (!t.is_number()) throw ConfigError("glass_quench: targets must be numbers");
        cfg.glass_quench.targets_k.push_back(t.get<double>());
      }
    }
    cfg.glass_quench.quench_end_s =
        get_double(g, "glass_quench", "quench_end_s", cfg.glass_quench.quench_end_s);
    cfg.glass_quench.tau_s = get_double(g, "glass_quench", "tau_s", cfg.glass_quench.tau_s);
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (file.bad()) throw IoError("failed reading config file '" + path + "'");
  return parse_config_json(text);
}

// ---------------------------------------------------------------------------
// Compilation.

TemperatureSchedule build_schedule(const ScheduleSpec& spec) {
  TemperatureSchedule schedule(spec.start_temp_k, spec.start_time_s);
  for (const auto& seg : spec.segments) {
    if (seg.shape == "hold")
      schedule.hold_until(seg.t_end_s);
    else if (seg.shape == "linear")
      schedule.linear_to(seg.target_k, seg.t_end_s);
    else if (seg.shape == "exp_approach")
      schedule.exp_approach_to(seg.target_k, seg.tau_s, seg.t_end_s);
    else
      throw ConfigError("schedule: unknown segment shape '" + seg.shape + "'");
  }
  return schedule;
}

RateFn compile_rate(const RateSpec& spec, const TemperatureSchedule& schedule,
                    const ProteinThermo& thermo) {
  if (spec.kind == "constant") {
    if (!(spec.rate_hz >= 0.0)) throw ConfigError("rate: constant rate_hz must be >= 0");
    return constant_rate(spec.rate_hz);
  }
  if (spec.kind == "arrhenius_ev")
    return arrhenius_rate_fn(arrhenius_ev(spec.prefactor_hz, spec.barrier_ev), schedule);
  if (spec.kind == "arrhenius_jmol")
    return arrhenius_rate_fn(arrhenius_molar(spec.prefactor_hz, spec.barrier_j_per_mol), schedule);
  if (spec.kind == "protein_fold" || spec.kind == "protein_unfold") {
    const bool fold = spec.kind == "protein_fold";
    const double power = spec.power;
    const ProteinThermo th = thermo;
    const TemperatureSchedule sched = schedule;
    return [fold, power, th, sched](double t) {
      const auto k = protein_rates(th, sched.temperature_at(t));
      return std::pow(fold ? k.fold_hz : k.unfold_hz, power);
    };
  }
  throw ConfigError("rate: unknown kind '" + spec.kind + "'");
}

LandscapeModel build_model(const ScenarioConfig& cfg, const TemperatureSchedule& schedule) {
  LandscapeModel model;
  model.p = cfg.p;
  model.num_basins = static_cast<int>(cfg.basins.size());
  for (const auto& spec : cfg.basins) {
    RadialProfile profile;
    profile.p = cfg.p;
    profile.tail = spec.tail == "zero" ? TailRule::zero : TailRule::constant_extend;
    for (const auto& level : spec.levels)
      profile.levels.push_back(compile_rate(level, schedule, cfg.thermo));
    model.profiles.push_back(std::move(profile));
  }

  const int n = model.num_basins;
  model.exchange.assign(static_cast<std::size_t>(n) * n, RateFn{});
  std::vector<bool> configured(model.exchange.size(), false);
  for (const auto& e : cfg.exchange) {
    if (e.to < 0 || e.to >= n || e.from < 0 || e.from >= n || e.to == e.from)
      throw ConfigError("exchange entry: invalid basin pair (to=" + std::to_string(e.to) +
                        ", from=" + std::to_string(e.from) + ")");
    const auto slot = static_cast<std::size_t>(e.to) * n + e.from;
    if (configured[slot])
      throw ConfigError("exchange entry: duplicate pair (to=" + std::to_string(e.to) +
                        ", from=" + std::to_string(e.from) + ")");
    configured[slot] = true;
    model.exchange[slot] = compile_rate(e.rate, schedule, cfg.thermo);
  }
  for (int to = 0; to < n; ++to)
    for (int from = 0; from < n; ++from)
      if (to != from && !configured[static_cast<std::size_t>(to) * n + from])
        model.exchange[static_cast<std::size_t>(to) * n + from] = constant_rate(0.0);

  model.time_breakpoints = schedule.breakpoints();
  model.validate();
  validate_ball(cfg.p, cfg.initial_ball);
  if (cfg.initial_ball.basin >= model.num_basins)
    throw ConfigError("initial_ball: basin index exceeds the model");
  return model;
}

std::vector<double> build_grid(const GridSpec& spec) {
  if (!(spec.t_end_s > 0.0)) throw ConfigError("grid: t_end_s must be positive");
  if (spec.points < 2) throw ConfigError("grid: need at least two points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(spec.points));
  grid.push_back(0.0);
  if (spec.spacing == "linear") {
    for (int i = 1; i < spec.points; ++i)
      grid.push_back(spec.t_end_s * static_cast<double>(i) / (spec.points - 1));
  } else if (spec.spacing == "log") {
    if (spec.points < 3) throw ConfigError("grid: log spacing needs at least three points");
    const double first = spec.t_first_s > 0.0 ? spec.t_first_s : spec.t_end_s * 1e-6;
    if (!(first < spec.t_end_s)) throw ConfigError("grid: t_first_s must be below t_end_s");
    const int decades_points = spec.points - 1;
    for (int i = 0; i < decades_points; ++i) {
      const double frac = static_cast<double>(i) / (decades_points - 1);
      grid.push_back(first * std::pow(spec.t_end_s / first, frac));
    }
    grid.back() = spec.t_end_s;
  } else {
    throw ConfigError("grid: spacing must be 'linear' or 'log'");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("grid: points are not strictly increasing");
  return grid;
}

// ---------------------------------------------------------------------------
// Runners.

RunArtifacts run_glass_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  require_two_tracked_basins(cfg, "glass");
  if (cfg.glass_quench.targets_k.empty()) throw ConfigError("glass: no quench targets configured");
  const std::string dir = ensure_out_dir(out_dir);
  const auto grid = build_grid(cfg.grid);

  struct TargetRun {
    double target_k = 0.0;
    CsvTable table;
    std::string note;
  };
  std::vector<TargetRun> runs(cfg.glass_quench.targets_k.size());
  std::vector<std::exception_ptr> failures(runs.size());

  auto run_target = [&](std::size_t slot) {
    const double target = cfg.glass_quench.targets_k[slot];
    const auto schedule = glass_target_schedule(cfg, target);
    const auto model = build_model(cfg, schedule);
    const auto quad = quadrature_for(cfg, model);

    const auto closed =
        p1_closed_form(model.exchange_rate(0, 1), model.exchange_rate(1, 0), grid, 1.0, quad);
    const auto trotter =
        trotter_p1_series(model, grid, cfg.solver.trotter_steps_per_cell, 0);
    SurvivalOptions sopts;
    sopts.convention = convention_from(cfg.solver.eigenlevel, "solver");
    sopts.quadrature = quad;
    const auto survival = survival_probability(cfg.initial_ball, model, grid, sopts);

    TargetRun& run = runs[slot];
    run.target_k = target;
    run.table.columns = {"t_s", "T_K", "p1_closed", "p1_trotter", "S"};
    for (std::size_t i = 0; i < grid.size(); ++i)
      run.table.rows.push_back({grid[i], schedule.temperature_at(grid[i]), closed.p1[i],
                                trotter[i], survival.survival[i]});

    run.note = "quench to " + num(target) + " K: ";
    bool crossed = false;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (survival.survival[i] < 0.5 && survival.survival[i - 1] >= 0.5) {
        const double s0 = survival.survival[i - 1];
        const double s1 = survival.survival[i];
        const double t_cross = grid[i - 1] + (0.5 - s0) * (grid[i] - grid[i - 1]) / (s1 - s0);
        run.note += "survival falls below 0.5 at t = " + num(t_cross) + " s";
        crossed = true;
        break;
      }
    }
    if (!crossed) run.note += "survival stays above 0.5 over the horizon";
  };

  std::vector<std::thread> pool;
  for (std::size_t slot = 0; slot < runs.size(); ++slot)
    pool.emplace_back([&, slot] {
      try {
        run_target(slot);
      } catch (...) {
        failures[slot] = std::current_exception();
      }
    });
  for (auto& worker : pool) worker.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  RunArtifacts artifacts;
  artifacts.files.push_back(write_config_bundle(cfg, dir, "glass"));
  for (const auto& run : runs) {
    char name[64];
    std::snprintf(name, sizeof name, "glass_quench_%gK.csv", run.target_k);
    const std::string path = join_path(dir, name);
    write_csv(run.table, path);
    artifacts.files.push_back(path);
    artifacts.summary += run.note + "\n";
  }
  return artifacts;
}

RunArtifacts run_protein_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  require_two_tracked_basins(cfg, "protein");
  const std::string dir = ensure_out_dir(out_dir);
  const auto schedule = build_schedule(cfg.schedule);
  const auto model = build_model(cfg, schedule);
  const auto grid = build_grid(cfg.grid);
  const auto quad = quadrature_for(cfg, model);

  const RateFn& gain = model.exchange_rate(0, 1);
  const RateFn& loss = model.exchange_rate(1, 0);

  CsvTable rates;
  rates.columns = {"t_s", "T_K", "fold_rate_hz", "unfold_rate_hz", "intra_level0_hz",
                   "intra_level1_hz"};
  for (const double t : grid) {
    const double temp = schedule.temperature_at(t);
    const auto k = protein_rates(cfg.thermo, temp);
    rates.rows.push_back({t, temp, k.fold_hz, k.unfold_hz, model.profiles[0].level(0, t),
                          model.profiles[0].level(1, t)});
  }

  const auto closed = p1_closed_form(gain, loss, grid, 1.0, quad);
  const auto trotter = trotter_p1_series(model, grid, cfg.solver.trotter_steps_per_cell, 0);
  SurvivalOptions sopts;
  sopts.convention = convention_from(cfg.solver.eigenlevel, "solver");
  sopts.quadrature = quad;
  const auto survival = survival_probability(cfg.initial_ball, model, grid, sopts);

  CsvTable populations;
  populations.columns = {"t_s", "T_K", "p1_closed", "p1_trotter", "p2_closed", "survival"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    populations.rows.push_back({grid[i], schedule.temperature_at(grid[i]), closed.p1[i],
                                trotter[i], closed.p2[i], survival.survival[i]});

  // Frozen-temperature controls: the pure two-state relaxation the system
  // would follow if the rates were pinned at the ramp's endpoints.
  const double t_start = grid.front();
  const double t_end = grid.back();
  const auto frozen = [](double gain_hz, double loss_hz, double t) {
    const double total = gain_hz + loss_hz;
    const double stationary = gain_hz / total;
    return stationary + (1.0 - stationary) * std::exp(-total * t);
  };
  const double gain_start = gain(t_start), loss_start = loss(t_start);
  const double gain_end = gain(t_end), loss_end = loss(t_end);
  char col_start[48], col_end[48];
  std::snprintf(col_start, sizeof col_start, "p1_frozen_%gK", schedule.temperature_at(t_start));
  std::snprintf(col_end, sizeof col_end, "p1_frozen_%gK", schedule.temperature_at(t_end));
  CsvTable controls;
  controls.columns = {"t_s", col_start, col_end};
  for (const double t : grid)
    controls.rows.push_back(
        {t, frozen(gain_start, loss_start, t), frozen(gain_end, loss_end, t)});

  RunArtifacts artifacts;
  artifacts.files.push_back(write_config_bundle(cfg, dir, "protein"));
  for (const auto& [name, table] :
       {std::pair<const char*, const CsvTable&>{"protein_rates.csv", rates},
        {"protein_populations.csv", populations},
        {"protein_controls.csv", controls}}) {
    const std::string path = join_path(dir, name);
    write_csv(table, path);
    artifacts.files.push_back(path);
  }

  // Rate-crossing diagnostics: locate the sign change of k_f - k_u.
  double cross_t = -1.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto a = protein_rates(cfg.thermo, schedule.temperature_at(grid[i - 1]));
    const auto b = protein_rates(cfg.thermo, schedule.temperature_at(grid[i]));
    if ((a.fold_hz - a.unfold_hz) > 0.0 && (b.fold_hz - b.unfold_hz) <= 0.0) {
      double lo = grid[i - 1], hi = grid[i];
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto k = protein_rates(cfg.thermo, schedule.temperature_at(mid));
        (k.fold_hz - k.unfold_hz > 0.0 ? lo : hi) = mid;
      }
      cross_t = 0.5 * (lo + hi);
      break;
    }
  }
  if (cross_t >= 0.0)
    artifacts.summary += "fold/unfold rates cross at t = " + num(cross_t) + " s (T = " +
                         num(schedule.temperature_at(cross_t)) + " K)\n";
  else
    artifacts.summary += "fold/unfold rates do not cross on the grid\n";
  const auto min_it = std::min_element(closed.p1.begin(), closed.p1.end());
  artifacts.summary += "tracked population minimum " + num(*min_it) + " at t = " +
                       num(grid[static_cast<std::size_t>(min_it - closed.p1.begin())]) + " s\n";
  artifacts.summary += "survival at " + num(t_end) + " s = " + num(survival.survival.back()) +
                       "\n";
  return artifacts;
}

RunArtifacts run_oracle_compare(const ScenarioConfig& cfg, const std::string& out_dir) {
  const std::string dir = ensure_out_dir(out_dir);
  const auto schedule = runner_schedule(cfg);
  const auto model = build_model(cfg, schedule);
  const auto grid = build_grid(cfg.grid);
  const int n = cfg.oracle.depth;
  const auto convention = convention_from(cfg.oracle.eigenlevel, "oracle");
  const double horizon = grid.back();

  RunArtifacts artifacts;
  artifacts.files.push_back(write_config_bundle(cfg, dir, "oracle"));

  // 1. Frozen-time spectrum audit.
  const auto spectrum = spectral_match(model, n, 0.0, cfg.oracle.spectrum_rel_tol, convention);
  CsvTable eigen_table;
  eigen_table.columns = {"index", "predicted", "dense"};
  for (std::size_t i = 0; i < spectrum.dense_eigenvalues.size(); ++i)
    eigen_table.rows.push_back({static_cast<double>(i), spectrum.predicted_eigenvalues[i],
                                spectrum.dense_eigenvalues[i]});
  const std::string eigen_path = join_path(dir, "oracle_spectrum.csv");
  write_csv(eigen_table, eigen_path);
  artifacts.files.push_back(eigen_path);
  artifacts.summary += std::string("spectrum: ") + (spectrum.ok ? "ok" : "BREACH") +
                       " (max relative mismatch " + num(spectrum.max_rel_mismatch) +
                       ", tolerance " + num(cfg.oracle.spectrum_rel_tol) + ")\n";

  // 2. Trajectory audit: dense integration against the diagonal wavelet
  // evolution, compared as pointwise densities at every grid time.
  const double dt = auto_dense_dt(cfg, model, n, horizon);
  const auto mass0 = uniform_ball_mass(model, n, cfg.initial_ball);
  const auto dense = solve_dense_ode(mass0, model, n, grid, dt);
  const auto quad = quadrature_for(cfg, model);
  SpectralOptions sopts;
  sopts.convention = convention;
  sopts.quadrature = quad;
  MeanEvolver evolver = model.num_basins == 2
                            ? two_state_evolver(model, quad)
                            : make_rk4_mean_evolver(dt);
  const double leaf_volume = ball_volume(model.p, -n);
  const int dim = dense_dimension(model, n);
  double max_density_error = 0.0;
  SpectralState state = expand_ball_indicator(cfg.initial_ball, model);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) state = evolve_spectral(state, model, grid[i - 1], grid[i], evolver, sopts);
    for (int leaf = 0; leaf < dim; ++leaf) {
      const double predicted =
          reconstruct_density(state, model, dense_address(model, n, static_cast<std::size_t>(leaf)));
      const double actual = dense.states[i](leaf) / leaf_volume;
      max_density_error = std::max(max_density_error, std::abs(actual - predicted));
    }
  }
  const bool trajectory_ok = max_density_error <= cfg.oracle.trajectory_tol;
  artifacts.summary += std::string("trajectory: ") + (trajectory_ok ? "ok" : "BREACH") +
                       " (max density error " + num(max_density_error) + ", tolerance " +
                       num(cfg.oracle.trajectory_tol) + ")\n";

  // 3. Sampler audit: chi-square of the leaf counts against the dense
  // solution at half the horizon. Cells expected below 5 counts are pooled.
  const double t_half = 0.5 * horizon;
  const auto dense_half = solve_dense_ode(mass0, model, n, {0.0, t_half}, dt);
  McOptions mopts;
  mopts.paths = cfg.oracle.paths;
  mopts.seed = cfg.oracle.seed;
  mopts.threads = cfg.oracle.threads;
  const auto mc = mc_simulate(model, cfg.initial_ball, n, {t_half}, mopts);
  std::vector<std::pair<double, double>> cells;  // observed, expected
  double pool_obs = 0.0, pool_exp = 0.0;
  for (int leaf = 0; leaf < dim; ++leaf) {
    const double expected =
        std::max(0.0, dense_half.states.back()(leaf)) * static_cast<double>(mopts.paths);
    const double observed = static_cast<double>(mc.counts[0][static_cast<std::size_t>(leaf)]);
    if (expected < 5.0) {
      pool_obs += observed;
      pool_exp += expected;
    } else {
      cells.emplace_back(observed, expected);
    }
  }
  if (pool_exp > 0.0) {
    if (pool_exp >= 5.0 || cells.empty())
      cells.emplace_back(pool_obs, pool_exp);
    else {
      cells.back().first += pool_obs;
      cells.back().second += pool_exp;
    }
  }
  double statistic = 0.0;
  for (const auto& [obs, exp] : cells) statistic += (obs - exp) * (obs - exp) / exp;
  const int dof = static_cast<int>(cells.size()) - 1;
  double p_value = 1.0;
  bool chi_ok = true;
  if (dof >= 1) {
    p_value = chi_square_pvalue(statistic, dof);
    chi_ok = p_value >= cfg.oracle.chi_square_significance;
  }
  artifacts.summary += std::string("chi-square: ") + (chi_ok ? "ok" : "BREACH") + " (statistic " +
                       num(statistic) + ", dof " + std::to_string(dof) + ", p = " + num(p_value) +
                       ", significance " + num(cfg.oracle.chi_square_significance) + ")\n";

  Json report;
  report["version"] = version_string;
  report["scenario"] = cfg.scenario;
  report["depth"] = n;
  report["spectrum"] = {{"ok", spectrum.ok},
                        {"max_rel_mismatch", spectrum.max_rel_mismatch},
                        {"max_imag", spectrum.max_imag},
                        {"tolerance", cfg.oracle.spectrum_rel_tol}};
  report["trajectory"] = {{"ok", trajectory_ok},
                          {"max_density_error", max_density_error},
                          {"tolerance", cfg.oracle.trajectory_tol},
                          {"rk4_dt_s", dt}};
  report["chi_square"] = {{"ok", chi_ok},
                          {"statistic", statistic},
                          {"dof", dof},
                          {"p_value", p_value},
                          {"significance", cfg.oracle.chi_square_significance},
                          {"checkpoint_s", t_half},
                          {"paths", mopts.paths},
                          {"seed", mopts.seed}};
  const std::string report_path = join_path(dir, "oracle_report.json");
  write_text(report_path, report.dump(2) + "\n");
  artifacts.files.push_back(report_path);

  artifacts.exit_code = (spectrum.ok && trajectory_ok && chi_ok) ? 0 : 3;
  return artifacts;
}

RunArtifacts run_mc(const ScenarioConfig& cfg, const std::string& out_dir) {
  const std::string dir = ensure_out_dir(out_dir);
  const auto schedule = runner_schedule(cfg);
  const auto model = build_model(cfg, schedule);
  const auto grid = build_grid(cfg.grid);
  const int n = cfg.oracle.depth;

  std::vector<double> checkpoints(grid.begin() + 1, grid.end());
  McOptions mopts;
  mopts.paths = cfg.oracle.paths;
  mopts.seed = cfg.oracle.seed;
  mopts.threads = cfg.oracle.threads;
  const auto result = mc_simulate(model, cfg.initial_ball, n, checkpoints, mopts);

  const auto leaves = ipow(model.p, n);
  CsvTable occupancy;
  occupancy.columns = {"t_s", "ball_occupancy"};
  for (int basin = 0; basin < model.num_basins; ++basin)
    occupancy.columns.push_back("basin" + std::to_string(basin) + "_occupancy");
  CsvTable counts;
  counts.columns = {"t_s"};
  const int dim = dense_dimension(model, n);
  for (int leaf = 0; leaf < dim; ++leaf) {
    const auto x = dense_address(model, n, static_cast<std::size_t>(leaf));
    std::string name = "count_b" + std::to_string(x.basin) + "_";
    for (auto d : x.digits) name += static_cast<char>('0' + d);
    counts.columns.push_back(std::move(name));
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    std::vector<double> row{checkpoints[i],
                            mc_ball_occupancy(result, model, n, cfg.initial_ball, i)};
    for (int basin = 0; basin < model.num_basins; ++basin) {
      std::uint64_t total = 0;
      for (std::uint64_t leaf = 0; leaf < leaves; ++leaf)
        total += result.counts[i][static_cast<std::size_t>(basin) * leaves + leaf];
      row.push_back(static_cast<double>(total) / static_cast<double>(result.paths));
    }
    occupancy.rows.push_back(std::move(row));

    std::vector<double> count_row{checkpoints[i]};
    for (int leaf = 0; leaf < dim; ++leaf)
      count_row.push_back(static_cast<double>(result.counts[i][static_cast<std::size_t>(leaf)]));
    counts.rows.push_back(std::move(count_row));
  }

  RunArtifacts artifacts;
  artifacts.files.push_back(write_config_bundle(cfg, dir, "mc"));
  for (const auto& [name, table] :
       {std::pair<const char*, const CsvTable&>{"mc_occupancy.csv", occupancy},
        {"mc_counts.csv", counts}}) {
    const std::string path = join_path(dir, name);
    write_csv(table, path);
    artifacts.files.push_back(path);
  }
  artifacts.summary += num(static_cast<double>(result.paths)) + " paths at depth " +
                       std::to_string(n) + ", seed " + std::to_string(mopts.seed) +
                       ", thinning bound " + num(result.rate_bound_hz) + " Hz\n";
  return artifacts;
}

RunArtifacts run_custom(const ScenarioConfig& cfg, const std::string& out_dir) {
  const std::string dir = ensure_out_dir(out_dir);
  const auto schedule = runner_schedule(cfg);
  const auto model = build_model(cfg, schedule);
  const auto grid = build_grid(cfg.grid);
  const auto quad = quadrature_for(cfg, model);

  // Mean occupations by rk4, chained over the grid.
  double min_cell = grid.back();
  for (std::size_t i = 1; i < grid.size(); ++i) min_cell = std::min(min_cell, grid[i] - grid[i - 1]);
  const double dt = cfg.solver.rk4_dt_s > 0.0 ? cfg.solver.rk4_dt_s : min_cell / 64.0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.num_basins);
  u(cfg.initial_ball.basin) = 1.0;
  std::vector<Eigen::VectorXd> means{u};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    u = evolve_mean_rk4(u, model, grid[i - 1], grid[i], dt).states.back();
    means.push_back(u);
  }

  SurvivalOptions sopts;
  sopts.convention = convention_from(cfg.solver.eigenlevel, "solver");
  sopts.quadrature = quad;
  const auto survival = survival_probability(cfg.initial_ball, model, grid, sopts);

  CsvTable table;
  table.columns = {"t_s", "T_K"};
  for (int basin = 0; basin < model.num_basins; ++basin)
    table.columns.push_back("p_basin" + std::to_string(basin));
  table.columns.push_back("survival");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i], schedule.temperature_at(grid[i])};
    for (int basin = 0; basin < model.num_basins; ++basin) row.push_back(means[i](basin));
    row.push_back(survival.survival[i]);
    table.rows.push_back(std::move(row));
  }

  RunArtifacts artifacts;
  artifacts.files.push_back(write_config_bundle(cfg, dir, "custom"));
  const std::string path = join_path(dir, "custom_series.csv");
  write_csv(table, path);
  artifacts.files.push_back(path);
  artifacts.summary += "survival at " + num(grid.back()) + " s = " + num(survival.survival.back()) +
                       " (mean method " + survival.mean_method + ")\n";
  return artifacts;
}

}  // namespace ultrarelax
