#include "cohspin/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "cohspin/csv.hpp"

namespace cohspin {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      const int next = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = row[j];
      row[j] = next;
    }
  }
  return row[b.size()];
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> known) {
  if (!j.is_object()) fail(where, "must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) != known.end())
      continue;
    std::string message = "unknown field '" + key + "'";
    const char* best = nullptr;
    int best_distance = 3;  // only suggest close names
    for (const char* candidate : known) {
      const int d = edit_distance(key, candidate);
      if (d < best_distance) {
        best_distance = d;
        best = candidate;
      }
    }
    if (best) message += " (did you mean '" + std::string(best) + "'?)";
    fail(where, message);
  }
}

const json& require(const json& j, const std::string& where,
                    const std::string& key) {
  if (!j.contains(key)) fail(where + "." + key, "required field is missing");
  return j.at(key);
}

double require_number(const json& j, const std::string& where,
                      const std::string& key) {
  const json& v = require(j, where, key);
  if (!v.is_number()) fail(where + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
  return x;
}

double optional_number(const json& j, const std::string& where,
                       const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return require_number(j, where, key);
}

int require_int(const json& j, const std::string& where,
                const std::string& key) {
  const json& v = require(j, where, key);
  if (!v.is_number_integer()) fail(where + "." + key, "must be an integer");
  return v.get<int>();
}

double checked_theta(double theta, const std::string& where) {
  if (!(theta >= 0.0 && theta <= kPi)) fail(where, "must lie in [0, pi]");
  return theta;
}

double checked_phi(double phi, const std::string& where) {
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) fail(where, "must lie in [0, 2pi)");
  return phi;
}

CoherentEnsemble parse_initial(const json& j, SpinLabel label) {
  const std::string where = "initial";
  CoherentEnsemble ensemble;
  ensemble.label = label;

  if (!j.is_object()) fail(where, "must be an object");
  if (j.contains("components")) {
    reject_unknown(j, where, {"components"});
    const json& list = j.at("components");
    if (!list.is_array() || list.empty())
      fail(where + ".components", "must be a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string item = where + ".components[" + std::to_string(i) + "]";
      reject_unknown(list[i], item, {"weight", "theta", "phi"});
      WeightedDirection wd;
      wd.weight = require_number(list[i], item, "weight");
      wd.angles.theta =
          checked_theta(require_number(list[i], item, "theta"), item + ".theta");
      wd.angles.phi =
          checked_phi(require_number(list[i], item, "phi"), item + ".phi");
      ensemble.components.push_back(wd);
    }
  } else {
    reject_unknown(j, where, {"theta", "phi"});
    WeightedDirection wd;
    wd.weight = 1.0;
    wd.angles.theta =
        checked_theta(require_number(j, where, "theta"), where + ".theta");
    wd.angles.phi =
        checked_phi(require_number(j, where, "phi"), where + ".phi");
    ensemble.components.push_back(wd);
  }

  try {
    validate_ensemble(ensemble);
  } catch (const std::invalid_argument& e) {
    fail(where + ".components", std::string(e.what()) + " (check the weight values)");
  }
  return ensemble;
}

FieldSchedule parse_schedule(const json& j, double gamma) {
  FieldSchedule schedule;
  schedule.gamma = gamma;
  if (!j.is_array() || j.empty())
    fail("segments", "must be a non-empty list");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string item = "segments[" + std::to_string(i) + "]";
    reject_unknown(j[i], item, {"duration_s", "B_tesla"});
    FieldSegment seg;
    seg.duration = require_number(j[i], item, "duration_s");
    if (!(seg.duration > 0.0)) fail(item + ".duration_s", "must be positive");
    const json& b = require(j[i], item, "B_tesla");
    if (!b.is_array() || b.size() != 3)
      fail(item + ".B_tesla", "must be a list of 3 numbers");
    for (int k = 0; k < 3; ++k) {
      if (!b[k].is_number()) fail(item + ".B_tesla", "must be a list of 3 numbers");
      seg.field(k) = b[k].get<double>();
      if (!std::isfinite(seg.field(k))) fail(item + ".B_tesla", "must be finite");
    }
    schedule.segments.push_back(seg);
  }
  return schedule;
}

SweepSpec parse_sweep(const json& j, const ScenarioConfig& cfg) {
  const std::string where = "sweep";
  reject_unknown(j, where, {"axis", "values"});
  SweepSpec sweep;
  const json& axis = require(j, where, "axis");
  if (!axis.is_string()) fail(where + ".axis", "must be a string");
  sweep.axis = axis.get<std::string>();
  if (sweep.axis != "dt_s" && sweep.axis != "twice_s" && sweep.axis != "theta")
    fail(where + ".axis", "must be one of 'dt_s', 'twice_s', 'theta'");

  const json& values = require(j, where, "values");
  if (!values.is_array()) fail(where + ".values", "must be a list of numbers");
  if (values.empty()) fail(where + ".values", "must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string item = where + ".values[" + std::to_string(i) + "]";
    if (!values[i].is_number()) fail(item, "must be a number");
    const double v = values[i].get<double>();
    if (!std::isfinite(v)) fail(item, "must be finite");
    if (sweep.axis == "dt_s" && !(v > 0.0)) fail(item, "must be positive");
    if (sweep.axis == "twice_s" && (v < 1.0 || std::round(v) != v))
      fail(item, "must be an integer >= 1");
    if (sweep.axis == "theta") checked_theta(v, item);
    sweep.values.push_back(v);
  }

  if (sweep.axis == "theta" && cfg.initial.components.size() != 1)
    fail(where, "sweeping theta requires a single-direction initial state");
  return sweep;
}

}  // namespace

ScenarioConfig parse_scenario(const nlohmann::json& j) {
  reject_unknown(j, "config",
                 {"schema_version", "twice_s", "initial", "gamma", "segments",
                  "dt_s", "sample_every", "hbar", "tolerance", "outputs",
                  "sweep"});

  ScenarioConfig cfg;
  cfg.schema_version = require_int(j, "config", "schema_version");
  if (cfg.schema_version != 1)
    fail("schema_version", "unsupported version (expected 1)");

  const int twice_s = require_int(j, "config", "twice_s");
  if (twice_s < 1) fail("twice_s", "must be at least 1 (spin one-half)");
  cfg.label = spin(twice_s);

  cfg.initial = parse_initial(require(j, "config", "initial"), cfg.label);

  const double gamma = require_number(j, "config", "gamma");
  cfg.schedule = parse_schedule(require(j, "config", "segments"), gamma);

  cfg.dt_s = require_number(j, "config", "dt_s");
  if (!(cfg.dt_s > 0.0)) fail("dt_s", "must be positive");

  if (j.contains("sample_every")) {
    cfg.sample_every = require_int(j, "config", "sample_every");
    if (cfg.sample_every < 1) fail("sample_every", "must be at least 1");
  }

  cfg.hbar = optional_number(j, "config", "hbar", 1.0);
  if (!(cfg.hbar > 0.0)) fail("hbar", "must be positive");

  cfg.tolerance = optional_number(j, "config", "tolerance", 1e-6);
  if (!(cfg.tolerance > 0.0)) fail("tolerance", "must be positive");

  if (j.contains("outputs")) {
    const json& outputs = j.at("outputs");
    if (!outputs.is_array()) fail("outputs", "must be a list of file names");
    cfg.outputs.clear();
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (!outputs[i].is_string())
        fail("outputs[" + std::to_string(i) + "]", "must be a string");
      const std::string name = outputs[i].get<std::string>();
      if (name != "trajectory.csv" && name != "report.json")
        fail("outputs[" + std::to_string(i) + "]",
             "must be 'trajectory.csv' or 'report.json'");
      cfg.outputs.push_back(name);
    }
  }

  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"), cfg);
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

StateSpec parse_state_spec(const nlohmann::json& j) {
  reject_unknown(j, "state",
                 {"schema_version", "twice_s", "theta", "phi", "amplitudes"});

  const int version = require_int(j, "state", "schema_version");
  if (version != 1) fail("schema_version", "unsupported version (expected 1)");

  const int twice_s = require_int(j, "state", "twice_s");
  if (twice_s < 0) fail("twice_s", "must be non-negative");
  StateSpec spec;
  spec.label = spin(twice_s);

  if (j.contains("amplitudes")) {
    if (j.contains("theta") || j.contains("phi"))
      fail("state", "give either angles or amplitudes, not both");
    const json& amps = j.at("amplitudes");
    if (!amps.is_array() ||
        amps.size() != static_cast<std::size_t>(spec.label.dimension()))
      fail("amplitudes", "must be a list of 2s+1 [re, im] pairs");
    spec.amplitudes = Ket(spec.label.dimension());
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const std::string item = "amplitudes[" + std::to_string(i) + "]";
      if (!amps[i].is_array() || amps[i].size() != 2 ||
          !amps[i][0].is_number() || !amps[i][1].is_number())
        fail(item, "must be an [re, im] pair");
      spec.amplitudes(static_cast<Eigen::Index>(i)) =
          Complex(amps[i][0].get<double>(), amps[i][1].get<double>());
    }
    if (std::abs(spec.amplitudes.norm() - 1.0) > 1e-6)
      fail("amplitudes", "must be normalized (unit 2-norm within 1e-6)");
    spec.amplitudes /= spec.amplitudes.norm();
  } else {
    const double theta =
        checked_theta(require_number(j, "state", "theta"), "state.theta");
    const double phi =
        checked_phi(require_number(j, "state", "phi"), "state.phi");
    spec.amplitudes =
        ket_from_angles(spec.label, DirectionAngles{theta, phi}).amplitudes;
  }
  return spec;
}

StateSpec parse_state_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("state is not valid JSON: " + std::string(e.what()));
  }
  return parse_state_spec(j);
}

EvolveOutcome run_evolve(const ScenarioConfig& cfg) {
  validate_ensemble(cfg.initial);
  validate_schedule(cfg.schedule);

  const OperatorTriple ops = build_spin_operators(cfg.label);

  // classical side: every component precesses independently; the comparable
  // classical object for a mixture is the weighted sum of directions
  std::vector<Trajectory> classical_parts;
  classical_parts.reserve(cfg.initial.components.size());
  for (const WeightedDirection& wd : cfg.initial.components)
    classical_parts.push_back(integrate_classical(
        ClassicalState{wd.angles.unit()}, cfg.schedule, cfg.dt_s,
        cfg.sample_every));

  Trajectory classical;
  classical.samples.reserve(classical_parts.front().samples.size());
  for (std::size_t i = 0; i < classical_parts.front().samples.size(); ++i) {
    Vector3 n = Vector3::Zero();
    for (std::size_t c = 0; c < classical_parts.size(); ++c)
      n += cfg.initial.components[c].weight *
           classical_parts[c].samples[i].classical->n;
    classical.samples.push_back(
        {classical_parts.front().samples[i].t, ClassicalState{n}, std::nullopt,
         classical_parts.front().samples[i].segment_boundary});
  }

  const Trajectory quantum =
      evolve_density(QuantumState{mix(cfg.initial, ops)}, cfg.schedule,
                     cfg.dt_s, cfg.sample_every, ops);

  EvolveOutcome outcome;
  outcome.report =
      verify_trajectory_correspondence(classical, quantum, cfg.label, ops);
  try {
    outcome.report.max_ehrenfest_residual =
        ehrenfest_residual(quantum, cfg.schedule, ops);
    outcome.report.ehrenfest_evaluated = true;
  } catch (const std::invalid_argument&) {
    outcome.report.ehrenfest_evaluated = false;  // too few interior samples
  }

  outcome.times.reserve(quantum.samples.size());
  outcome.classical_direction.reserve(quantum.samples.size());
  outcome.quantum_direction.reserve(quantum.samples.size());
  for (std::size_t i = 0; i < quantum.samples.size(); ++i) {
    outcome.times.push_back(quantum.samples[i].t);
    outcome.classical_direction.push_back(classical.samples[i].classical->n);
    outcome.quantum_direction.push_back(
        expectation_spin(quantum.samples[i].quantum->rho, ops) /
        cfg.label.s());
  }
  return outcome;
}

std::string trajectory_csv(const EvolveOutcome& outcome) {
  std::string out = "t,nx,ny,nz,ex,ey,ez,deviation\n";
  for (std::size_t i = 0; i < outcome.times.size(); ++i) {
    const Vector3& n = outcome.classical_direction[i];
    const Vector3& e = outcome.quantum_direction[i];
    out += format_double(outcome.times[i]);
    for (int k = 0; k < 3; ++k) out += "," + format_double(n(k));
    for (int k = 0; k < 3; ++k) out += "," + format_double(e(k));
    out += "," + format_double(outcome.report.per_sample_deviation[i]);
    out += "\n";
  }
  return out;
}

nlohmann::json report_json(const EvolveOutcome& outcome, double tolerance) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["sample_count"] = outcome.times.size();
  j["max_direction_deviation"] = outcome.report.max_direction_deviation;
  j["ehrenfest_evaluated"] = outcome.report.ehrenfest_evaluated;
  if (outcome.report.ehrenfest_evaluated)
    j["max_ehrenfest_residual"] = outcome.report.max_ehrenfest_residual;
  else
    j["max_ehrenfest_residual"] = nullptr;
  j["round_trip_residual"] = outcome.report.round_trip_residual;
  j["tolerance"] = tolerance;
  j["pass"] = outcome.report.max_direction_deviation <= tolerance;
  return j;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: required field is missing");

  std::vector<SweepRow> rows;
  rows.reserve(cfg.sweep->values.size());
  for (const double value : cfg.sweep->values) {
    ScenarioConfig point = cfg;
    point.sweep.reset();
    if (cfg.sweep->axis == "dt_s") {
      point.dt_s = value;
    } else if (cfg.sweep->axis == "twice_s") {
      point.label = spin(static_cast<int>(std::lround(value)));
      point.initial.label = point.label;
    } else {  // theta
      point.initial.components.front().angles.theta = value;
    }

    const auto start = std::chrono::steady_clock::now();
    const EvolveOutcome outcome = run_evolve(point);
    const auto stop = std::chrono::steady_clock::now();

    SweepRow row;
    row.axis = cfg.sweep->axis;
    row.value = value;
    row.max_deviation = outcome.report.max_direction_deviation;
    row.runtime_s = std::chrono::duration<double>(stop - start).count();
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "axis,value,max_deviation,runtime_s\n";
  for (const SweepRow& row : rows) {
    out += row.axis;
    out += "," + format_double(row.value);
    out += "," + format_double(row.max_deviation);
    out += "," + format_double(row.runtime_s);
    out += "\n";
  }
  return out;
}

std::string stars_csv(const Ket& amplitudes, SpinLabel label) {
  const MajoranaConstellation constellation =
      majorana_constellation(amplitudes, label);
  std::string out = "theta,phi,x,y,z\n";
  for (const Vector3& star : constellation.stars) {
    const DirectionAngles angles = angles_from_unit(star);
    out += format_double(angles.theta);
    out += "," + format_double(angles.phi);
    for (int k = 0; k < 3; ++k) out += "," + format_double(star(k));
    out += "\n";
  }
  return out;
}

}  // namespace cohspin
