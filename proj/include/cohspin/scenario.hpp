#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohspin/correspondence.hpp"
#include "cohspin/mixtures.hpp"

namespace cohspin {

/// Raised for any malformed config; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string axis;  // "dt_s", "twice_s" or "theta"
  std::vector<double> values;
};

/// Parsed scenario file. A pure initial state is stored as a one-component
/// ensemble with weight 1.
struct ScenarioConfig {
  int schema_version = 1;
  SpinLabel label;
  CoherentEnsemble initial;
  FieldSchedule schedule;
  double dt_s = 0.0;
  int sample_every = 1;
  double hbar = 1.0;
  double tolerance = 1e-6;
  std::vector<std::string> outputs = {"trajectory.csv", "report.json"};
  std::optional<SweepSpec> sweep;
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig parse_scenario_file(const std::string& path);

/// Input for the star subcommand: either angles or an explicit amplitude
/// list (which must be normalized within 1e-6).
struct StateSpec {
  SpinLabel label;
  Ket amplitudes;
};

StateSpec parse_state_spec(const nlohmann::json& j);
StateSpec parse_state_spec_file(const std::string& path);

/// Everything cmd_evolve needs to write its artifacts.
struct EvolveOutcome {
  std::vector<double> times;
  std::vector<Vector3> classical_direction;  // weighted sum of components
  std::vector<Vector3> quantum_direction;    // Tr(rho S)/(hbar s)
  CorrespondenceReport report;
};

EvolveOutcome run_evolve(const ScenarioConfig& cfg);

std::string trajectory_csv(const EvolveOutcome& outcome);
nlohmann::json report_json(const EvolveOutcome& outcome, double tolerance);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  double max_deviation = 0.0;
  double runtime_s = 0.0;
};

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// stars.csv body for a state given as amplitudes (theta,phi,x,y,z rows).
std::string stars_csv(const Ket& amplitudes, SpinLabel label);

}  // namespace cohspin
