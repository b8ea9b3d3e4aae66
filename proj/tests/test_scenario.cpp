#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cohspin/csv.hpp"
#include "cohspin/scenario.hpp"

using namespace cohspin;
using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;

json minimal_config() {
  return json{{"schema_version", 1},
              {"twice_s", 1},
              {"initial", {{"theta", kPi / 2}, {"phi", 0.0}}},
              {"gamma", 2.0 * kPi},
              {"segments",
               json::array({{{"duration_s", 1.0},
                             {"B_tesla", json::array({0.0, 0.0, 1.0})}}})},
              {"dt_s", 1e-3}};
}

bool throws_mentioning(const json& j, const std::string& needle) {
  try {
    parse_scenario(j);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}
}  // namespace

TEST_CASE("minimal scenario parses with documented defaults") {
  const ScenarioConfig cfg = parse_scenario(minimal_config());
  CHECK(cfg.label.twice_s == 1);
  CHECK(cfg.sample_every == 1);
  CHECK(cfg.hbar == 1.0);
  CHECK(cfg.tolerance == 1e-6);
  CHECK(cfg.outputs == std::vector<std::string>{"trajectory.csv", "report.json"});
  CHECK(!cfg.sweep.has_value());
  REQUIRE(cfg.initial.components.size() == 1);
  CHECK(cfg.initial.components[0].weight == 1.0);
  CHECK(cfg.schedule.gamma == 2.0 * kPi);
  REQUIRE(cfg.schedule.segments.size() == 1);
  CHECK(cfg.schedule.segments[0].field == Vector3(0.0, 0.0, 1.0));
}

TEST_CASE("config rejections name the offending field") {
  SUBCASE("missing schema_version") {
    json j = minimal_config();
    j.erase("schema_version");
    CHECK(throws_mentioning(j, "schema_version"));
  }
  SUBCASE("unsupported schema_version") {
    json j = minimal_config();
    j["schema_version"] = 2;
    CHECK(throws_mentioning(j, "schema_version"));
  }
  SUBCASE("unknown top-level field suggests the nearest known one") {
    json j = minimal_config();
    j["dt"] = 0.1;
    CHECK(throws_mentioning(j, "did you mean 'dt_s'?"));
  }
  SUBCASE("unknown field with no close match gets no suggestion") {
    json j = minimal_config();
    j["frobnicate"] = 1;
    CHECK(throws_mentioning(j, "unknown field 'frobnicate'"));
    CHECK(!throws_mentioning(j, "did you mean"));
  }
  SUBCASE("twice_s must be a positive integer") {
    json j = minimal_config();
    j["twice_s"] = 0;
    CHECK(throws_mentioning(j, "twice_s"));
    j["twice_s"] = -2;
    CHECK(throws_mentioning(j, "twice_s"));
    j["twice_s"] = 1.5;
    CHECK(throws_mentioning(j, "twice_s"));
  }
  SUBCASE("theta outside [0, pi]") {
    json j = minimal_config();
    j["initial"]["theta"] = 3.5;
    CHECK(throws_mentioning(j, "theta"));
  }
  SUBCASE("phi outside [0, 2pi)") {
    json j = minimal_config();
    j["initial"]["phi"] = -0.1;
    CHECK(throws_mentioning(j, "phi"));
  }
  SUBCASE("dt_s must be positive") {
    json j = minimal_config();
    j["dt_s"] = 0.0;
    CHECK(throws_mentioning(j, "dt_s"));
  }
  SUBCASE("segments must be non-empty") {
    json j = minimal_config();
    j["segments"] = json::array();
    CHECK(throws_mentioning(j, "segments"));
  }
  SUBCASE("segment duration must be positive") {
    json j = minimal_config();
    j["segments"][0]["duration_s"] = -1.0;
    CHECK(throws_mentioning(j, "duration_s"));
  }
  SUBCASE("field vectors need three components") {
    json j = minimal_config();
    j["segments"][0]["B_tesla"] = json::array({0.0, 1.0});
    CHECK(throws_mentioning(j, "B_tesla"));
  }
  SUBCASE("ensemble weights must sum to one") {
    json j = minimal_config();
    j["initial"] = {{"components",
                     json::array({{{"weight", 0.5}, {"theta", 0.1}, {"phi", 0.0}},
                                  {{"weight", 0.4}, {"theta", 1.0}, {"phi", 0.0}}})}};
    CHECK(throws_mentioning(j, "weight"));
  }
  SUBCASE("unknown output name") {
    json j = minimal_config();
    j["outputs"] = json::array({"movie.gif"});
    CHECK(throws_mentioning(j, "outputs"));
  }
  SUBCASE("gamma must be a number") {
    json j = minimal_config();
    j["gamma"] = "fast";
    CHECK(throws_mentioning(j, "gamma"));
  }
}

TEST_CASE("sweep specs are validated") {
  json j = minimal_config();
  SUBCASE("axis name") {
    j["sweep"] = {{"axis", "voltage"}, {"values", json::array({1.0})}};
    CHECK(throws_mentioning(j, "axis"));
  }
  SUBCASE("empty values") {
    j["sweep"] = {{"axis", "dt_s"}, {"values", json::array()}};
    CHECK(throws_mentioning(j, "values"));
  }
  SUBCASE("twice_s sweep values must be positive integers") {
    j["sweep"] = {{"axis", "twice_s"}, {"values", json::array({1.5})}};
    CHECK(throws_mentioning(j, "values"));
  }
  SUBCASE("theta sweeps need a single-component initial state") {
    j["initial"] = {{"components",
                     json::array({{{"weight", 0.5}, {"theta", 0.1}, {"phi", 0.0}},
                                  {{"weight", 0.5}, {"theta", 1.0}, {"phi", 0.0}}})}};
    j["sweep"] = {{"axis", "theta"}, {"values", json::array({0.5})}};
    CHECK(throws_mentioning(j, "theta"));
  }
  SUBCASE("a valid sweep parses") {
    j["sweep"] = {{"axis", "dt_s"},
                  {"values", json::array({0.01, 0.005})}};
    const ScenarioConfig cfg = parse_scenario(j);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->axis == "dt_s");
    CHECK(cfg.sweep->values == std::vector<double>{0.01, 0.005});
  }
}

TEST_CASE("zero gamma evolves nothing and still passes") {
  json j = minimal_config();
  j["gamma"] = 0.0;
  const ScenarioConfig cfg = parse_scenario(j);
  const EvolveOutcome outcome = run_evolve(cfg);
  REQUIRE(!outcome.times.empty());
  for (const Vector3& n : outcome.classical_direction)
    CHECK((n - outcome.classical_direction.front()).norm() <= 1e-15);
  CHECK(outcome.report.max_direction_deviation <= 1e-12);
}

TEST_CASE("trajectory csv has the documented header and plain numbers") {
  json j = minimal_config();
  j["dt_s"] = 0.25;
  const EvolveOutcome outcome = run_evolve(parse_scenario(j));
  const std::string csv = trajectory_csv(outcome);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "t,nx,ny,nz,ex,ey,ez,deviation");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find("nan") == std::string::npos);
    CHECK(line.find("inf") == std::string::npos);
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == outcome.times.size());
  CHECK(csv.find("\r") == std::string::npos);
  CHECK(csv.back() == '\n');
  // first row is the initial state: t=0, nx=1 (theta=pi/2, phi=0)
  CHECK(csv.substr(csv.find('\n') + 1, 4) == "0,1,");
}

TEST_CASE("report json carries the verification summary") {
  const EvolveOutcome outcome = run_evolve(parse_scenario(minimal_config()));
  const json report = report_json(outcome, 1e-6);
  CHECK(report.at("schema_version") == 1);
  CHECK(report.at("sample_count") == outcome.times.size());
  CHECK(report.at("max_direction_deviation").is_number());
  CHECK(report.at("ehrenfest_evaluated") == true);
  CHECK(report.at("max_ehrenfest_residual").is_number());
  CHECK(report.at("round_trip_residual").is_number());
  CHECK(report.at("tolerance") == 1e-6);
  CHECK(report.at("pass") == true);
}

TEST_CASE("report marks failure when the tolerance is absurd") {
  const EvolveOutcome outcome = run_evolve(parse_scenario(minimal_config()));
  const json report = report_json(outcome, 1e-30);
  CHECK(report.at("pass") == false);
}

TEST_CASE("dt sweep shows fourth-order convergence in order") {
  json j = minimal_config();
  j["segments"][0]["duration_s"] = 2.0;
  j["initial"] = {{"theta", 1.2}, {"phi", 0.4}};
  j["segments"][0]["B_tesla"] = json::array({0.3, -0.5, 0.8});
  j["sweep"] = {{"axis", "dt_s"},
                {"values", json::array({0.01, 0.005, 0.0025})}};
  const ScenarioConfig cfg = parse_scenario(j);
  const std::vector<SweepRow> rows = run_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == 0.01);
  CHECK(rows[1].value == 0.005);
  CHECK(rows[2].value == 0.0025);
  for (const SweepRow& row : rows) CHECK(row.axis == "dt_s");
  const double r01 = rows[0].max_deviation / rows[1].max_deviation;
  const double r12 = rows[1].max_deviation / rows[2].max_deviation;
  CHECK(r01 >= 14.0);
  CHECK(r01 <= 18.0);
  CHECK(r12 >= 14.0);
  CHECK(r12 <= 18.0);

  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("axis,value,max_deviation,runtime_s\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("spin sweeps stay within tolerance at every size") {
  json j = minimal_config();
  j["initial"] = {{"theta", 1.2}, {"phi", 0.4}};
  j["sweep"] = {{"axis", "twice_s"},
                {"values", json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})}};
  const std::vector<SweepRow> rows = run_sweep(parse_scenario(j));
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].value == static_cast<double>(i + 1));
    CHECK(rows[i].max_deviation <= 1e-6);
  }
}

TEST_CASE("theta sweeps run in input order, not sorted") {
  json j = minimal_config();
  j["sweep"] = {{"axis", "theta"},
                {"values", json::array({2.0, 0.5, 1.5})}};
  const std::vector<SweepRow> rows = run_sweep(parse_scenario(j));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == 2.0);
  CHECK(rows[1].value == 0.5);
  CHECK(rows[2].value == 1.5);
  for (const SweepRow& row : rows) CHECK(row.max_deviation <= 1e-6);
}

TEST_CASE("state specs accept angles or amplitudes but not both") {
  SUBCASE("angles") {
    const StateSpec spec = parse_state_spec(
        {{"schema_version", 1}, {"twice_s", 2}, {"theta", 0.0}, {"phi", 0.0}});
    CHECK(spec.label.twice_s == 2);
    CHECK(std::abs(spec.amplitudes(0) - 1.0) <= 1e-15);
  }
  SUBCASE("amplitudes") {
    const StateSpec spec = parse_state_spec(
        {{"schema_version", 1},
         {"twice_s", 1},
         {"amplitudes", json::array({json::array({0.0, 0.0}),
                                     json::array({1.0, 0.0})})}});
    CHECK(std::abs(spec.amplitudes(1) - 1.0) <= 1e-15);
  }
  SUBCASE("both is an error") {
    CHECK_THROWS_AS(
        parse_state_spec({{"schema_version", 1},
                          {"twice_s", 1},
                          {"theta", 0.0},
                          {"phi", 0.0},
                          {"amplitudes", json::array({json::array({1.0, 0.0}),
                                                      json::array({0.0, 0.0})})}}),
        ConfigError);
  }
  SUBCASE("wrong amplitude count") {
    CHECK_THROWS_AS(
        parse_state_spec({{"schema_version", 1},
                          {"twice_s", 2},
                          {"amplitudes", json::array({json::array({1.0, 0.0}),
                                                      json::array({0.0, 0.0})})}}),
        ConfigError);
  }
  SUBCASE("unnormalized amplitudes") {
    CHECK_THROWS_AS(
        parse_state_spec({{"schema_version", 1},
                          {"twice_s", 1},
                          {"amplitudes", json::array({json::array({0.5, 0.0}),
                                                      json::array({0.5, 0.0})})}}),
        ConfigError);
  }
}

TEST_CASE("stars csv lists one row per star sorted by angle") {
  const SpinLabel label = spin(2);
  Ket up(3);
  up << 1.0, 0.0, 0.0;
  const std::string csv = stars_csv(up, label);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "theta,phi,x,y,z");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line == "0,0,0,0,1");  // both stars at the north pole
  }
  CHECK(rows == 2);
}

TEST_CASE("doubles render shortest-round-trip without negative zero") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-3) == "0.001");
  const double awkward = 0.30000000000000004;
  CHECK(std::stod(format_double(awkward)) == awkward);
}

TEST_CASE("parse_scenario_file reports unreadable paths") {
  CHECK_THROWS_AS(parse_scenario_file("/nonexistent/config.json"), ConfigError);
}
