#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cohspin/csv.hpp"
#include "cohspin/scenario.hpp"
#include "cohspin/verification.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kToleranceFailure = 1;
constexpr int kUsageError = 2;

bool write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  out << body;
  out.close();
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

bool ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << dir
              << "': " << ec.message() << "\n";
    return false;
  }
  return true;
}

int cmd_evolve(const std::string& config_path, const std::string& out_dir,
               const double* tolerance_override) {
  cohspin::ScenarioConfig cfg;
  try {
    cfg = cohspin::parse_scenario_file(config_path);
  } catch (const cohspin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  const double tolerance =
      tolerance_override ? *tolerance_override : cfg.tolerance;
  const cohspin::EvolveOutcome outcome = cohspin::run_evolve(cfg);

  if (!ensure_out_dir(out_dir)) return kUsageError;
  const std::filesystem::path base(out_dir);
  for (const std::string& name : cfg.outputs) {
    const std::string body =
        name == "trajectory.csv"
            ? cohspin::trajectory_csv(outcome)
            : cohspin::report_json(outcome, tolerance).dump(2) + "\n";
    if (!write_file(base / name, body)) return kUsageError;
  }

  const double deviation = outcome.report.max_direction_deviation;
  std::cout << "max direction deviation " << cohspin::format_double(deviation)
            << " (tolerance " << cohspin::format_double(tolerance) << ")\n";
  if (deviation <= tolerance) return kOk;
  std::cerr << "tolerance exceeded: max deviation "
            << cohspin::format_double(deviation) << " > "
            << cohspin::format_double(tolerance) << "\n";
  return kToleranceFailure;
}

int cmd_verify(int max_twice_s, std::uint64_t seed, bool flip_sy) {
  cohspin::OperatorFactory factory;
  if (flip_sy)
    factory = [](cohspin::SpinLabel label) {
      cohspin::OperatorTriple ops = cohspin::build_spin_operators(label);
      ops.sy = -ops.sy;
      return ops;
    };

  const cohspin::VerificationReport report =
      cohspin::run_verification(max_twice_s, seed, factory);
  std::cout << cohspin::verification_json(report).dump(2) << "\n";
  if (report.pass) return kOk;

  for (const cohspin::IdentityResult& identity : report.identities)
    if (!identity.pass) {
      std::cerr << "identity violated: " << identity.name
                << " (worst residual "
                << cohspin::format_double(identity.worst_residual) << " > "
                << cohspin::format_double(identity.tolerance) << " at "
                << identity.worst_input << ")\n";
      break;
    }
  return kToleranceFailure;
}

int cmd_stars(const std::string& config_path, const std::string& out_dir) {
  cohspin::StateSpec spec;
  try {
    spec = cohspin::parse_state_spec_file(config_path);
  } catch (const cohspin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  const std::string body = cohspin::stars_csv(spec.amplitudes, spec.label);
  if (!ensure_out_dir(out_dir)) return kUsageError;
  if (!write_file(std::filesystem::path(out_dir) / "stars.csv", body))
    return kUsageError;
  std::cout << "wrote stars.csv (" << spec.label.twice_s << " stars)\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const double* tolerance_override) {
  cohspin::ScenarioConfig cfg;
  std::vector<cohspin::SweepRow> rows;
  try {
    cfg = cohspin::parse_scenario_file(config_path);
    rows = cohspin::run_sweep(cfg);
  } catch (const cohspin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  if (!ensure_out_dir(out_dir)) return kUsageError;
  if (!write_file(std::filesystem::path(out_dir) / "sweep.csv",
                  cohspin::sweep_csv(rows)))
    return kUsageError;

  const double tolerance =
      tolerance_override ? *tolerance_override : cfg.tolerance;
  double worst = 0.0;
  for (const cohspin::SweepRow& row : rows)
    worst = std::max(worst, row.max_deviation);
  std::cout << "wrote sweep.csv (" << rows.size() << " points, worst deviation "
            << cohspin::format_double(worst) << ")\n";
  if (worst <= tolerance) return kOk;
  std::cerr << "tolerance exceeded: worst sweep deviation "
            << cohspin::format_double(worst) << " > "
            << cohspin::format_double(tolerance) << "\n";
  return kToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cohspin: classical spin precession vs quantum unitary evolution on "
      "the coherent-state manifold"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  double tolerance = 0.0;
  bool have_tolerance = false;
  int max_twice_s = 12;
  std::uint64_t seed = 42;
  bool flip_sy = false;

  CLI::App* evolve = app.add_subcommand(
      "evolve", "integrate a scenario on both sides and compare");
  evolve->add_option("--config", config_path, "scenario JSON file")
      ->required();
  evolve->add_option("--out", out_dir, "output directory (default .)");
  evolve->add_option("--tolerance", tolerance,
                     "override the config tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { have_tolerance = true; });

  CLI::App* verify = app.add_subcommand(
      "verify", "run the operator-identity suite over random inputs");
  verify->add_option("--max-twice-s", max_twice_s, "largest 2s to test")
      ->check(CLI::Range(1, 1000));
  verify->add_option("--seed", seed, "random seed");
  verify
      ->add_flag("--flip-sy-fixture", flip_sy,
                 "test fixture: negate S_y to force an identity violation")
      ->group("");  // hidden from help

  CLI::App* stars = app.add_subcommand(
      "stars", "write the star representation of a pure state");
  stars->add_option("--config", config_path, "state JSON file")->required();
  stars->add_option("--out", out_dir, "output directory (default .)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a scenario across a parameter axis");
  sweep->add_option("--config", config_path, "scenario JSON file with a sweep")
      ->required();
  sweep->add_option("--out", out_dir, "output directory (default .)");
  sweep->add_option("--tolerance", tolerance, "override the config tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { have_tolerance = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const double* tol_override = have_tolerance ? &tolerance : nullptr;
  try {
    if (evolve->parsed()) return cmd_evolve(config_path, out_dir, tol_override);
    if (verify->parsed()) return cmd_verify(max_twice_s, seed, flip_sy);
    if (stars->parsed()) return cmd_stars(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, tol_override);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
