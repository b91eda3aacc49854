#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrelent/harness.hpp"
#include "qrelent/scenario.hpp"
#include "qrelent/suite.hpp"

namespace fs = std::filesystem;
using namespace qrelent;

namespace {

struct ScenarioArgs {
  std::string scenario;
  std::string out = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<long> cap;
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("--scenario", args.scenario, "Scenario file (YAML, schema qrelent/1)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output directory for the CSV report");
  cmd->add_option("--seed-override", args.seed_override, "Replace the scenario seed");
  cmd->add_option("--cap", args.cap, "Largest Hilbert-space dimension d^N allowed")
      ->check(CLI::PositiveNumber);
}

bool kind_matches(const std::string& command, ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Simulate: return command == "simulate";
    case ScenarioKind::VerifyTheorem3:
    case ScenarioKind::VerifyCancellation:
    case ScenarioKind::VerifyIdentities: return command == "verify";
    case ScenarioKind::Enumerate: return command == "enumerate";
    case ScenarioKind::SemiclassicalBounds:
    case ScenarioKind::QuantizationChecks: return command == "semiclassical";
  }
  return false;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
}

int run_command(const std::string& command, const ScenarioArgs& args) {
  Scenario s;
  try {
    s = load_scenario(args.scenario);
    if (args.seed_override) s.seed = *args.seed_override;
    if (args.cap) s.cap = *args.cap;
    validate_scenario(s);
  } catch (const std::exception& e) {
    std::cerr << "qrelent: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!kind_matches(command, s.kind)) {
    std::cerr << "qrelent: scenario kind '" << to_string(s.kind) << "' does not belong to '"
              << command << "'\n";
    return kExitUsage;
  }
  const RunResult r = run_scenario(s);
  const fs::path target = fs::path(args.out) / (s.output.empty() ? s.id + ".csv" : s.output);
  try {
    write_file(target, r.csv);
  } catch (const std::exception& e) {
    std::cerr << "qrelent: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!r.error.empty()) std::cerr << "qrelent: " << r.error << "\n";
  std::printf("%s: %ld rows, %ld failed, exit %d -> %s\n", s.id.c_str(), r.rows, r.failed_rows,
              r.exit_code, target.string().c_str());
  return r.exit_code;
}

int run_suite_command(const std::string& out, const SuiteOptions& opt) {
  const SuiteReport report = run_suite(opt);
  bool errored = false;
  for (const auto& c : report.criteria) {
    errored = errored || c.errored;
    std::printf("criterion %2d %-30s %s  measured=%s threshold=%s  (%.2fs) %s\n", c.info.id,
                c.info.name.c_str(), c.pass ? "PASS" : "FAIL", format_number(c.measured).c_str(),
                format_number(c.threshold).c_str(), c.seconds, c.note.c_str());
  }
  try {
    for (const auto& [name, text] : report.files()) write_file(fs::path(out) / name, text);
  } catch (const std::exception& e) {
    std::cerr << "qrelent: " << e.what() << "\n";
    return kExitUsage;
  }
  if (errored) return kExitNumerical;
  return report.all_pass() ? kExitPass : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrelent: scenario runner for the relative-entropy mean-field toolkit"};
  app.require_subcommand(1);

  ScenarioArgs args;
  std::vector<std::string> commands{"simulate", "verify", "enumerate", "semiclassical"};
  const char* help[] = {"Integrate the N-body and Hartree flows of a simulate scenario",
                        "Run a verify-theorem3, verify-cancellation or verify-identities scenario",
                        "Enumerate the fully paired index patterns of an enumerate scenario",
                        "Run a semiclassical-bounds or quantization-checks scenario"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    subs.push_back(app.add_subcommand(commands[k], help[k]));
    add_scenario_flags(subs.back(), args);
  }

  std::string suite_out = "suite-out";
  SuiteOptions suite_opt;
  std::optional<std::uint64_t> suite_seed;
  std::optional<double> override_tol;
  bool all = false;
  CLI::App* suite = app.add_subcommand("suite", "Run the acceptance suite and write one CSV per scenario");
  suite->add_option("--out", suite_out, "Output directory");
  suite->add_option("--seed-override", suite_seed, "Base seed of the suite");
  suite->add_option("--tag", suite_opt.tags, "Run only criteria carrying this tag (repeatable)");
  suite->add_option("--override-tolerance", override_tol,
                    "Replace every check tolerance (integrator guards excepted)")
      ->check(CLI::NonNegativeNumber);
  suite->add_flag("--all", all, "Run every criterion (the default without --tag)");
  suite->add_flag("--skip-determinism", suite_opt.skip_determinism,
                  "Do not rerun the suite to compare bytes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (subs[k]->parsed()) return run_command(commands[k], args);
    }
    if (all) suite_opt.tags.clear();
    if (suite_seed) suite_opt.seed = *suite_seed;
    suite_opt.override_tolerance = override_tol;
    return run_suite_command(suite_out, suite_opt);
  } catch (const std::exception& e) {
    std::cerr << "qrelent: " << error_name(e) << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}
