#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qrelent {

/// One entry of the acceptance suite.
struct CriterionInfo {
  int id = 0;
  std::string name;
  std::vector<std::string> tags;
};

/// The twelve criteria in dependency order. Every criterion also answers to
/// the tag "c<id>" (for example "c7").
const std::vector<CriterionInfo>& suite_catalog();

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Empty selects every criterion; otherwise criteria sharing a tag run.
  std::vector<std::string> tags;
  /// Replaces the tolerances and error thresholds of criteria 1, 3-10.
  std::optional<double> override_tolerance;
  /// Skip criterion 12 (which reruns the others to compare bytes).
  bool skip_determinism = false;
};

struct CriterionResult {
  CriterionInfo info;
  bool pass = false;
  /// An exception aborted the criterion (numerical or domain error).
  bool errored = false;
  long checks = 0;
  long failed = 0;
  /// Headline quantity and the threshold it is held against.
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
  /// Wall-clock time; reported on stdout only, never written to CSV.
  double seconds = 0.0;
  /// CSV files produced (file name -> contents).
  std::map<std::string, std::string> files;
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  /// criterion,name,checks,failed,measured,threshold,pass
  std::string summary_csv;

  bool all_pass() const;
  /// Every CSV of the run including "summary.csv".
  std::map<std::string, std::string> files() const;
};

/// Runs the selected criteria. Errors raised inside a criterion are recorded
/// as a failed criterion with the error text in `note`.
SuiteReport run_suite(const SuiteOptions& options);

}  // namespace qrelent
