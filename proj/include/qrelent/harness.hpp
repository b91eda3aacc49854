#pragma once

#include <exception>
#include <string>

#include "qrelent/report.hpp"
#include "qrelent/scenario.hpp"

namespace qrelent {

/// Process exit codes of the harness.
enum ExitCode : int {
  kExitPass = 0,
  kExitAssertion = 1,
  kExitNumerical = 2,
  kExitUsage = 64,
};

/// Outcome of one scenario: the CSV text and the exit code it implies.
///
/// Every report starts with "# qrelent/1 scenario=<id> seed=<seed> kind=<kind>".
/// Data rows carry margin and pass columns with pass = 1 iff
/// margin >= -tolerances.margin. Column sets per kind:
///
///   simulate             scenario,step,t,relative_entropy,min_eigenvalue,trace_drift,margin,pass
///   verify-theorem3      scenario,n,t,relative_entropy,bound_sup,bound_explicit,bound_theorem1,margin,pass
///   verify-cancellation  scenario,n,sample,covered_patterns,uncovered_patterns,worst_ratio,margin,pass
///   verify-identities    scenario,check,index,measured,bound,tolerance,margin,pass
///   enumerate            scenario,m,n,exact,stirling_sum,c0_bound,power_bound,regime,margin,pass
///   semiclassical-bounds scenario,n,hbar_crossing,envelope,hbar_sqrt,f_at_sqrt,g_at_sqrt,scaled_envelope,margin,pass
///   quantization-checks  scenario,check,index,measured,bound,tolerance,margin,pass
///
/// An error aborts the run; the CSV then holds the single row
/// scenario,error,message and the exit code comes from exit_code_for().
struct RunResult {
  int exit_code = kExitPass;
  std::string csv;
  CsvTable table{{"scenario"}};
  long rows = 0;
  long failed_rows = 0;
  std::string error;
};

RunResult run_scenario(const Scenario& scenario);

/// Exit code for an exception escaping a run: 64 for argument and schema
/// errors, 2 for numerical errors and anything else.
int exit_code_for(const std::exception& e);
/// Class name used in diagnostics ("PositivityError", "ScenarioError", ...).
std::string error_name(const std::exception& e);

}  // namespace qrelent
