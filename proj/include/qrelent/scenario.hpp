#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrelent/dynamics.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/semiclassical.hpp"

namespace qrelent {

inline constexpr const char* kScenarioSchema = "qrelent/1";

/// Schema violation in a scenario document. line() is 1-based, 0 if unknown.
class ScenarioError : public ArgumentError {
 public:
  ScenarioError(const std::string& what, std::string field, int line)
      : ArgumentError(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

enum class ScenarioKind {
  Simulate,
  VerifyTheorem3,
  VerifyCancellation,
  VerifyIdentities,
  Enumerate,
  SemiclassicalBounds,
  QuantizationChecks,
};

std::string to_string(ScenarioKind kind);
/// Throws ArgumentError for an unknown name.
ScenarioKind parse_kind(const std::string& name);

/// Which generator family to build and its parameters. The builder seed is
/// derived from the scenario seed, so --seed-override reaches every draw.
struct ModelSpec {
  std::string builder = "random";  // "random" or "bose-hubbard"
  Index site_dim = 2;
  double w_norm = 1.0;
  double h_norm = 1.0;
  double l_strength = 0.0;
  int lattice_size = 2;
  double dephasing = 0.1;
};

struct ScenarioTolerances {
  /// Slack of inequality rows and of the cancellation ratio.
  double margin = 1e-10;
  double positivity = 1e-6;
  double trace_drift = 1e-6;
  // Thresholds of the error-type rows of verify-identities.
  double frechet_quadrature = 1e-8;
  double frechet_finite_difference = 1e-5;
  double commutator_identity = 1e-9;
  double x_norm = 1e-8;
  // Thresholds of quantization-checks.
  double coherent_norm = 1e-12;
  double husimi_mass = 1e-4;
  double toeplitz_trace = 1e-6;
  double resolution = 1e-4;
  double duality = 1e-6;
  /// Roundoff allowance for nonnegativity and monotonicity rows.
  double roundoff = 1e-12;

  /// Sets every tolerance and threshold above except positivity and trace_drift.
  void override_all(double value);
};

/// Constants of the default f/g parameter set.
inline BoundParams default_bound_params() {
  BoundParams b;
  b.c0 = 8.0;
  b.c1 = 0.01;
  b.c2 = 0.01;
  b.t_final = 1.0;
  b.phi_norm = 0.1;
  b.grad_phi_norm = 0.1;
  b.lip_grad_phi = 0.5;
  return b;
}

struct Scenario {
  std::string id;
  ScenarioKind kind = ScenarioKind::Simulate;
  std::uint64_t seed = 0;
  ModelSpec model;
  int n = 2;
  double t_final = 1.0;
  double dt = 1e-3;
  int store_stride = 1;
  /// Smallest eigenvalue of the one-body initial state gamma_0 (exact).
  double initial_min_eigenvalue = 0.2;
  Index cap = kDefaultDimCap;
  ScenarioTolerances tolerances;
  int samples = 10;
  int m_max = 3;
  int n_min = 1;
  int n_max = 5;
  BoundParams bounds = default_bound_params();
  std::vector<double> n_grid{1e4, 1e6, 1e8, 1e10, 1e12};
  double hbar = 0.005;
  int fourier_cutoff = 30;
  int grid = 64;
  std::string output;
};

/// Parses one YAML document. Unknown keys, a missing seed, a wrong schema
/// tag or an out-of-range value raise ScenarioError naming the field and line.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Checks value ranges and d^N <= cap; parse_scenario calls it.
void validate_scenario(const Scenario& s);

/// Builds the model of the scenario.
LindbladModel build_model(const Scenario& s);

}  // namespace qrelent
