#pragma once

#include <complex>
#include <vector>

#include "qrelent/dynamics.hpp"
#include "qrelent/entropy.hpp"
#include "qrelent/linalg.hpp"
#include "qrelent/tensor_space.hpp"

namespace qrelent {

/// X = -i[W - V^gamma (x) 1, (log gamma) (x) 1] on C^d (x) C^d.
HermitianOperator fluctuation_operator(const HermitianOperator& gamma, const HermitianOperator& w,
                                       double eigenvalue_floor = kEigenvalueFloor);

/// delta H_N = (N-1)^{-1} sum_{i<j} W_ij - sum_j V^gamma_j.
HermitianOperator hamiltonian_defect(const HermitianOperator& gamma, const HermitianOperator& w,
                                     int n, Index cap = kDefaultDimCap);

/// A = (N-1)^{-1} sum_{i != j} X_ij, cross-checked against -i[delta H_N, log gamma^{(x)N}].
/// Throws ConsistencyError if the two differ by more than identity_tol * max(1, ||A||).
HermitianOperator entropy_production_operator(const HermitianOperator& gamma,
                                              const HermitianOperator& w, int n,
                                              Index cap = kDefaultDimCap,
                                              double identity_tol = 1e-9);

/// The second construction alone, -i[delta H_N, log gamma^{(x)N}].
HermitianOperator entropy_production_operator_commutator(const HermitianOperator& gamma,
                                                         const HermitianOperator& w, int n,
                                                         Index cap = kDefaultDimCap);

/// Multi-indices I = (i_1..i_m), J = (j_1..j_m), 1-based, with i_nu != j_nu.
struct IndexPattern {
  std::vector<int> i;
  std::vector<int> j;

  IndexPattern() = default;
  IndexPattern(std::vector<int> i_, std::vector<int> j_);
  int m() const noexcept { return static_cast<int>(i.size()); }
};

/// True if some i_nu occurs nowhere else among I and J, or some j_nu occurs
/// nowhere else among J and I.
bool cancellation_rule_applies(const IndexPattern& p);

/// tr(gamma^{(x)N} X_{i_1 j_1} ... X_{i_m j_m}).
std::complex<double> mixed_moment(const HermitianOperator& gamma, const HermitianOperator& w,
                                  const IndexPattern& pattern, int n, Index cap = kDefaultDimCap);

struct CancellationResult {
  std::complex<double> moment;
  double scale = 1.0;  // max(1, ||X||^m)
  double tolerance = 1e-10;

  double ratio() const { return std::abs(moment) / scale; }
  bool holds() const { return ratio() <= tolerance; }
};

/// Evaluates a pattern covered by the cancellation rule; ArgumentError otherwise.
CancellationResult cancellation_check(const HermitianOperator& gamma, const HermitianOperator& w,
                                      const IndexPattern& pattern, int n,
                                      Index cap = kDefaultDimCap);

/// Every valid pattern with 1 <= m <= m_max on N legs, grouped by the rule.
struct CancellationSweep {
  long covered_patterns = 0;
  long uncovered_patterns = 0;
  double worst_ratio = 0.0;  // over covered patterns
  IndexPattern worst_pattern;
};

/// Sweeps all patterns with m <= m_max sharing prefix products.
CancellationSweep cancellation_sweep(const HermitianOperator& gamma, const HermitianOperator& w,
                                     int n, int m_max, Index cap = kDefaultDimCap);

/// One point of the entropy-production comparison.
struct ProductionPoint {
  double t = 0.0;
  double entropy = 0.0;
  double fd_derivative = 0.0;  // central difference of the entropy
  double production = 0.0;    // tr(Gamma A)
};

struct ProductionReport {
  std::vector<ProductionPoint> points;  // interior grid points only
  double max_abs_error = 0.0;
  double max_production = 0.0;
  /// max over points of |fd - P| / |P|
  double max_pointwise_rel_error = 0.0;
  /// max |fd - P| / max |P|
  double max_scaled_rel_error = 0.0;
  /// max over points of fd - P (the Lindblad inequality needs this <= tol)
  double max_excess = 0.0;
};

/// Compares dS/dt (central differences of S(Gamma_t, gamma_t^{(x)N})) with
/// tr(Gamma_t A_t) on the stored grid of two synchronized trajectories.
ProductionReport entropy_production_identity_check(const Trajectory& many_body,
                                                   const Trajectory& hartree,
                                                   const HermitianOperator& w, int n,
                                                   Index cap = kDefaultDimCap);

struct XNormPoint {
  double t = 0.0;
  double x_norm = 0.0;
  double min_eigenvalue = 0.0;
  double bound = 0.0;        // 4 ||W|| / m0
  double local_bound = 0.0;  // 4 ||W|| / lambda_min(gamma_t)
};

struct XNormReport {
  double m0 = 0.0;
  double w_norm = 0.0;
  std::vector<XNormPoint> points;
  double sup_x_norm = 0.0;
  double worst_margin = 0.0;        // min (bound - ||X||)
  double worst_local_margin = 0.0;  // min (local_bound - ||X||)
  double worst_floor_margin = 0.0;  // min (lambda_min(gamma_t) - m0)
};

/// ||X(gamma_t)|| against 4 ||W|| / m0 with m0 = lambda_min(gamma_0).
XNormReport x_norm_bound_check(const Trajectory& hartree, const HermitianOperator& w);

enum class GronwallKind { Theorem1, Theorem3 };

struct GronwallConstants {
  double c0 = 8.0;
  // Theorem-1 variant
  double c1 = 0.0;
  double c2 = 0.0;
  double t_final = 0.0;
  double v_norm = 0.0;       // ||V||_inf
  double grad_v_norm = 0.0;  // ||grad V||_inf
  // Theorem-3 variant
  double m0 = 0.0;
  double w_norm = 0.0;
  double c_w = 0.0;  // 0 selects the explicit 4 ||W|| / m0
};

struct GronwallValue {
  /// Multiplier of (S_0 + log 2) at time t.
  double factor = 1.0;
  /// Theorem 1: C(t) and lambda(t) = (4 C0 C(t))^{-1}; C is the closed-form
  /// constant with T = t_final.
  double c_of_t = 0.0;
  double lambda = 0.0;
  double closed_form_c = 0.0;
};

/// Theorem 1: factor e^{4 C0 C(T) t}. Theorem 3: factor e^{4 C0 C_W t}.
GronwallValue gronwall_constant(GronwallKind kind, const GronwallConstants& c, double t);

struct Theorem3Row {
  double t = 0.0;
  double entropy = 0.0;
  double bound_sup = 0.0;       // e^{32 sup||X|| t}(S0 + log 2)
  double bound_explicit = 0.0;  // e^{128 ||W|| t / m0}(S0 + log 2)
  double bound_theorem1 = 0.0;  // e^{4 C0 C(T) t}(S0 + log 2) with finite proxies
};

struct Theorem3Report {
  double m0 = 0.0;
  double w_norm = 0.0;
  double sup_x_norm = 0.0;
  double initial_entropy = 0.0;
  std::vector<Theorem3Row> rows;
  double worst_margin_sup = 0.0;
  double worst_margin_explicit = 0.0;
  double worst_margin_theorem1 = 0.0;
  GronwallConstants theorem1_constants;
};

/// Simulates the N-body and Hartree(-Lindblad) flows and checks the entropy
/// bound on the stored grid. L must be normal; gamma_0 >= m0 > 0.
/// The Theorem-1 column uses finite proxies: ||V|| := ||W||, C1 ||grad V|| :=
/// sup||X||/2 and C2 := ||[log gamma_0, h]||_op.
Theorem3Report theorem3_verify(const LindbladModel& model, int n, const HermitianOperator& gamma0_n,
                               const HermitianOperator& gamma0, double t_final,
                               const IntegratorConfig& config, Index cap = kDefaultDimCap);

struct PartitionBoundResult {
  double value = 0.0;  // tr(gamma^{(x)N} e^{lambda A})
  double bound = 0.0;  // (1 - 2 C0 ||X|| lambda)^{-1}
  double x_norm = 0.0;
  double lambda = 0.0;
  bool holds() const { return value <= bound + 1e-8; }
};

/// Exact tr(gamma^{(x)N} e^{lambda A}); requires lambda < (2 C0 ||X||)^{-1}.
PartitionBoundResult moment_partition_bound_check(const HermitianOperator& gamma,
                                                  const HermitianOperator& w, int n, double lambda,
                                                  double c0 = 8.0, Index cap = kDefaultDimCap);

/// The same with lambda = (4 C0 ||X||)^{-1}, where the bound equals 2.
PartitionBoundResult moment_partition_bound_at_log2(const HermitianOperator& gamma,
                                                    const HermitianOperator& w, int n,
                                                    double c0 = 8.0, Index cap = kDefaultDimCap);

}  // namespace qrelent
