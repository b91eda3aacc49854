#pragma once

#include <cstdint>
#include <vector>

#include "qrelent/linalg.hpp"
#include "qrelent/tensor_space.hpp"

namespace qrelent {

/// Generator data (h, W, L) of the N-body Lindblad and Hartree-Lindblad flows.
struct LindbladModel {
  Index site_dim = 0;
  HermitianOperator h;
  HermitianOperator w;  // on C^d (x) C^d, exchange symmetric
  Matrix l;             // jump operator on C^d; zero for closed systems

  bool is_closed() const { return l.isZero(0.0); }
  /// ||L L* - L* L||_op <= tol.
  bool normal_l(double tol = 1e-12) const;
};

/// Validates dimensions and exchange symmetry of W (defect <= 1e-12 * max(1, ||W||)).
LindbladModel make_model(HermitianOperator h, HermitianOperator w, Matrix l);

/// Periodic 1-D lattice: h is the graph Laplacian (a size-2 ring has a doubled
/// edge, so h = [[2,-2],[-2,2]]), W = sum_k |kk><kk|, and
/// L = sqrt(dephasing) * diag(0, 1, ..., size-1).
LindbladModel bose_hubbard_model(int lattice_size, double dephasing = 0.1);

struct RandomModelSpec {
  Index site_dim = 2;
  std::uint64_t seed = 0;
  double w_norm = 1.0;
  double h_norm = 1.0;
  /// Scale of the random diagonal L; 0 gives a closed model.
  double l_strength = 0.3;
  bool l_diagonal = true;
};

/// Random h, exchange-symmetrized W rescaled to ||W||_op = w_norm, and a
/// random diagonal (hence normal) L. Deterministic in the seed.
LindbladModel random_model(const RandomModelSpec& spec);

/// V^gamma = tr_2((1 (x) gamma) W).
HermitianOperator mean_field_potential(const HermitianOperator& gamma, const HermitianOperator& w);
/// tr_1((gamma (x) 1) W); equals mean_field_potential for exchange-symmetric W.
HermitianOperator mean_field_potential_first_leg(const HermitianOperator& gamma,
                                                 const HermitianOperator& w);

/// H_N = sum_j h_j + (N-1)^{-1} sum_{i<j} W_ij.
HermitianOperator n_body_hamiltonian(const LindbladModel& model, int n, Index cap = kDefaultDimCap);

/// L A L* - (L*L A + A L*L) / 2.
Matrix dissipator(const Matrix& l, const Matrix& a);

/// -i[H_N, Gamma] + sum_j D_{L_j}(Gamma).
Matrix lindblad_rhs(const Matrix& gamma, const LindbladModel& model, int n,
                    Index cap = kDefaultDimCap);
/// -i[h + V^gamma, gamma] + D_L(gamma).
Matrix hartree_rhs(const Matrix& gamma, const LindbladModel& model);

enum class RhsKind { NBody, Hartree };

struct IntegratorConfig {
  double dt = 1e-3;
  bool hermitize_each_step = true;
  bool renormalize_trace = true;
  /// Keep every store_stride-th step (the final state is always kept).
  int store_stride = 1;
  double positivity_tol = 1e-6;
  double trace_drift_tol = 1e-6;
};

struct StepDiagnostics {
  double trace_drift = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<StepDiagnostics> diagnostics;  // aligned with states
  double dt = 0.0;                           // effective step T / n_steps
  double worst_trace_drift = 0.0;
  double worst_min_eigenvalue = 0.0;
  double worst_hermiticity_defect = 0.0;
};

/// 1e-3 * min(1, 1 / ||H_N||_op) for the N-body generator of `model`.
double default_dt(const LindbladModel& model, int n, Index cap = kDefaultDimCap);

/// Classical fourth-order Runge-Kutta on [0, T] with n = round(T / dt) equal
/// steps. Throws PositivityError if an accepted state has an eigenvalue below
/// -positivity_tol and TraceDriftError if a step moves the trace by more than
/// trace_drift_tol.
Trajectory integrate(RhsKind kind, const HermitianOperator& initial, const LindbladModel& model,
                     int n, double t_final, const IntegratorConfig& config,
                     Index cap = kDefaultDimCap);

/// e^{-iHt} Gamma_0 e^{iHt}.
HermitianOperator exact_unitary_flow(const HermitianOperator& h, const HermitianOperator& gamma0,
                                     double t);

/// Final-state errors at dt, dt/2 and dt/4 relative to each other.
struct StepHalvingEstimate {
  double diff_coarse = 0.0;  // ||x_dt - x_{dt/2}||
  double diff_fine = 0.0;    // ||x_{dt/2} - x_{dt/4}||
  double observed_order = 0.0;
};
StepHalvingEstimate step_halving_estimate(RhsKind kind, const HermitianOperator& initial,
                                          const LindbladModel& model, int n, double t_final,
                                          IntegratorConfig config, Index cap = kDefaultDimCap);

}  // namespace qrelent
