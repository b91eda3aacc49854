#pragma once

#include "qrelent/linalg.hpp"
#include "qrelent/tensor_space.hpp"

namespace qrelent {

/// Relative entropy result; `infinite` marks the kernel-violation branch.
struct EntropyValue {
  double value = 0.0;
  bool infinite = false;
  /// Mass the first state puts on the numerical kernel of the second.
  double mass_below_floor = 0.0;
};

/// Tolerances shared by the entropy routines.
struct EntropyPolicy {
  double eigenvalue_floor = kEigenvalueFloor;
  double kernel_tol = 1e-10;
  /// Negative eigenvalues down to -negativity_tol are clipped to zero.
  double negativity_tol = 1e-10;
  double trace_tol = 1e-8;
};

/// Spectrum of a nominal density with round-off negativity clipped and the
/// trace renormalized. Throws NumericalError on real violations.
SpectralDecomposition density_spectrum(const HermitianOperator& gamma,
                                       const EntropyPolicy& policy = {});

/// -tr(Gamma log Gamma), with 0 log 0 = 0.
double von_neumann_entropy(const HermitianOperator& gamma, const EntropyPolicy& policy = {});

/// tr(Gamma log Gamma - Gamma log Gamma').
EntropyValue relative_entropy(const HermitianOperator& gamma, const HermitianOperator& gamma_ref,
                              const EntropyPolicy& policy = {});

/// S(Gamma, gamma^{(x)N}) from the one-leg marginals:
/// -S_vN(Gamma) - sum_j tr(Gamma^{(j)} log gamma). gamma must be faithful.
EntropyValue relative_entropy_to_product(const HermitianOperator& gamma,
                                         const HermitianOperator& site_state,
                                         const ManyBodySpace& space,
                                         const EntropyPolicy& policy = {});

/// ||Gamma - Gamma'||_1.
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

/// lhs = ||Gamma - Gamma'||_1^2, rhs = 2 S(Gamma, Gamma').
InequalityCheck pinsker_check(const HermitianOperator& gamma, const HermitianOperator& gamma_ref,
                              const EntropyPolicy& policy = {});

/// lhs = S(Gamma^{N:k}, gamma^{(x)k}), rhs = (k/N) S(Gamma, gamma^{(x)N}).
/// Gamma must be permutation symmetric (defect <= symmetry_tol).
InequalityCheck block_subadditivity_check(const HermitianOperator& gamma,
                                          const HermitianOperator& site_state, int k,
                                          const ManyBodySpace& space,
                                          double symmetry_tol = 1e-8,
                                          const EntropyPolicy& policy = {});

/// lhs = tr(rho A), rhs = S(rho, sigma)/lambda + log tr(sigma e^{lambda A}) / lambda.
InequalityCheck entropy_inequality_check(const HermitianOperator& rho,
                                         const HermitianOperator& sigma,
                                         const HermitianOperator& a, double lambda,
                                         const EntropyPolicy& policy = {});

}  // namespace qrelent
