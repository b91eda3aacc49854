#include "qrelent/entropy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {

SpectralDecomposition density_spectrum(const HermitianOperator& gamma,
                                       const EntropyPolicy& policy) {
  SpectralDecomposition eig = eig_hermitian(gamma);
  const double lowest = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  if (lowest < -policy.negativity_tol) {
    std::ostringstream msg;
    msg << "density has eigenvalue " << lowest << " below -" << policy.negativity_tol;
    throw PositivityError(msg.str());
  }
  const double trace = eig.eigenvalues.sum();
  if (std::abs(trace - 1.0) > policy.trace_tol) {
    std::ostringstream msg;
    msg << "density has trace " << trace;
    throw TraceDriftError(msg.str());
  }
  eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
  eig.eigenvalues /= eig.eigenvalues.sum();
  return eig;
}

double von_neumann_entropy(const HermitianOperator& gamma, const EntropyPolicy& policy) {
  const SpectralDecomposition eig = density_spectrum(gamma, policy);
  double s = 0.0;
  for (double lambda : eig.eigenvalues) {
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

EntropyValue relative_entropy(const HermitianOperator& gamma, const HermitianOperator& gamma_ref,
                              const EntropyPolicy& policy) {
  if (gamma.dim() != gamma_ref.dim()) throw ArgumentError("relative_entropy: dimension mismatch");
  const double neg_entropy = -von_neumann_entropy(gamma, policy);
  const SpectralDecomposition ref = density_spectrum(gamma_ref, policy);
  // Diagonal of Gamma in the eigenbasis of Gamma'.
  const Matrix& v = ref.eigenvectors;
  const RealVector weights = (v.adjoint() * gamma.matrix() * v).diagonal().real();

  EntropyValue out;
  double cross = 0.0;
  for (Index k = 0; k < ref.eigenvalues.size(); ++k) {
    if (ref.eigenvalues(k) <= policy.eigenvalue_floor) {
      out.mass_below_floor += std::max(weights(k), 0.0);
    } else {
      cross += weights(k) * std::log(ref.eigenvalues(k));
    }
  }
  if (out.mass_below_floor > policy.kernel_tol) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = neg_entropy - cross;
  return out;
}

EntropyValue relative_entropy_to_product(const HermitianOperator& gamma,
                                         const HermitianOperator& site_state,
                                         const ManyBodySpace& space,
                                         const EntropyPolicy& policy) {
  if (gamma.dim() != space.total_dim() || site_state.dim() != space.site_dim()) {
    throw ArgumentError("relative_entropy_to_product: dimension mismatch");
  }
  const SpectralDecomposition site = density_spectrum(site_state, policy);
  if (site.eigenvalues(0) <= policy.eigenvalue_floor) {
    // Not faithful: fall back to the general kernel-aware evaluation.
    return relative_entropy(gamma, tensor_power(site_state, space.legs(), space.cap()), policy);
  }
  const Matrix log_site = site.apply([](double x) { return std::log(x); });
  double cross = 0.0;
  for (int j = 1; j <= space.legs(); ++j) {
    const Matrix marginal = partial_trace(gamma.matrix(), {j}, space);
    cross += (marginal * log_site).trace().real();
  }
  return {-von_neumann_entropy(gamma, policy) - cross, false, 0.0};
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw ArgumentError("trace_distance: dimension mismatch");
  return eigenvalues_hermitian(a.matrix() - b.matrix()).cwiseAbs().sum();
}

InequalityCheck pinsker_check(const HermitianOperator& gamma, const HermitianOperator& gamma_ref,
                              const EntropyPolicy& policy) {
  const double td = trace_distance(gamma, gamma_ref);
  const EntropyValue s = relative_entropy(gamma, gamma_ref, policy);
  return {td * td, 2.0 * s.value, 1e-10};
}

InequalityCheck block_subadditivity_check(const HermitianOperator& gamma,
                                          const HermitianOperator& site_state, int k,
                                          const ManyBodySpace& space, double symmetry_tol,
                                          const EntropyPolicy& policy) {
  if (k < 1 || k > space.legs()) throw ArgumentError("block_subadditivity_check: k outside 1..N");
  if (gamma.dim() != space.total_dim()) {
    throw ArgumentError("block_subadditivity_check: dimension mismatch");
  }
  const double defect = symmetry_defect(gamma.matrix(), space);
  if (defect > symmetry_tol) {
    std::ostringstream msg;
    msg << "block_subadditivity_check: state is not permutation symmetric (defect " << defect
        << ")";
    throw ArgumentError(msg.str());
  }
  std::vector<int> keep;
  for (int leg = 1; leg <= k; ++leg) keep.push_back(leg);
  const HermitianOperator marginal = partial_trace(gamma, keep, space);
  const HermitianOperator ref_k = tensor_power(site_state, k, space.cap());
  const HermitianOperator ref_n = tensor_power(site_state, space.legs(), space.cap());
  const double lhs = relative_entropy(marginal, ref_k, policy).value;
  const double full = relative_entropy(gamma, ref_n, policy).value;
  return {lhs, static_cast<double>(k) / space.legs() * full, 1e-10};
}

InequalityCheck entropy_inequality_check(const HermitianOperator& rho,
                                         const HermitianOperator& sigma,
                                         const HermitianOperator& a, double lambda,
                                         const EntropyPolicy& policy) {
  if (!(lambda > 0.0)) throw ArgumentError("entropy_inequality_check: lambda must be positive");
  if (rho.dim() != sigma.dim() || rho.dim() != a.dim()) {
    throw ArgumentError("entropy_inequality_check: dimension mismatch");
  }
  const double lhs = (rho.matrix() * a.matrix()).trace().real();
  const double s = relative_entropy(rho, sigma, policy).value;
  // log tr(sigma e^{lambda A}) with the largest eigenvalue factored out.
  const SpectralDecomposition eig = eig_hermitian(a);
  const double top = lambda * eig.eigenvalues.maxCoeff();
  const Matrix shifted_exp =
      eig.apply([&](double x) { return std::exp(lambda * x - top); });
  const double log_partition = top + std::log((sigma.matrix() * shifted_exp).trace().real());
  return {lhs, s / lambda + log_partition / lambda, 1e-10};
}

}  // namespace qrelent
