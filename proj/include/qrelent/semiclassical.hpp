#pragma once

#include <vector>

#include "qrelent/linalg.hpp"
#include "qrelent/transport.hpp"

namespace qrelent {

/// L^2 of the 1-D torus truncated to Fourier modes -K..K, with Planck constant hbar.
class TorusHilbert {
 public:
  TorusHilbert(double hbar, int fourier_cutoff);

  double hbar() const noexcept { return hbar_; }
  int cutoff() const noexcept { return k_; }
  Index dim() const noexcept { return 2 * k_ + 1; }
  /// Fourier mode of basis index r (r = 0 is mode -K).
  int mode(Index r) const noexcept { return static_cast<int>(r) - k_; }

 private:
  double hbar_;
  int k_;
};

/// Fourier coefficients of the coherent state at z = (q, p):
///   psi(x) = c sum_k exp(-(x - k - q)^2 / (2 hbar)) exp(i p (x - k) / hbar),
/// normalized in L^2(T), restricted to the modes of `space`.
/// Throws TruncationError if the discarded modes carry more than `tail_tol`
/// of the squared norm.
Vector coherent_state(const PhasePoint& z, const TorusHilbert& space, double tail_tol = 1e-12);

/// The same vector without the truncation check (the compression P_K |z>).
Vector coherent_state_compressed(const PhasePoint& z, const TorusHilbert& space);

/// Squared norm of |z> outside the modes of `space`.
double coherent_state_tail(const PhasePoint& z, const TorusHilbert& space);

/// Product grid: q uniform on [0, 1), p at cell midpoints of [-P, P].
struct PhaseSpaceGrid {
  int nq = 0;
  int np = 0;
  double p_max = 0.0;

  PhaseSpaceGrid(int nq_, int np_, double p_max_);
  std::size_t size() const noexcept { return static_cast<std::size_t>(nq) * static_cast<std::size_t>(np); }
  PhasePoint point(std::size_t index) const;
  /// dq * dp.
  double weight() const noexcept { return (1.0 / nq) * (2.0 * p_max / np); }
};

/// Husimi density (2 pi hbar)^{-1} <z|Gamma|z> at each grid node, stored as
/// a measure with mass density * weight.
DiscreteMeasure husimi(const Matrix& gamma, const TorusHilbert& space, const PhaseSpaceGrid& grid);

/// sum_a mu_a |z_a><z_a| (so a probability measure maps to a trace-one
/// operator up to truncation). Masses must be nonnegative.
HermitianOperator toeplitz(const DiscreteMeasure& mu, const TorusHilbert& space);

/// || sum_grid |z><z| dz - 2 pi hbar 1 ||_op on the truncated space.
double resolution_identity_check(const TorusHilbert& space, const PhaseSpaceGrid& grid);

/// sup over the grid of |Husimi[Toeplitz[mu]](z) - (2 pi hbar)^{-1} sum_a mu_a G(z - z_a)|
/// with G the Gaussian exp(-|z|^2 / (2 hbar)) periodized in q.
double duality_check(const DiscreteMeasure& mu, const TorusHilbert& space, const PhaseSpaceGrid& grid);

/// Scalar constants of the f/g interpolation.
struct BoundParams {
  double c0 = 8.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double t_final = 1.0;
  double n = 1.0;  // particle number (real so that 1e12 is representable)
  double k = 1.0;
  double d = 1.0;
  double phi_norm = 0.0;
  double grad_phi_norm = 0.0;
  double lip_grad_phi = 0.0;

  void validate() const;
  double lambda() const { return 3.0 + 4.0 * lip_grad_phi * lip_grad_phi; }
  double c_wasserstein() const { return 8.0 * grad_phi_norm / lambda(); }
  double m0() const { return 16.0 * c0 * c2 * phi_norm * t_final; }
  double m1() const { return 8.0 * c0 * c1 * grad_phi_norm; }
  double m2() const { return 16.0 * c0 * c1 * grad_phi_norm * phi_norm * t_final; }
};

/// log f(hbar, t).
double log_bound_f(double hbar, double t, const BoundParams& p);
/// f(hbar, t) = (k log 2 / N) exp(M0 t + M1 t / hbar + M2 t / hbar^2); may overflow to +inf.
double bound_f(double hbar, double t, const BoundParams& p);
/// g(hbar, t) = 2 k d (e^{Lambda t} + 1) hbar + k C e^{Lambda t} / N.
double bound_g(double hbar, double t, const BoundParams& p);

struct CrossingResult {
  double hbar = 0.0;
  double value = 0.0;          // f = g at the crossing
  double relative_gap = 0.0;   // |f - g| / g
  int iterations = 0;
};

/// Unique hbar with f(hbar, T) = g(hbar, T), by bisection on log hbar in
/// [1e-12, 1e6]. Throws ConvergenceError if the bracket does not straddle.
CrossingResult solve_hbar_crossing(const BoundParams& p, double t);

struct EnvelopeRow {
  double n = 0.0;
  double hbar_crossing = 0.0;
  double envelope = 0.0;        // f = g at the crossing
  double hbar_sqrt = 0.0;       // sqrt(2 M2 T / log N)
  double g_at_sqrt = 0.0;
  double f_at_sqrt = 0.0;
  double scaled = 0.0;          // envelope * sqrt(log N)
};

/// Envelope table over the particle numbers in `n_grid` (p.n is ignored).
std::vector<EnvelopeRow> uniform_envelope(const BoundParams& p, double t,
                                          const std::vector<double>& n_grid);

}  // namespace qrelent
