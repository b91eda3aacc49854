#include "qrelent/semiclassical.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gaussian weights e^{-hbar kappa_n^2}, kappa_n = p/hbar - 2 pi n, over the
// modes that contribute at double precision.
struct ModeWindow {
  long lo = 0;
  long hi = 0;
};

ModeWindow significant_modes(double p, double hbar) {
  const double centre = p / (kTwoPi * hbar);
  const double reach = std::sqrt(60.0 / hbar) / kTwoPi + 2.0;
  return {static_cast<long>(std::floor(centre - reach)), static_cast<long>(std::ceil(centre + reach))};
}

double mode_weight(long n, double p, double hbar) {
  const double x = p - kTwoPi * hbar * static_cast<double>(n);
  return std::exp(-x * x / hbar);
}

double partition(double p, double hbar) {
  const ModeWindow w = significant_modes(p, hbar);
  double z = 0.0;
  for (long n = w.lo; n <= w.hi; ++n) z += mode_weight(n, p, hbar);
  return z;
}

}  // namespace

TorusHilbert::TorusHilbert(double hbar, int fourier_cutoff) : hbar_(hbar), k_(fourier_cutoff) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ArgumentError("TorusHilbert: hbar must be positive");
  if (fourier_cutoff < 1) throw ArgumentError("TorusHilbert: Fourier cutoff must be positive");
}

double coherent_state_tail(const PhasePoint& z, const TorusHilbert& space) {
  const double hbar = space.hbar();
  const ModeWindow w = significant_modes(z[1], hbar);
  double tail = 0.0;
  for (long n = w.lo; n <= w.hi; ++n) {
    if (n < -space.cutoff() || n > space.cutoff()) tail += mode_weight(n, z[1], hbar);
  }
  return tail / partition(z[1], hbar);
}

Vector coherent_state_compressed(const PhasePoint& z, const TorusHilbert& space) {
  const double hbar = space.hbar();
  const double q = z[0];
  const double p = z[1];
  const double norm = 1.0 / std::sqrt(partition(p, hbar));
  Vector v(space.dim());
  for (Index r = 0; r < space.dim(); ++r) {
    const double kappa = p / hbar - kTwoPi * space.mode(r);
    const double amplitude = std::exp(-0.5 * hbar * kappa * kappa) * norm;
    // Reduce the phase kappa*q modulo 2 pi in two parts to keep it accurate.
    const double phase = std::fmod(p * q / hbar, kTwoPi) - std::fmod(kTwoPi * space.mode(r) * q, kTwoPi);
    v(r) = std::polar(amplitude, phase);
  }
  return v;
}

Vector coherent_state(const PhasePoint& z, const TorusHilbert& space, double tail_tol) {
  const double tail = coherent_state_tail(z, space);
  if (tail > tail_tol) {
    std::ostringstream msg;
    msg << "coherent_state: truncation tail " << tail << " at (q, p) = (" << z[0] << ", " << z[1]
        << ") exceeds " << tail_tol << " with K = " << space.cutoff();
    throw TruncationError(msg.str());
  }
  return coherent_state_compressed(z, space);
}

PhaseSpaceGrid::PhaseSpaceGrid(int nq_, int np_, double p_max_) : nq(nq_), np(np_), p_max(p_max_) {
  if (nq < 1 || np < 1 || !(p_max > 0.0)) throw ArgumentError("PhaseSpaceGrid: invalid grid");
}

PhasePoint PhaseSpaceGrid::point(std::size_t index) const {
  const std::size_t iq = index / static_cast<std::size_t>(np);
  const std::size_t ip = index % static_cast<std::size_t>(np);
  const double dp = 2.0 * p_max / np;
  return {static_cast<double>(iq) / nq, -p_max + (static_cast<double>(ip) + 0.5) * dp};
}

DiscreteMeasure husimi(const Matrix& gamma, const TorusHilbert& space, const PhaseSpaceGrid& grid) {
  if (gamma.rows() != space.dim() || gamma.cols() != space.dim()) {
    throw ArgumentError("husimi: state dimension does not match the torus space");
  }
  const double scale = 1.0 / (kTwoPi * space.hbar());
  DiscreteMeasure out;
  out.points.reserve(grid.size());
  out.masses.reserve(grid.size());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const PhasePoint z = grid.point(a);
    const Vector v = coherent_state_compressed(z, space);
    const double density = scale * v.dot(gamma * v).real();
    out.points.push_back(z);
    out.masses.push_back(density * grid.weight());
  }
  return out;
}

HermitianOperator toeplitz(const DiscreteMeasure& mu, const TorusHilbert& space) {
  mu.validate();
  Matrix op = Matrix::Zero(space.dim(), space.dim());
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu.masses[a] == 0.0) continue;
    const Vector v = coherent_state_compressed(mu.points[a], space);
    op.noalias() += mu.masses[a] * (v * v.adjoint());
  }
  return hermitian_part(op);
}

double resolution_identity_check(const TorusHilbert& space, const PhaseSpaceGrid& grid) {
  Matrix acc = Matrix::Zero(space.dim(), space.dim());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const Vector v = coherent_state_compressed(grid.point(a), space);
    acc.noalias() += grid.weight() * (v * v.adjoint());
  }
  acc.diagonal().array() -= kTwoPi * space.hbar();
  return operator_norm(hermitian_part(acc));
}

double duality_check(const DiscreteMeasure& mu, const TorusHilbert& space, const PhaseSpaceGrid& grid) {
  const HermitianOperator op = toeplitz(mu, space);
  const DiscreteMeasure h = husimi(op.matrix(), space, grid);
  const double hbar = space.hbar();
  const double scale = 1.0 / (kTwoPi * hbar);
  const int images = 1 + static_cast<int>(std::ceil(std::sqrt(80.0 * hbar)));
  double worst = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const PhasePoint z = grid.point(g);
    double smoothed = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      const double dp = z[1] - mu.points[a][1];
      for (int k = -images; k <= images; ++k) {
        const double dq = z[0] - mu.points[a][0] - k;
        smoothed += mu.masses[a] * std::exp(-(dq * dq + dp * dp) / (2.0 * hbar));
      }
    }
    smoothed *= scale;
    worst = std::max(worst, std::abs(h.masses[g] / grid.weight() - smoothed));
  }
  return worst;
}

void BoundParams::validate() const {
  const double values[] = {c0, c1, c2, t_final, n, k, d, phi_norm, grad_phi_norm};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("BoundParams: constants must be positive");
  }
  if (lip_grad_phi < 0.0 || !std::isfinite(lip_grad_phi)) {
    throw ArgumentError("BoundParams: Lip(grad Phi) must be >= 0");
  }
}

double log_bound_f(double hbar, double t, const BoundParams& p) {
  if (!(hbar > 0.0) || t < 0.0) throw ArgumentError("bound_f: need hbar > 0 and t >= 0");
  return std::log(p.k * std::numbers::ln2 / p.n) + p.m0() * t + p.m1() * t / hbar +
         p.m2() * t / (hbar * hbar);
}

double bound_f(double hbar, double t, const BoundParams& p) { return std::exp(log_bound_f(hbar, t, p)); }

double bound_g(double hbar, double t, const BoundParams& p) {
  if (!(hbar > 0.0) || t < 0.0) throw ArgumentError("bound_g: need hbar > 0 and t >= 0");
  const double growth = std::exp(p.lambda() * t);
  return 2.0 * p.k * p.d * (growth + 1.0) * hbar + p.k * p.c_wasserstein() * growth / p.n;
}

CrossingResult solve_hbar_crossing(const BoundParams& p, double t) {
  p.validate();
  if (!(t > 0.0)) throw ArgumentError("solve_hbar_crossing: t must be positive");
  auto gap = [&](double log_hbar) {
    const double hbar = std::exp(log_hbar);
    return log_bound_f(hbar, t, p) - std::log(bound_g(hbar, t, p));
  };
  double lo = std::log(1e-12);
  double hi = std::log(1e6);
  if (!(gap(lo) > 0.0) || !(gap(hi) < 0.0)) {
    throw ConvergenceError("solve_hbar_crossing: f - g does not change sign on [1e-12, 1e6]",
                           gap(lo));
  }
  CrossingResult out;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gap(mid);
    out.iterations = it + 1;
    if (gm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    out.hbar = std::exp(mid);
    out.relative_gap = std::abs(std::expm1(gm));
    if (out.relative_gap < 1e-13 || hi - lo < 1e-15) break;
  }
  out.value = bound_g(out.hbar, t, p);
  out.relative_gap = std::abs(bound_f(out.hbar, t, p) - out.value) / out.value;
  if (!(out.relative_gap < 1e-10)) {
    throw ConvergenceError("solve_hbar_crossing: bisection stalled", out.relative_gap);
  }
  return out;
}

std::vector<EnvelopeRow> uniform_envelope(const BoundParams& p, double t,
                                          const std::vector<double>& n_grid) {
  std::vector<EnvelopeRow> rows;
  for (double n : n_grid) {
    if (!(n > 1.0)) throw ArgumentError("uniform_envelope: N must exceed 1");
    BoundParams q = p;
    q.n = n;
    const CrossingResult cr = solve_hbar_crossing(q, t);
    EnvelopeRow row;
    row.n = n;
    row.hbar_crossing = cr.hbar;
    row.envelope = cr.value;
    row.hbar_sqrt = std::sqrt(2.0 * q.m2() * t / std::log(n));
    row.g_at_sqrt = bound_g(row.hbar_sqrt, t, q);
    row.f_at_sqrt = bound_f(row.hbar_sqrt, t, q);
    row.scaled = row.envelope * std::sqrt(std::log(n));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qrelent
