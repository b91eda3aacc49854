#include "qrelent/dynamics.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "qrelent/errors.hpp"
#include "qrelent/random.hpp"

namespace qrelent {

bool LindbladModel::normal_l(double tol) const {
  return operator_norm(Matrix(l * l.adjoint() - l.adjoint() * l)) <= tol;
}

LindbladModel make_model(HermitianOperator h, HermitianOperator w, Matrix l) {
  const Index d = h.dim();
  if (d < 1) throw ArgumentError("make_model: empty one-body space");
  if (w.dim() != d * d) throw ArgumentError("make_model: W must act on C^d (x) C^d");
  if (l.size() == 0) l = Matrix::Zero(d, d);
  if (l.rows() != d || l.cols() != d) throw ArgumentError("make_model: L must be d x d");
  const double defect = flip_symmetry_defect(w.matrix());
  if (defect > 1e-12 * std::max(1.0, operator_norm(w))) {
    std::ostringstream msg;
    msg << "make_model: W is not exchange symmetric (defect " << defect << ")";
    throw ArgumentError(msg.str());
  }
  return {d, std::move(h), std::move(w), std::move(l)};
}

LindbladModel bose_hubbard_model(int lattice_size, double dephasing) {
  if (lattice_size < 2) throw ArgumentError("bose_hubbard_model: lattice size must be >= 2");
  if (dephasing < 0.0) throw ArgumentError("bose_hubbard_model: dephasing must be >= 0");
  const Index d = lattice_size;
  Matrix h = Matrix::Zero(d, d);
  // Sum over the two ring neighbours x +- 1; for d = 2 both are the same site.
  for (Index x = 0; x < d; ++x) {
    for (Index y : {(x + 1) % d, (x + d - 1) % d}) {
      h(x, x) += 1.0;
      h(x, y) -= 1.0;
    }
  }
  Matrix w = Matrix::Zero(d * d, d * d);
  for (Index k = 0; k < d; ++k) w(k * d + k, k * d + k) = 1.0;
  Matrix l = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) l(k, k) = std::sqrt(dephasing) * static_cast<double>(k);
  return make_model(HermitianOperator(h), HermitianOperator(w), l);
}

LindbladModel random_model(const RandomModelSpec& spec) {
  const Index d = spec.site_dim;
  if (d < 1) throw ArgumentError("random_model: site dimension must be positive");
  if (!(spec.w_norm > 0.0) || spec.h_norm < 0.0 || spec.l_strength < 0.0) {
    throw ArgumentError("random_model: norms must be positive");
  }
  CounterRng rng(spec.seed);
  Matrix h = random_hermitian(rng, d).matrix();
  const double hn = operator_norm(hermitian_part(h));
  if (hn > 0.0) h *= spec.h_norm / hn;

  const Matrix s = swap_operator(d);
  Matrix w = random_hermitian(rng, d * d).matrix();
  w = 0.5 * (w + s * w * s);
  w *= spec.w_norm / operator_norm(hermitian_part(w));
  // Exact exchange symmetry after rounding: average once more.
  w = 0.5 * (w + s * w * s);

  Matrix l = Matrix::Zero(d, d);
  if (spec.l_strength > 0.0) {
    if (spec.l_diagonal) {
      for (Index k = 0; k < d; ++k) l(k, k) = spec.l_strength * rng.complex_normal();
    } else {
      for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) l(i, j) = spec.l_strength * rng.complex_normal();
      }
    }
  }
  return make_model(hermitian_part(h), hermitian_part(w), l);
}

HermitianOperator mean_field_potential(const HermitianOperator& gamma, const HermitianOperator& w) {
  const Index d = gamma.dim();
  if (w.dim() != d * d) throw ArgumentError("mean_field_potential: dimension mismatch");
  Matrix v = Matrix::Zero(d, d);
  const Matrix& g = gamma.matrix();
  const Matrix& wm = w.matrix();
  // V_{a a'} = sum_{b b''} gamma_{b b''} W_{(a b''),(a' b)}
  for (Index a = 0; a < d; ++a) {
    for (Index a2 = 0; a2 < d; ++a2) {
      Complex acc(0.0, 0.0);
      for (Index b = 0; b < d; ++b) {
        for (Index b2 = 0; b2 < d; ++b2) acc += g(b, b2) * wm(a * d + b2, a2 * d + b);
      }
      v(a, a2) = acc;
    }
  }
  return hermitian_part(v);
}

HermitianOperator mean_field_potential_first_leg(const HermitianOperator& gamma,
                                                 const HermitianOperator& w) {
  const Index d = gamma.dim();
  if (w.dim() != d * d) throw ArgumentError("mean_field_potential: dimension mismatch");
  Matrix v = Matrix::Zero(d, d);
  const Matrix& g = gamma.matrix();
  const Matrix& wm = w.matrix();
  // V_{b b'} = sum_{a a''} gamma_{a a''} W_{(a'' b),(a b')}
  for (Index b = 0; b < d; ++b) {
    for (Index b2 = 0; b2 < d; ++b2) {
      Complex acc(0.0, 0.0);
      for (Index a = 0; a < d; ++a) {
        for (Index a2 = 0; a2 < d; ++a2) acc += g(a, a2) * wm(a2 * d + b, a * d + b2);
      }
      v(b, b2) = acc;
    }
  }
  return hermitian_part(v);
}

HermitianOperator n_body_hamiltonian(const LindbladModel& model, int n, Index cap) {
  const ManyBodySpace space(model.site_dim, n, cap);
  Matrix h = Matrix::Zero(space.total_dim(), space.total_dim());
  for (int j = 1; j <= n; ++j) h += embed_one_body(model.h.matrix(), j, space);
  if (n >= 2) {
    const double scale = 1.0 / (n - 1);
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) h += scale * embed_two_body(model.w.matrix(), i, j, space);
    }
  }
  return hermitian_part(h);
}

Matrix dissipator(const Matrix& l, const Matrix& a) {
  if (l.rows() != a.rows() || l.cols() != a.cols()) throw ArgumentError("dissipator: dimension mismatch");
  const Matrix ldl = l.adjoint() * l;
  return l * a * l.adjoint() - 0.5 * (ldl * a + a * ldl);
}

namespace {

const Complex kI(0.0, 1.0);

// rhs(G) = K G + G K* + sum_j L_j G L_j*, with K = -iH - (1/2) sum_j L_j* L_j.
struct NBodyGenerator {
  Matrix k;
  std::vector<Matrix> jumps;

  NBodyGenerator(const LindbladModel& model, int n, Index cap) {
    const ManyBodySpace space(model.site_dim, n, cap);
    k = -kI * n_body_hamiltonian(model, n, cap).matrix();
    if (!model.is_closed()) {
      for (int j = 1; j <= n; ++j) {
        Matrix lj = embed_one_body(model.l, j, space);
        k -= 0.5 * (lj.adjoint() * lj);
        jumps.push_back(std::move(lj));
      }
    }
  }

  Matrix operator()(const Matrix& g) const {
    Matrix out = k * g + g * k.adjoint();
    for (const Matrix& lj : jumps) out += lj * g * lj.adjoint();
    return out;
  }
};

}  // namespace

Matrix lindblad_rhs(const Matrix& gamma, const LindbladModel& model, int n, Index cap) {
  const NBodyGenerator gen(model, n, cap);
  if (gamma.rows() != gen.k.rows() || gamma.cols() != gen.k.cols()) {
    throw ArgumentError("lindblad_rhs: dimension mismatch");
  }
  // Written out without assuming Gamma Hermitian.
  Matrix out = gen.k * gamma + gamma * gen.k.adjoint();
  for (const Matrix& lj : gen.jumps) out += lj * gamma * lj.adjoint();
  return out;
}

Matrix hartree_rhs(const Matrix& gamma, const LindbladModel& model) {
  if (gamma.rows() != model.site_dim || gamma.cols() != model.site_dim) {
    throw ArgumentError("hartree_rhs: dimension mismatch");
  }
  const Matrix v = mean_field_potential(hermitian_part(gamma), model.w).matrix();
  const Matrix heff = model.h.matrix() + v;
  Matrix out = -kI * (heff * gamma - gamma * heff);
  if (!model.is_closed()) out += dissipator(model.l, gamma);
  return out;
}

double default_dt(const LindbladModel& model, int n, Index cap) {
  const double hn = operator_norm(n_body_hamiltonian(model, n, cap));
  return 1e-3 * std::min(1.0, hn > 0.0 ? 1.0 / hn : 1.0);
}

Trajectory integrate(RhsKind kind, const HermitianOperator& initial, const LindbladModel& model,
                     int n, double t_final, const IntegratorConfig& config, Index cap) {
  if (!(config.dt > 0.0)) throw ArgumentError("integrate: dt must be positive");
  if (!(t_final >= 0.0)) throw ArgumentError("integrate: final time must be >= 0");
  if (config.store_stride < 1) throw ArgumentError("integrate: store_stride must be >= 1");

  std::function<Matrix(const Matrix&)> rhs;
  if (kind == RhsKind::NBody) {
    const ManyBodySpace space(model.site_dim, n, cap);
    if (initial.dim() != space.total_dim()) throw ArgumentError("integrate: initial state has wrong dimension");
    auto gen = std::make_shared<NBodyGenerator>(model, n, cap);
    rhs = [gen](const Matrix& g) { return (*gen)(g); };
  } else {
    if (initial.dim() != model.site_dim) throw ArgumentError("integrate: initial state has wrong dimension");
    rhs = [&model](const Matrix& g) { return hartree_rhs(g, model); };
  }

  const long steps = std::max(0L, std::lround(t_final / config.dt));
  const double dt = steps > 0 ? t_final / static_cast<double>(steps) : config.dt;

  Trajectory traj;
  traj.dt = dt;
  Matrix state = initial.matrix();
  auto diagnose = [&](const Matrix& x, double drift, double herm) {
    StepDiagnostics diag;
    diag.trace_drift = drift;
    diag.hermiticity_defect = herm;
    diag.min_eigenvalue = eigenvalues_hermitian(hermitian_part(x).matrix()).minCoeff();
    return diag;
  };
  auto record = [&](double t, const StepDiagnostics& diag) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.diagnostics.push_back(diag);
  };

  StepDiagnostics first = diagnose(state, std::abs(state.trace().real() - 1.0), initial.hermiticity_defect());
  traj.worst_min_eigenvalue = first.min_eigenvalue;
  record(0.0, first);

  for (long step = 1; step <= steps; ++step) {
    const Matrix k1 = rhs(state);
    const Matrix k2 = rhs(state + (0.5 * dt) * k1);
    const Matrix k3 = rhs(state + (0.5 * dt) * k2);
    const Matrix k4 = rhs(state + dt * k3);
    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double herm = hermiticity_defect(state);
    if (config.hermitize_each_step) state = 0.5 * (state + state.adjoint()).eval();
    const double trace = state.trace().real();
    const double drift = std::abs(trace - 1.0);
    if (!(drift <= config.trace_drift_tol)) {  // also catches NaN
      std::ostringstream msg;
      msg << "integrate: trace drift " << drift << " at t = " << step * dt;
      throw TraceDriftError(msg.str());
    }
    if (config.renormalize_trace) state /= trace;

    const StepDiagnostics diag = diagnose(state, drift, herm);
    if (!(diag.min_eigenvalue >= -config.positivity_tol)) {
      std::ostringstream msg;
      msg << "integrate: eigenvalue " << diag.min_eigenvalue << " at t = " << step * dt;
      throw PositivityError(msg.str());
    }
    traj.worst_trace_drift = std::max(traj.worst_trace_drift, drift);
    traj.worst_hermiticity_defect = std::max(traj.worst_hermiticity_defect, herm);
    traj.worst_min_eigenvalue = std::min(traj.worst_min_eigenvalue, diag.min_eigenvalue);
    if (step % config.store_stride == 0 || step == steps) {
      record(static_cast<double>(step) * dt, diag);
    }
  }
  return traj;
}

HermitianOperator exact_unitary_flow(const HermitianOperator& h, const HermitianOperator& gamma0,
                                     double t) {
  if (h.dim() != gamma0.dim()) throw ArgumentError("exact_unitary_flow: dimension mismatch");
  const SpectralDecomposition eig = eig_hermitian(h);
  Vector phases(eig.eigenvalues.size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * eig.eigenvalues(k) * t);
  const Matrix u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  return hermitian_part(u * gamma0.matrix() * u.adjoint());
}

StepHalvingEstimate step_halving_estimate(RhsKind kind, const HermitianOperator& initial,
                                          const LindbladModel& model, int n, double t_final,
                                          IntegratorConfig config, Index cap) {
  config.store_stride = 1 << 30;
  const Matrix a = integrate(kind, initial, model, n, t_final, config, cap).states.back();
  config.dt *= 0.5;
  const Matrix b = integrate(kind, initial, model, n, t_final, config, cap).states.back();
  config.dt *= 0.5;
  const Matrix c = integrate(kind, initial, model, n, t_final, config, cap).states.back();
  StepHalvingEstimate est;
  est.diff_coarse = operator_norm(Matrix(a - b));
  est.diff_fine = operator_norm(Matrix(b - c));
  est.observed_order = (est.diff_fine > 0.0 && est.diff_coarse > 0.0)
                           ? std::log2(est.diff_coarse / est.diff_fine)
                           : 0.0;
  return est;
}

}  // namespace qrelent
