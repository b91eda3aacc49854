#include "qrelent/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrelent/combinatorics.hpp"
#include "qrelent/entropy.hpp"
#include "qrelent/fluctuation.hpp"
#include "qrelent/random.hpp"
#include "qrelent/semiclassical.hpp"
#include "qrelent/transport.hpp"

namespace qrelent {
namespace {

using Cells = std::vector<std::string>;

std::string num(double x) { return format_number(x); }
std::string num(long x) { return format_number(static_cast<std::int64_t>(x)); }
std::string num(int x) { return format_number(static_cast<std::int64_t>(x)); }

/// Accumulates rows and the pass bookkeeping shared by every kind.
class Report {
 public:
  Report(const Scenario& s, Cells columns) : table_(std::move(columns)), id_(s.id) {
    table_.add_comment(std::string(kScenarioSchema) + " scenario=" + s.id +
                       " seed=" + std::to_string(s.seed) + " kind=" + to_string(s.kind));
  }

  /// Appends id, cells, margin and pass = margin >= -tolerance.
  void add(Cells cells, double margin, double tolerance) {
    const bool pass = margin >= -tolerance;
    cells.insert(cells.begin(), id_);
    cells.push_back(num(margin));
    cells.push_back(format_flag(pass));
    table_.add_row(std::move(cells));
    ++rows_;
    if (!pass) ++failed_;
  }

  /// Generic check row: check,index,measured,bound,tolerance with margin = bound - measured.
  void check(const std::string& name, long index, double measured, double bound, double tolerance) {
    add({name, num(index), num(measured), num(bound), num(tolerance)}, bound - measured, tolerance);
  }

  void note(const std::string& line) { table_.add_comment(line); }

  RunResult finish() const {
    RunResult r;
    r.csv = table_.str();
    r.table = table_;
    r.rows = rows_;
    r.failed_rows = failed_;
    r.exit_code = failed_ == 0 ? kExitPass : kExitAssertion;
    return r;
  }

 private:
  CsvTable table_;
  std::string id_;
  long rows_ = 0;
  long failed_ = 0;
};

const Cells kCheckColumns{"scenario", "check", "index", "measured", "bound", "tolerance", "margin", "pass"};

IntegratorConfig integrator_config(const Scenario& s) {
  IntegratorConfig c;
  c.dt = s.dt;
  c.store_stride = s.store_stride;
  c.positivity_tol = s.tolerances.positivity;
  c.trace_drift_tol = s.tolerances.trace_drift;
  return c;
}

HermitianOperator initial_site_state(const Scenario& s, std::uint64_t stream) {
  CounterRng rng(derive_seed(s.seed, stream));
  return random_density_with_floor(rng, s.model.site_dim, s.initial_min_eigenvalue);
}

/// Model of sample k: the scenario model for fixed builders, a fresh draw for "random".
LindbladModel sample_model(const Scenario& s, int k) {
  if (s.model.builder != "random") return build_model(s);
  RandomModelSpec spec;
  spec.site_dim = s.model.site_dim;
  spec.seed = derive_seed(s.seed, 1000 + static_cast<std::uint64_t>(k));
  spec.w_norm = s.model.w_norm;
  spec.h_norm = s.model.h_norm;
  spec.l_strength = s.model.l_strength;
  return random_model(spec);
}

RunResult run_simulate(const Scenario& s) {
  Report rep(s, {"scenario", "step", "t", "relative_entropy", "min_eigenvalue", "trace_drift",
                 "margin", "pass"});
  const LindbladModel model = build_model(s);
  const HermitianOperator g0 = initial_site_state(s, 2);
  const IntegratorConfig cfg = integrator_config(s);
  const Trajectory many = integrate(RhsKind::NBody, tensor_power(g0, s.n, s.cap), model, s.n,
                                    s.t_final, cfg, s.cap);
  const Trajectory mean = integrate(RhsKind::Hartree, g0, model, s.n, s.t_final, cfg, s.cap);
  const ManyBodySpace space(model.site_dim, s.n, s.cap);
  for (std::size_t k = 0; k < many.states.size(); ++k) {
    const HermitianOperator gamma = hermitian_part(many.states[k]);
    const HermitianOperator site = hermitian_part(mean.states[k]);
    const EntropyValue ent = relative_entropy_to_product(gamma, site, space);
    const auto& diag = many.diagnostics[k];
    const long step = std::lround(many.times[k] / many.dt);
    rep.add({num(step), num(many.times[k]), num(ent.infinite ? INFINITY : ent.value),
             num(diag.min_eigenvalue), num(diag.trace_drift)},
            diag.min_eigenvalue + s.tolerances.positivity, 0.0);
  }
  return rep.finish();
}

RunResult run_theorem3(const Scenario& s) {
  Report rep(s, {"scenario", "n", "t", "relative_entropy", "bound_sup", "bound_explicit",
                 "bound_theorem1", "margin", "pass"});
  const LindbladModel model = build_model(s);
  const HermitianOperator g0 = initial_site_state(s, 2);
  const Theorem3Report t3 = theorem3_verify(model, s.n, tensor_power(g0, s.n, s.cap), g0,
                                            s.t_final, integrator_config(s), s.cap);
  rep.note("m0=" + num(t3.m0) + " w_norm=" + num(t3.w_norm) + " sup_x_norm=" + num(t3.sup_x_norm));
  for (const auto& row : t3.rows) {
    const double margin = std::min({row.bound_sup - row.entropy, row.bound_explicit - row.entropy,
                                    row.bound_theorem1 - row.entropy});
    rep.add({num(s.n), num(row.t), num(row.entropy), num(row.bound_sup), num(row.bound_explicit),
             num(row.bound_theorem1)},
            margin, s.tolerances.margin);
  }
  return rep.finish();
}

RunResult run_cancellation(const Scenario& s) {
  Report rep(s, {"scenario", "n", "sample", "covered_patterns", "uncovered_patterns",
                 "worst_ratio", "margin", "pass"});
  for (int k = 0; k < s.samples; ++k) {
    const LindbladModel model = sample_model(s, k);
    CounterRng rng(derive_seed(s.seed, 2000 + static_cast<std::uint64_t>(k)));
    const HermitianOperator gamma =
        random_density_with_floor(rng, s.model.site_dim, s.initial_min_eigenvalue);
    for (int n = s.n_min; n <= s.n_max; ++n) {
      const CancellationSweep sweep = cancellation_sweep(gamma, model.w, n, s.m_max, s.cap);
      rep.add({num(n), num(k), num(sweep.covered_patterns), num(sweep.uncovered_patterns),
               num(sweep.worst_ratio)},
              -sweep.worst_ratio, s.tolerances.margin);
    }
  }
  return rep.finish();
}

/// Symmetric state sum_a p_a rho_a^{(x)N}.
HermitianOperator product_mixture(CounterRng& rng, Index d, int n, int terms, Index cap) {
  const Index dim = static_cast<Index>(std::llround(std::pow(static_cast<double>(d), n)));
  Matrix acc = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (int a = 0; a < terms; ++a) {
    const double p = rng.uniform(0.1, 1.0);
    acc += p * tensor_power(random_density(rng, d, 0.0), n, cap).matrix();
    total += p;
  }
  return hermitian_part(acc / total);
}

double relative_difference(const Matrix& a, const Matrix& b) {
  return operator_norm(Matrix(a - b)) / std::max(1.0, operator_norm(a));
}

RunResult run_identities(const Scenario& s) {
  Report rep(s, kCheckColumns);
  const auto& tol = s.tolerances;
  const Index d = s.model.site_dim;
  const int n = s.n;
  const ManyBodySpace space(d, n, s.cap);
  const Index pair_dim = d * d;
  for (int k = 0; k < s.samples; ++k) {
    CounterRng rng(derive_seed(s.seed, 3000 + static_cast<std::uint64_t>(k)));

    // Frechet derivative of log against the resolvent integral and finite differences.
    {
      const HermitianOperator x = random_density(rng, pair_dim, 0.05);
      const HermitianOperator b = random_hermitian(rng, pair_dim);
      const HermitianOperator dk = frechet_log(x, b);
      const HermitianOperator quad = frechet_log_quadrature(x, b, 64);
      const double h = 1e-5;
      const Matrix plus = matrix_function(hermitian_part(x.matrix() + h * b.matrix()), MatrixFunction::Log);
      const Matrix minus = matrix_function(hermitian_part(x.matrix() - h * b.matrix()), MatrixFunction::Log);
      const Matrix fd = (plus - minus) / (2.0 * h);
      rep.check("frechet_quadrature", k, relative_difference(dk, quad), tol.frechet_quadrature, 0.0);
      rep.check("frechet_finite_difference", k, relative_difference(dk, fd),
                tol.frechet_finite_difference, 0.0);
    }

    const LindbladModel model = sample_model(s, k);
    const HermitianOperator gamma = random_density_with_floor(rng, d, s.initial_min_eigenvalue);

    // i[B, log X] = D log_X (i[B, X]).
    {
      const HermitianOperator x = random_density(rng, pair_dim, 0.05);
      const HermitianOperator b = random_hermitian(rng, pair_dim);
      const Complex i_unit(0.0, 1.0);
      const Matrix lhs = i_unit * commutator(b.matrix(), matrix_function(x, MatrixFunction::Log).matrix());
      const HermitianOperator dir = hermitian_part(i_unit * commutator(b.matrix(), x.matrix()));
      const double defect = operator_norm(Matrix(lhs - frechet_log(x, dir).matrix()));
      rep.check("commutator_log_identity", k, defect, tol.commutator_identity, 0.0);
    }

    // (N-1)^{-1} sum_{i != j} X_ij against -i[delta H_N, log gamma^{(x)N}].
    {
      const HermitianOperator x = fluctuation_operator(gamma, model.w);
      Matrix sum = Matrix::Zero(space.total_dim(), space.total_dim());
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          if (i != j) sum += embed_two_body(x.matrix(), i, j, space);
        }
      }
      sum /= static_cast<double>(n - 1);
      const HermitianOperator comm = entropy_production_operator_commutator(gamma, model.w, n, s.cap);
      rep.check("production_operator_identity", k, relative_difference(sum, comm),
                tol.commutator_identity, 0.0);
    }

    {
      const HermitianOperator x = random_hermitian(rng, pair_dim);
      const HermitianOperator y = random_hermitian(rng, pair_dim);
      const InequalityCheck gt = golden_thompson_check(x, y);
      rep.check("golden_thompson", k, gt.lhs, gt.rhs, tol.margin);
    }

    {
      const HermitianOperator rho = random_density(rng, pair_dim, 0.0);
      const HermitianOperator sigma = random_density(rng, pair_dim, 0.02);
      const HermitianOperator a = random_hermitian(rng, pair_dim);
      const double lambda = rng.uniform(0.1, 2.0);
      const InequalityCheck ei = entropy_inequality_check(rho, sigma, a, lambda);
      rep.check("entropy_inequality", k, ei.lhs, ei.rhs, tol.margin);
    }

    // Pinsker and block subadditivity: simulated states on odd samples, random ones on even.
    const IntegratorConfig cfg = integrator_config(s);
    const Trajectory mean = integrate(RhsKind::Hartree, gamma, model, n, s.t_final, cfg, s.cap);
    const int block = 1 + k % n;
    if (k % 2 == 1) {
      const Trajectory many = integrate(RhsKind::NBody, tensor_power(gamma, n, s.cap), model, n,
                                        s.t_final, cfg, s.cap);
      const HermitianOperator big = hermitian_part(many.states.back());
      const HermitianOperator site = hermitian_part(mean.states.back());
      const HermitianOperator prod = tensor_power(site, n, s.cap);
      const InequalityCheck pk = pinsker_check(big, prod);
      rep.check("pinsker", k, pk.lhs, pk.rhs, tol.margin);
      const InequalityCheck bs = block_subadditivity_check(big, site, block, space);
      rep.check("block_subadditivity", k, bs.lhs, bs.rhs, tol.margin);
      const InequalityCheck eq = block_subadditivity_check(big, site, n, space);
      rep.check("block_equality", k, std::abs(eq.lhs - eq.rhs), 0.0, tol.margin);
    } else {
      const HermitianOperator a = random_density(rng, space.total_dim(), 0.0);
      const HermitianOperator b = random_density(rng, space.total_dim(), 0.0);
      const InequalityCheck pk = pinsker_check(a, b);
      rep.check("pinsker", k, pk.lhs, pk.rhs, tol.margin);
      const HermitianOperator mix = product_mixture(rng, d, n, 3, s.cap);
      const HermitianOperator site = random_density(rng, d, 0.05);
      const InequalityCheck bs = block_subadditivity_check(mix, site, block, space);
      rep.check("block_subadditivity", k, bs.lhs, bs.rhs, tol.margin);
      const InequalityCheck eq = block_subadditivity_check(mix, site, n, space);
      rep.check("block_equality", k, std::abs(eq.lhs - eq.rhs), 0.0, tol.margin);
    }

    // ||X(gamma_t)|| <= 4 ||W|| / m0 and lambda_min(gamma_t) >= m0 along the Hartree flow.
    {
      const XNormReport xr = x_norm_bound_check(mean, model.w);
      rep.check("x_norm", k, xr.sup_x_norm, 4.0 * xr.w_norm / xr.m0, tol.x_norm);
      rep.check("x_floor", k, -xr.worst_floor_margin, 0.0, tol.x_norm);
    }

    {
      const PartitionBoundResult pb = moment_partition_bound_at_log2(gamma, model.w, n, 8.0, s.cap);
      rep.check("partition_bound", k, pb.value, pb.bound, tol.margin);
    }
  }
  return rep.finish();
}

RunResult run_enumerate(const Scenario& s) {
  Report rep(s, {"scenario", "m", "n", "exact", "stirling_sum", "c0_bound", "power_bound",
                 "regime", "margin", "pass"});
  for (int m = 1; m <= s.m_max; ++m) {
    for (int n = s.n_min; n <= s.n_max; ++n) {
      const CombinatoricsBound b = bound_check(m, n);
      const BigInt& top = b.case_small_m ? b.c0_bound : b.power_bound;
      const BigInt margin = top - b.exact;
      rep.add({num(m), num(n), format_number(b.exact), format_number(b.stirling_sum),
               format_number(b.c0_bound), format_number(b.power_bound),
               b.case_small_m ? "m<=n" : "m>n"},
              b.chain_holds ? margin.convert_to<double>() : -INFINITY, 0.0);
    }
  }
  return rep.finish();
}

RunResult run_semiclassical(const Scenario& s) {
  Report rep(s, {"scenario", "n", "hbar_crossing", "envelope", "hbar_sqrt", "f_at_sqrt",
                 "g_at_sqrt", "scaled_envelope", "margin", "pass"});
  const std::vector<EnvelopeRow> rows = uniform_envelope(s.bounds, s.bounds.t_final, s.n_grid);
  for (const auto& r : rows) {
    rep.add({num(r.n), num(r.hbar_crossing), num(r.envelope), num(r.hbar_sqrt), num(r.f_at_sqrt),
             num(r.g_at_sqrt), num(r.scaled)},
            r.hbar_sqrt - r.hbar_crossing, 0.0);
  }
  return rep.finish();
}

/// Largest |p| of test states: the window edge minus five coherent-state widths.
double test_momentum(const TorusHilbert& space) {
  const double edge = 2.0 * std::numbers::pi * space.hbar() * space.cutoff() - 5.0 * std::sqrt(space.hbar());
  if (!(edge > 0.0)) throw ArgumentError("quantization: fourier_cutoff too small for hbar");
  return std::min(0.5, edge);
}

double window_momentum(const TorusHilbert& space) {
  return 2.0 * std::numbers::pi * space.hbar() * space.cutoff() + 5.0 * std::sqrt(space.hbar());
}

DiscreteMeasure random_measure(CounterRng& rng, const std::vector<PhasePoint>& shared, int own,
                               double p_max) {
  DiscreteMeasure mu;
  mu.points = shared;
  for (int a = 0; a < own; ++a) mu.points.push_back({rng.uniform(), rng.uniform(-p_max, p_max)});
  double total = 0.0;
  for (std::size_t a = 0; a < mu.points.size(); ++a) {
    mu.masses.push_back(rng.uniform(0.05, 1.0));
    total += mu.masses.back();
  }
  for (double& m : mu.masses) m /= total;
  return mu;
}

RunResult run_quantization(const Scenario& s) {
  Report rep(s, kCheckColumns);
  const auto& tol = s.tolerances;
  const TorusHilbert space(s.hbar, s.fourier_cutoff);
  const double p_test = test_momentum(space);
  const double p_window = window_momentum(space);
  const PhaseSpaceGrid grid(s.grid, s.grid, p_window);
  rep.note("hbar=" + num(s.hbar) + " fourier_cutoff=" + num(s.fourier_cutoff) +
           " p_window=" + num(p_window) + " grid=" + num(s.grid));

  // Resolution of the identity along a refinement ladder ending at the scenario grid.
  {
    const int ladder[] = {s.grid / 4, (3 * s.grid) / 8, s.grid / 2, (3 * s.grid) / 4, s.grid};
    double previous = INFINITY;
    for (int g : ladder) {
      const double defect = resolution_identity_check(space, PhaseSpaceGrid(g, g, p_window));
      if (std::isfinite(previous)) rep.check("resolution_step", g, defect - previous, 0.0, tol.roundoff);
      previous = defect;
    }
    rep.check("resolution", s.grid, previous, tol.resolution, 0.0);
  }

  for (int k = 0; k < s.samples; ++k) {
    CounterRng rng(derive_seed(s.seed, 4000 + static_cast<std::uint64_t>(k)));
    const PhasePoint z{rng.uniform(), rng.uniform(-p_test, p_test)};
    const Vector psi = coherent_state(z, space);
    rep.check("coherent_norm", k, std::abs(psi.norm() - 1.0), tol.coherent_norm, 0.0);

    Matrix state = Matrix::Zero(space.dim(), space.dim());
    for (int a = 0; a < 3; ++a) {
      const Vector v = coherent_state({rng.uniform(), rng.uniform(-p_test, p_test)}, space);
      state += (v * v.adjoint()) / 3.0;
    }
    const DiscreteMeasure h = husimi(state, space, grid);
    double mass = 0.0;
    double low = INFINITY;
    for (double m : h.masses) {
      mass += m;
      low = std::min(low, m);
    }
    rep.check("husimi_nonnegative", k, -low, 0.0, tol.roundoff);
    rep.check("husimi_mass", k, std::abs(mass - 1.0), tol.husimi_mass, 0.0);

    std::vector<PhasePoint> shared;
    for (int a = 0; a < 3; ++a) shared.push_back({rng.uniform(), rng.uniform(-p_test, p_test)});
    const DiscreteMeasure mu = random_measure(rng, shared, 2, p_test);
    const DiscreteMeasure nu = random_measure(rng, shared, 2, p_test);

    const HermitianOperator op = toeplitz(mu, space);
    rep.check("toeplitz_trace", k, std::abs(op.matrix().trace().real() - 1.0), tol.toeplitz_trace, 0.0);
    rep.check("toeplitz_psd", k, -eigenvalues_hermitian(op.matrix()).minCoeff(), 0.0, tol.roundoff);

    DiscreteMeasure point;
    point.points = {z};
    point.masses = {1.0};
    rep.check("duality_point", k, duality_check(point, space, grid), tol.duality, 0.0);

    const double d1 = dist1(mu, nu);
    rep.check("dist1_vs_tv", k, d1, total_variation(mu, nu), tol.roundoff);
    rep.check("dist1_vs_mk2", k, d1, dist_mk2(mu, nu), tol.roundoff);
  }
  return rep.finish();
}

RunResult dispatch(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::Simulate: return run_simulate(s);
    case ScenarioKind::VerifyTheorem3: return run_theorem3(s);
    case ScenarioKind::VerifyCancellation: return run_cancellation(s);
    case ScenarioKind::VerifyIdentities: return run_identities(s);
    case ScenarioKind::Enumerate: return run_enumerate(s);
    case ScenarioKind::SemiclassicalBounds: return run_semiclassical(s);
    case ScenarioKind::QuantizationChecks: return run_quantization(s);
  }
  throw ArgumentError("run_scenario: unknown kind");
}

}  // namespace

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const ScenarioError*>(&e)) return "ScenarioError";
  if (dynamic_cast<const CapacityError*>(&e)) return "CapacityError";
  if (dynamic_cast<const ArgumentError*>(&e)) return "ArgumentError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const PositivityError*>(&e)) return "PositivityError";
  if (dynamic_cast<const TraceDriftError*>(&e)) return "TraceDriftError";
  if (dynamic_cast<const TruncationError*>(&e)) return "TruncationError";
  if (dynamic_cast<const ConsistencyError*>(&e)) return "ConsistencyError";
  if (dynamic_cast<const InfeasibleError*>(&e)) return "InfeasibleError";
  if (dynamic_cast<const NumericalError*>(&e)) return "NumericalError";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  return dynamic_cast<const ArgumentError*>(&e) ? kExitUsage : kExitNumerical;
}

RunResult run_scenario(const Scenario& scenario) {
  validate_scenario(scenario);
  try {
    return dispatch(scenario);
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = exit_code_for(e);
    r.error = error_name(e) + ": " + e.what();
    CsvTable table({"scenario", "error", "message"});
    table.add_comment(std::string(kScenarioSchema) + " scenario=" + scenario.id +
                      " seed=" + std::to_string(scenario.seed) + " kind=" + to_string(scenario.kind));
    std::string message = e.what();
    std::replace(message.begin(), message.end(), ',', ';');
    std::replace(message.begin(), message.end(), '\n', ' ');
    table.add_row({scenario.id, error_name(e), message});
    r.csv = table.str();
    r.table = table;
    r.rows = 1;
    r.failed_rows = 1;
    return r;
  }
}

}  // namespace qrelent
