#include "qrelent/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>

#include "qrelent/combinatorics.hpp"
#include "qrelent/fluctuation.hpp"
#include "qrelent/harness.hpp"
#include "qrelent/random.hpp"
#include "qrelent/semiclassical.hpp"

namespace qrelent {
namespace {

double to_double(const std::string& cell) { return std::strtod(cell.c_str(), nullptr); }

/// Rows of a harness table, optionally restricted to some values of the "check" column.
struct RowView {
  const CsvTable& table;
  std::set<std::string> checks;

  bool selected(std::size_t k) const {
    return checks.empty() || checks.count(table.cell(k, "check")) > 0;
  }
  long count() const {
    long c = 0;
    for (std::size_t k = 0; k < table.rows(); ++k) c += selected(k);
    return c;
  }
  long failed() const {
    long f = 0;
    for (std::size_t k = 0; k < table.rows(); ++k) f += selected(k) && table.cell(k, "pass") != "1";
    return f;
  }
  double max_of(const std::string& column) const {
    double m = -INFINITY;
    for (std::size_t k = 0; k < table.rows(); ++k) {
      if (selected(k)) m = std::max(m, to_double(table.cell(k, column)));
    }
    return m;
  }
  double min_of(const std::string& column) const {
    double m = INFINITY;
    for (std::size_t k = 0; k < table.rows(); ++k) {
      if (selected(k)) m = std::min(m, to_double(table.cell(k, column)));
    }
    return m;
  }
};

class SuiteRunner {
 public:
  explicit SuiteRunner(const SuiteOptions& options) : opt_(options) {}

  CriterionResult run(const CriterionInfo& info) {
    CriterionResult r;
    r.info = info;
    const auto start = std::chrono::steady_clock::now();
    try {
      switch (info.id) {
        case 1: cancellation(r); break;
        case 2: combinatorics(r); break;
        case 3: production_identity(r); break;
        case 4: theorem3(r); break;
        case 5: identities(r, {"frechet_quadrature", "frechet_finite_difference",
                               "commutator_log_identity", "production_operator_identity",
                               "golden_thompson", "entropy_inequality"},
                           "frechet_quadrature"); break;
        case 6: identities(r, {"pinsker", "block_subadditivity", "block_equality"}, "block_equality"); break;
        case 7: identities(r, {"x_norm", "x_floor"}, "x_floor"); break;
        case 8: identities(r, {"partition_bound"}, "partition_bound"); break;
        case 9: semiclassical(r); break;
        case 10: quantization(r); break;
        case 11: integrator_order(r); break;
        case 12: determinism(r); break;
        default: throw ArgumentError("unknown criterion");
      }
      r.pass = r.failed == 0 && r.checks > 0;
    } catch (const std::exception& e) {
      r.pass = false;
      r.errored = true;
      r.failed = std::max(1L, r.failed);
      r.note = error_name(e) + ": " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }

 private:
  double tol(double fallback) const { return opt_.override_tolerance.value_or(fallback); }

  Scenario base(const std::string& id, ScenarioKind kind, std::uint64_t stream) const {
    Scenario s;
    s.id = id;
    s.kind = kind;
    s.seed = derive_seed(opt_.seed, stream);
    if (opt_.override_tolerance) s.tolerances.override_all(*opt_.override_tolerance);
    return s;
  }

  /// Runs a scenario, stores its CSV and returns the result.
  RunResult scenario(CriterionResult& r, const Scenario& s) {
    RunResult res = run_scenario(s);
    r.files[s.id + ".csv"] = res.csv;
    if (res.exit_code == kExitNumerical || res.exit_code == kExitUsage) {
      throw NumericalError("scenario " + s.id + " aborted: " + res.error);
    }
    return res;
  }

  static void absorb(CriterionResult& r, const RowView& view) {
    r.checks += view.count();
    r.failed += view.failed();
  }

  static void absorb(CriterionResult& r, const CheckTable& t, const std::string& file) {
    r.checks += t.rows();
    r.failed += t.failed();
    r.files[file] = t.str();
  }

  void cancellation(CriterionResult& r) {
    double worst = 0.0;
    long covered = 0;
    for (Index d : {2, 3}) {
      Scenario s = base("cancellation-d" + std::to_string(d), ScenarioKind::VerifyCancellation, 100 + d);
      s.model.site_dim = d;
      s.initial_min_eigenvalue = 0.05;
      s.n_min = 2;
      s.n_max = 4;
      s.m_max = 3;
      s.samples = 20;
      s.tolerances.margin = tol(1e-10);
      const RunResult res = scenario(r, s);
      const RowView view{res.table, {}};
      absorb(r, view);
      worst = std::max(worst, view.max_of("worst_ratio"));
      for (std::size_t k = 0; k < res.table.rows(); ++k) {
        covered += std::atol(res.table.cell(k, "covered_patterns").c_str());
      }
    }
    if (covered == 0) ++r.failed;
    r.measured = worst;
    r.threshold = tol(1e-10);
    r.note = std::to_string(covered) + " covered patterns";
  }

  void combinatorics(CriterionResult& r) {
    Scenario a = base("enumerate-small", ScenarioKind::Enumerate, 200);
    a.m_max = 3;
    a.n_min = 1;
    a.n_max = 6;
    Scenario b = base("enumerate-m4", ScenarioKind::Enumerate, 201);
    b.m_max = 4;
    b.n_min = 4;
    b.n_max = 4;
    for (const Scenario& s : {a, b}) absorb(r, RowView{scenario(r, s).table, {}});

    CheckTable t("closed forms of |I_{m,N}| for m = 1, 2");
    for (int n = 1; n <= 6; ++n) {
      const BigInt one = enumerate_I(1, n).count;
      const BigInt two = enumerate_I(2, n).count;
      const BigInt expected = 2 * BigInt(n) * BigInt(n - 1);
      t.at_most("count_m1_is_zero", n, one.convert_to<double>(), 0.0);
      t.at_most("count_m2_closed_form", n, one == 0 && two == expected ? 0.0 : 1.0, 0.0);
    }
    absorb(r, t, "enumerate-closed-forms.csv");
    r.measured = static_cast<double>(r.failed);
    r.threshold = 0.0;
    r.note = "exact integer arithmetic";
  }

  void production_identity(CriterionResult& r) {
    const double rel_tol = tol(1e-3);
    const double excess_tol = tol(1e-6);
    RandomModelSpec spec;
    spec.site_dim = 2;
    spec.seed = opt_.seed;
    spec.l_strength = 0.0;
    const LindbladModel closed = random_model(spec);
    CounterRng rng(100 + opt_.seed);
    const HermitianOperator g0 = random_density(rng, 2, 0.2);
    const int n = 3;
    const HermitianOperator big0 = tensor_power(g0, n);

    CheckTable t("closed and Lindblad entropy production, d=2 N=3 T=1");
    double errors[2] = {0.0, 0.0};
    double worst_rel = 0.0;
    const double steps[2] = {1e-3, 5e-4};
    for (int k = 0; k < 2; ++k) {
      IntegratorConfig cfg;
      cfg.dt = steps[k];
      const Trajectory many = integrate(RhsKind::NBody, big0, closed, n, 1.0, cfg);
      const Trajectory mean = integrate(RhsKind::Hartree, g0, closed, n, 1.0, cfg);
      const ProductionReport rep = entropy_production_identity_check(many, mean, closed.w, n);
      errors[k] = rep.max_abs_error;
      if (k == 0) {
        for (std::size_t p = 0; p < rep.points.size(); ++p) {
          const auto& pt = rep.points[p];
          const double rel = std::abs(pt.fd_derivative - pt.production) / std::abs(pt.production);
          t.at_most("pointwise_relative_error", static_cast<long>(p + 1), rel, rel_tol);
        }
        worst_rel = rep.max_pointwise_rel_error;
      }
    }
    t.at_least("halving_ratio", 0, errors[0] / errors[1], 3.5);

    spec.l_strength = 0.3;
    const LindbladModel open = random_model(spec);
    IntegratorConfig cfg;
    const Trajectory many = integrate(RhsKind::NBody, big0, open, n, 1.0, cfg);
    const Trajectory mean = integrate(RhsKind::Hartree, g0, open, n, 1.0, cfg);
    const ProductionReport rep = entropy_production_identity_check(many, mean, open.w, n);
    for (std::size_t p = 0; p < rep.points.size(); ++p) {
      const auto& pt = rep.points[p];
      t.at_most("lindblad_excess", static_cast<long>(p + 1), pt.fd_derivative - pt.production, excess_tol);
    }
    absorb(r, t, "entropy-production.csv");
    r.measured = worst_rel;
    r.threshold = rel_tol;
    r.note = "halving ratio " + format_number(errors[0] / errors[1]) + ", Lindblad excess " +
             format_number(rep.max_excess);
  }

  void theorem3(CriterionResult& r) {
    double worst = INFINITY;
    for (int n : {2, 3, 4}) {
      Scenario s = base("theorem3-n" + std::to_string(n), ScenarioKind::VerifyTheorem3, 400 + n);
      s.model.site_dim = 2;
      s.model.w_norm = 1.0;
      s.model.l_strength = 0.3;
      s.initial_min_eigenvalue = 0.2;
      s.n = n;
      s.t_final = 0.5;
      s.dt = 1e-3;
      s.store_stride = 10;
      const RunResult res = scenario(r, s);
      const RowView view{res.table, {}};
      absorb(r, view);
      worst = std::min(worst, view.min_of("margin"));
    }
    r.measured = worst;
    r.threshold = 0.0;
    r.note = "smallest margin over N = 2, 3, 4";
  }

  const RunResult& identities_run(CriterionResult& r) {
    if (!identities_) {
      Scenario s = base("identities", ScenarioKind::VerifyIdentities, 500);
      s.model.site_dim = 2;
      s.model.l_strength = 0.3;
      s.n = 3;
      s.t_final = 0.5;
      s.dt = 1e-3;
      s.store_stride = 50;
      s.initial_min_eigenvalue = 0.2;
      s.samples = 100;
      identities_ = run_scenario(s);
      identities_file_ = s.id + ".csv";
    }
    r.files[identities_file_] = identities_->csv;
    if (identities_->exit_code == kExitNumerical || identities_->exit_code == kExitUsage) {
      throw NumericalError("scenario identities aborted: " + identities_->error);
    }
    return *identities_;
  }

  void identities(CriterionResult& r, std::set<std::string> checks, const std::string& headline) {
    const RunResult& res = identities_run(r);
    const RowView view{res.table, checks};
    absorb(r, view);
    const RowView head{res.table, {headline}};
    r.measured = head.max_of("measured");
    r.threshold = head.min_of("bound");
    r.note = "worst margin " + format_number(view.min_of("margin"));
  }

  void semiclassical(CriterionResult& r) {
    Scenario s = base("semiclassical-envelope", ScenarioKind::SemiclassicalBounds, 900);
    const RunResult res = scenario(r, s);
    const RowView view{res.table, {}};
    absorb(r, view);

    CheckTable t("f/g monotonicity, crossing accuracy and envelope scaling");
    const double crossing_tol = tol(1e-10);
    CounterRng rng(derive_seed(opt_.seed, 901));
    for (int k = 0; k < 100; ++k) {
      BoundParams p;
      p.c0 = rng.uniform(1.0, 10.0);
      p.c1 = rng.uniform(1e-3, 0.1);
      p.c2 = rng.uniform(1e-3, 0.1);
      p.phi_norm = rng.uniform(0.01, 1.0);
      p.grad_phi_norm = rng.uniform(0.01, 1.0);
      p.lip_grad_phi = rng.uniform(0.0, 1.0);
      p.t_final = 1.0;
      p.n = std::pow(10.0, rng.uniform(3.0, 12.0));
      const double time = rng.uniform(0.1, 1.0);
      double f_rise = -INFINITY;
      double g_drop = -INFINITY;
      int sign_changes = 0;
      double prev_f = 0.0, prev_g = 0.0, prev_diff = 0.0;
      for (int j = 0; j <= 60; ++j) {
        const double hbar = std::pow(10.0, -6.0 + 9.0 * j / 60.0);
        const double lf = log_bound_f(hbar, time, p);
        const double g = bound_g(hbar, time, p);
        const double diff = lf - std::log(g);
        if (j > 0) {
          f_rise = std::max(f_rise, lf - prev_f);
          g_drop = std::max(g_drop, prev_g - g);
          if ((diff > 0.0) != (prev_diff > 0.0)) ++sign_changes;
        }
        prev_f = lf;
        prev_g = g;
        prev_diff = diff;
      }
      t.at_most("f_nonincreasing", k, f_rise, 0.0);
      t.at_most("g_nondecreasing", k, g_drop, 0.0);
      t.at_most("single_crossing", k, sign_changes, 1.0);
      const CrossingResult c = solve_hbar_crossing(p, time);
      t.at_most("crossing_relative_gap", k, c.relative_gap, crossing_tol);
    }
    const double lo = view.min_of("scaled_envelope");
    const double hi = view.max_of("scaled_envelope");
    t.at_most("envelope_scaling_ratio", 0, hi / lo, 10.0);
    absorb(r, t, "semiclassical-scalars.csv");
    r.measured = hi / lo;
    r.threshold = 10.0;
    r.note = "envelope*sqrt(log N) in [" + format_number(lo) + ", " + format_number(hi) + "]";
  }

  void quantization(CriterionResult& r) {
    Scenario s = base("quantization", ScenarioKind::QuantizationChecks, 1000);
    s.hbar = 0.005;
    s.fourier_cutoff = 30;
    s.grid = 64;
    s.samples = 20;
    const RunResult res = scenario(r, s);
    absorb(r, RowView{res.table, {}});

    CheckTable t("coherent-state norms away from the standard window");
    CounterRng rng(derive_seed(opt_.seed, 1001));
    const double norm_tol = tol(1e-12);
    int index = 0;
    for (double hbar : {0.02, 0.1, 0.5}) {
      const int cutoff = static_cast<int>(std::ceil(1.0 / (2.0 * std::numbers::pi * hbar) +
                                                    std::sqrt(30.0 / hbar) / (2.0 * std::numbers::pi))) + 2;
      const TorusHilbert space(hbar, cutoff);
      for (int k = 0; k < 5; ++k) {
        const PhasePoint z{rng.uniform(), rng.uniform(-1.0, 1.0)};
        const Vector psi = coherent_state(z, space);
        t.at_most("coherent_norm", index++, std::abs(psi.norm() - 1.0), norm_tol);
      }
    }
    absorb(r, t, "coherent-norms.csv");
    const RowView res_view{res.table, {"resolution"}};
    r.measured = res_view.max_of("measured");
    r.threshold = res_view.min_of("bound");
    r.note = "resolution defect on the 64x64 grid";
  }

  void integrator_order(CriterionResult& r) {
    RandomModelSpec spec;
    spec.site_dim = 2;
    spec.seed = opt_.seed + 4;
    spec.l_strength = 0.0;
    LindbladModel model = random_model(spec);
    model.w = HermitianOperator::zero(4);
    CounterRng rng(opt_.seed + 8);
    const HermitianOperator g0 = random_density(rng, 2, 0.1);
    const int n = 3;
    const HermitianOperator big0 = tensor_power(g0, n);

    auto final_error = [&](RhsKind kind, const HermitianOperator& init, const HermitianOperator& exact,
                           double dt) {
      IntegratorConfig cfg;
      cfg.dt = dt;
      cfg.store_stride = 1 << 30;
      const Trajectory tr = integrate(kind, init, model, n, 1.0, cfg);
      return operator_norm(Matrix(tr.states.back() - exact.matrix()));
    };

    CheckTable t("RK4 global error against the exact unitary flow, T=1");
    const HermitianOperator exact_many = exact_unitary_flow(n_body_hamiltonian(model, n), big0, 1.0);
    const double e1 = final_error(RhsKind::NBody, big0, exact_many, 0.1);
    const double e2 = final_error(RhsKind::NBody, big0, exact_many, 0.05);
    t.at_least("nbody_ratio_low", 0, e1 / e2, 12.0);
    t.at_most("nbody_ratio_high", 0, e1 / e2, 20.0);

    const HermitianOperator exact_one = exact_unitary_flow(model.h, g0, 1.0);
    const double h1 = final_error(RhsKind::Hartree, g0, exact_one, 0.04);
    const double h2 = final_error(RhsKind::Hartree, g0, exact_one, 0.02);
    t.at_least("hartree_ratio_low", 0, h1 / h2, 12.0);
    t.at_most("hartree_ratio_high", 0, h1 / h2, 20.0);
    absorb(r, t, "integrator-order.csv");
    r.measured = e1 / e2;
    r.threshold = 12.0;
    r.note = "N-body ratio " + format_number(e1 / e2) + ", Hartree ratio " + format_number(h1 / h2);
  }

  void determinism(CriterionResult& r) {
    SuiteOptions again = opt_;
    again.skip_determinism = true;
    again.tags.clear();
    const std::map<std::string, std::string> first = run_suite(again).files();
    const std::map<std::string, std::string> second = run_suite(again).files();
    CheckTable t("byte comparison of two suite runs");
    long index = 0;
    long differing = 0;
    for (const auto& [name, text] : first) {
      const auto it = second.find(name);
      const bool same = it != second.end() && it->second == text;
      differing += !same;
      t.at_most("identical_bytes", index++, same ? 0.0 : 1.0, 0.0);
    }
    if (first.size() != second.size()) t.at_most("same_file_set", 0, 1.0, 0.0);
    absorb(r, t, "determinism.csv");
    r.measured = static_cast<double>(differing);
    r.threshold = 0.0;
    r.note = std::to_string(first.size()) + " files compared";
  }

  SuiteOptions opt_;
  std::optional<RunResult> identities_;
  std::string identities_file_;
};

bool selected(const CriterionInfo& info, const SuiteOptions& opt) {
  if (info.id == 12 && opt.skip_determinism) return false;
  if (opt.tags.empty()) return true;
  for (const auto& tag : opt.tags) {
    if (tag == "c" + std::to_string(info.id)) return true;
    if (std::find(info.tags.begin(), info.tags.end(), tag) != info.tags.end()) return true;
  }
  return false;
}

}  // namespace

const std::vector<CriterionInfo>& suite_catalog() {
  static const std::vector<CriterionInfo> catalog{
      {1, "cancellation-rule", {"fluctuation", "cancellation"}},
      {2, "combinatorial-chain", {"combinatorics"}},
      {3, "entropy-production-identity", {"dynamics", "entropy"}},
      {4, "theorem3-bound", {"dynamics", "gronwall"}},
      {5, "matrix-function-identities", {"linalg", "identities"}},
      {6, "metric-inequalities", {"entropy", "identities"}},
      {7, "x-norm-bound", {"dynamics", "identities"}},
      {8, "partition-function-bound", {"fluctuation", "identities"}},
      {9, "semiclassical-scalars", {"semiclassical"}},
      {10, "quantization-toys", {"semiclassical", "quantization"}},
      {11, "integrator-order", {"dynamics", "integrator"}},
      {12, "determinism", {"determinism"}},
  };
  return catalog;
}

bool SuiteReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

std::map<std::string, std::string> SuiteReport::files() const {
  std::map<std::string, std::string> out;
  for (const auto& c : criteria) out.insert(c.files.begin(), c.files.end());
  out["summary.csv"] = summary_csv;
  return out;
}

SuiteReport run_suite(const SuiteOptions& options) {
  SuiteRunner runner(options);
  SuiteReport report;
  CsvTable summary({"criterion", "name", "checks", "failed", "measured", "threshold", "pass"});
  std::string header = std::string(kScenarioSchema) + " suite seed=" + std::to_string(options.seed);
  if (options.override_tolerance) header += " override_tolerance=" + format_number(*options.override_tolerance);
  summary.add_comment(header);
  for (const auto& info : suite_catalog()) {
    if (!selected(info, options)) continue;
    CriterionResult r = runner.run(info);
    summary.add_row({std::to_string(info.id), info.name, std::to_string(r.checks),
                     std::to_string(r.failed), format_number(r.measured),
                     format_number(r.threshold), format_flag(r.pass)});
    report.criteria.push_back(std::move(r));
  }
  report.summary_csv = summary.str();
  return report;
}

}  // namespace qrelent
