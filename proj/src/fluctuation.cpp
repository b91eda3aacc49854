#include "qrelent/fluctuation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

const Complex kI(0.0, 1.0);

Matrix log_of_faithful(const HermitianOperator& gamma, double floor) {
  return matrix_function(gamma, MatrixFunction::Log, floor).matrix();
}

// Embedded X_ij for every ordered pair i != j, in lexicographic order.
struct PairTable {
  std::vector<std::pair<int, int>> pairs;
  std::vector<Matrix> embedded;

  PairTable(const Matrix& x, const ManyBodySpace& space) {
    for (int i = 1; i <= space.legs(); ++i) {
      for (int j = 1; j <= space.legs(); ++j) {
        if (i == j) continue;
        pairs.emplace_back(i, j);
        embedded.push_back(embed_two_body(x, i, j, space));
      }
    }
  }
};

// tr(A B) in O(D^2).
Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace

HermitianOperator fluctuation_operator(const HermitianOperator& gamma, const HermitianOperator& w,
                                       double eigenvalue_floor) {
  const Index d = gamma.dim();
  if (w.dim() != d * d) throw ArgumentError("fluctuation_operator: dimension mismatch");
  const Matrix log_gamma = log_of_faithful(gamma, eigenvalue_floor);
  const Matrix v = mean_field_potential(gamma, w).matrix();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix centered = w.matrix() - kron(v, id);
  const Matrix lg = kron(log_gamma, id);
  return hermitian_part(-kI * commutator(centered, lg));
}

HermitianOperator hamiltonian_defect(const HermitianOperator& gamma, const HermitianOperator& w,
                                     int n, Index cap) {
  const ManyBodySpace space(gamma.dim(), n, cap);
  if (w.dim() != gamma.dim() * gamma.dim()) throw ArgumentError("hamiltonian_defect: dimension mismatch");
  const Matrix v = mean_field_potential(gamma, w).matrix();
  Matrix dh = Matrix::Zero(space.total_dim(), space.total_dim());
  if (n >= 2) {
    const double scale = 1.0 / (n - 1);
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) dh += scale * embed_two_body(w.matrix(), i, j, space);
    }
  }
  for (int j = 1; j <= n; ++j) dh -= embed_one_body(v, j, space);
  return hermitian_part(dh);
}

HermitianOperator entropy_production_operator_commutator(const HermitianOperator& gamma,
                                                         const HermitianOperator& w, int n,
                                                         Index cap) {
  const ManyBodySpace space(gamma.dim(), n, cap);
  const Matrix log_gamma = log_of_faithful(gamma, kEigenvalueFloor);
  Matrix log_sigma = Matrix::Zero(space.total_dim(), space.total_dim());
  for (int j = 1; j <= n; ++j) log_sigma += embed_one_body(log_gamma, j, space);
  const Matrix dh = hamiltonian_defect(gamma, w, n, cap).matrix();
  return hermitian_part(-kI * commutator(dh, log_sigma));
}

HermitianOperator entropy_production_operator(const HermitianOperator& gamma,
                                              const HermitianOperator& w, int n, Index cap,
                                              double identity_tol) {
  if (n < 2) throw ArgumentError("entropy_production_operator: need at least two particles");
  const ManyBodySpace space(gamma.dim(), n, cap);
  const Matrix x = fluctuation_operator(gamma, w).matrix();
  Matrix a = Matrix::Zero(space.total_dim(), space.total_dim());
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j) a += embed_two_body(x, i, j, space);
    }
  }
  a /= static_cast<double>(n - 1);
  const Matrix other = entropy_production_operator_commutator(gamma, w, n, cap).matrix();
  const double scale = std::max(1.0, operator_norm(hermitian_part(a)));
  const double gap = operator_norm(Matrix(a - other));
  if (gap > identity_tol * scale) {
    std::ostringstream msg;
    msg << "entropy_production_operator: sum of X_ij and -i[dH, log sigma] differ by " << gap;
    throw ConsistencyError(msg.str());
  }
  return hermitian_part(a);
}

IndexPattern::IndexPattern(std::vector<int> i_, std::vector<int> j_)
    : i(std::move(i_)), j(std::move(j_)) {
  if (i.size() != j.size() || i.empty()) {
    throw ArgumentError("IndexPattern: I and J must be nonempty and of equal length");
  }
  for (std::size_t nu = 0; nu < i.size(); ++nu) {
    if (i[nu] == j[nu]) throw ArgumentError("IndexPattern: i_nu must differ from j_nu");
  }
}

bool cancellation_rule_applies(const IndexPattern& p) {
  const int m = p.m();
  auto occurrences = [&](int value) {
    int count = 0;
    for (int nu = 0; nu < m; ++nu) {
      count += (p.i[static_cast<std::size_t>(nu)] == value);
      count += (p.j[static_cast<std::size_t>(nu)] == value);
    }
    return count;
  };
  // A value appearing once in the concatenation (I, J) is a lone i_nu or j_nu.
  for (int nu = 0; nu < m; ++nu) {
    if (occurrences(p.i[static_cast<std::size_t>(nu)]) == 1) return true;
    if (occurrences(p.j[static_cast<std::size_t>(nu)]) == 1) return true;
  }
  return false;
}

std::complex<double> mixed_moment(const HermitianOperator& gamma, const HermitianOperator& w,
                                  const IndexPattern& pattern, int n, Index cap) {
  const ManyBodySpace space(gamma.dim(), n, cap);
  for (int nu = 0; nu < pattern.m(); ++nu) {
    for (int leg : {pattern.i[static_cast<std::size_t>(nu)], pattern.j[static_cast<std::size_t>(nu)]}) {
      if (leg < 1 || leg > n) throw ArgumentError("mixed_moment: pattern index outside 1..N");
    }
  }
  const Matrix x = fluctuation_operator(gamma, w).matrix();
  Matrix acc = tensor_power(gamma.matrix(), n, cap);
  for (int nu = 0; nu < pattern.m(); ++nu) {
    acc = apply_two_body_right(acc, x, pattern.i[static_cast<std::size_t>(nu)],
                               pattern.j[static_cast<std::size_t>(nu)], space);
  }
  return acc.trace();
}

CancellationResult cancellation_check(const HermitianOperator& gamma, const HermitianOperator& w,
                                      const IndexPattern& pattern, int n, Index cap) {
  if (!cancellation_rule_applies(pattern)) {
    throw ArgumentError("cancellation_check: pattern has no lone index; the rule makes no prediction");
  }
  CancellationResult out;
  out.moment = mixed_moment(gamma, w, pattern, n, cap);
  const double xn = operator_norm(fluctuation_operator(gamma, w));
  out.scale = std::max(1.0, std::pow(xn, pattern.m()));
  return out;
}

CancellationSweep cancellation_sweep(const HermitianOperator& gamma, const HermitianOperator& w,
                                     int n, int m_max, Index cap) {
  if (m_max < 1) throw ArgumentError("cancellation_sweep: m_max must be positive");
  if (n < 2) throw ArgumentError("cancellation_sweep: need at least two legs");
  const ManyBodySpace space(gamma.dim(), n, cap);
  const HermitianOperator x = fluctuation_operator(gamma, w);
  const double xn = operator_norm(x);
  const PairTable table(x.matrix(), space);
  const std::size_t np = table.pairs.size();

  CancellationSweep out;
  IndexPattern current;
  std::vector<std::size_t> stack;

  auto visit = [&](const Complex& moment) {
    current.i.clear();
    current.j.clear();
    for (std::size_t p : stack) {
      current.i.push_back(table.pairs[p].first);
      current.j.push_back(table.pairs[p].second);
    }
    if (cancellation_rule_applies(current)) {
      ++out.covered_patterns;
      const double scale = std::max(1.0, std::pow(xn, current.m()));
      const double ratio = std::abs(moment) / scale;
      if (ratio >= out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_pattern = current;
      }
    } else {
      ++out.uncovered_patterns;
    }
  };

  // Depth-first over patterns; prefix = gamma^{(x)N} X_{p_1} ... X_{p_k}.
  std::function<void(const Matrix&)> descend = [&](const Matrix& prefix) {
    const bool leaf_level = static_cast<int>(stack.size()) + 1 == m_max;
    for (std::size_t p = 0; p < np; ++p) {
      stack.push_back(p);
      if (leaf_level) {
        visit(trace_of_product(prefix, table.embedded[p]));
      } else {
        const Matrix next = prefix * table.embedded[p];
        visit(next.trace());
        descend(next);
      }
      stack.pop_back();
    }
  };
  descend(tensor_power(gamma.matrix(), n, cap));
  return out;
}

ProductionReport entropy_production_identity_check(const Trajectory& many_body,
                                                   const Trajectory& hartree,
                                                   const HermitianOperator& w, int n, Index cap) {
  const std::size_t count = many_body.times.size();
  if (count != hartree.times.size()) {
    throw ArgumentError("entropy_production_identity_check: trajectories are not synchronized");
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(many_body.times[k] - hartree.times[k]) > 1e-12 * std::max(1.0, many_body.times[k])) {
      throw ArgumentError("entropy_production_identity_check: time grids differ");
    }
  }
  const Index d = w.dim() > 0 ? static_cast<Index>(std::llround(std::sqrt(static_cast<double>(w.dim())))) : 0;
  const ManyBodySpace space(d, n, cap);

  std::vector<double> entropy(count);
  std::vector<double> production(count);
  for (std::size_t k = 0; k < count; ++k) {
    const HermitianOperator big = hermitian_part(many_body.states[k]);
    const HermitianOperator site = hermitian_part(hartree.states[k]);
    const EntropyValue s = relative_entropy_to_product(big, site, space);
    if (s.infinite) throw NumericalError("entropy_production_identity_check: infinite relative entropy");
    entropy[k] = s.value;
    const Matrix a = entropy_production_operator(site, w, n, cap).matrix();
    production[k] = trace_of_product(big.matrix(), a).real();
  }

  ProductionReport report;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    ProductionPoint pt;
    pt.t = many_body.times[k];
    pt.entropy = entropy[k];
    pt.fd_derivative = (entropy[k + 1] - entropy[k - 1]) /
                       (many_body.times[k + 1] - many_body.times[k - 1]);
    pt.production = production[k];
    report.points.push_back(pt);
  }
  for (const ProductionPoint& pt : report.points) {
    report.max_production = std::max(report.max_production, std::abs(pt.production));
  }
  for (const ProductionPoint& pt : report.points) {
    const double err = std::abs(pt.fd_derivative - pt.production);
    report.max_abs_error = std::max(report.max_abs_error, err);
    const double rel = std::abs(pt.production) > 0.0
                           ? err / std::abs(pt.production)
                           : (err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.max_pointwise_rel_error = std::max(report.max_pointwise_rel_error, rel);
  }
  if (!report.points.empty()) {
    report.max_excess = report.points.front().fd_derivative - report.points.front().production;
    for (const ProductionPoint& pt : report.points) {
      report.max_excess = std::max(report.max_excess, pt.fd_derivative - pt.production);
    }
  }
  report.max_scaled_rel_error =
      report.max_production > 0.0 ? report.max_abs_error / report.max_production : 0.0;
  return report;
}

XNormReport x_norm_bound_check(const Trajectory& hartree, const HermitianOperator& w) {
  if (hartree.states.empty()) throw ArgumentError("x_norm_bound_check: empty trajectory");
  XNormReport report;
  report.w_norm = operator_norm(w);
  report.m0 = eigenvalues_hermitian(hermitian_part(hartree.states.front()).matrix()).minCoeff();
  if (!(report.m0 > 0.0)) {
    throw PositivityError("x_norm_bound_check: initial state is not faithful");
  }
  bool first = true;
  for (std::size_t k = 0; k < hartree.states.size(); ++k) {
    const HermitianOperator gamma = hermitian_part(hartree.states[k]);
    XNormPoint pt;
    pt.t = hartree.times[k];
    pt.min_eigenvalue = eigenvalues_hermitian(gamma.matrix()).minCoeff();
    if (!(pt.min_eigenvalue > 0.0)) {
      throw PositivityError("x_norm_bound_check: state lost faithfulness along the trajectory");
    }
    pt.x_norm = operator_norm(fluctuation_operator(gamma, w));
    pt.bound = 4.0 * report.w_norm / report.m0;
    pt.local_bound = 4.0 * report.w_norm / pt.min_eigenvalue;
    report.sup_x_norm = std::max(report.sup_x_norm, pt.x_norm);
    const double margin = pt.bound - pt.x_norm;
    const double local_margin = pt.local_bound - pt.x_norm;
    const double floor_margin = pt.min_eigenvalue - report.m0;
    if (first) {
      report.worst_margin = margin;
      report.worst_local_margin = local_margin;
      report.worst_floor_margin = floor_margin;
      first = false;
    } else {
      report.worst_margin = std::min(report.worst_margin, margin);
      report.worst_local_margin = std::min(report.worst_local_margin, local_margin);
      report.worst_floor_margin = std::min(report.worst_floor_margin, floor_margin);
    }
    report.points.push_back(pt);
  }
  return report;
}

GronwallValue gronwall_constant(GronwallKind kind, const GronwallConstants& c, double t) {
  if (!(c.c0 > 0.0)) throw ArgumentError("gronwall_constant: C0 must be positive");
  if (t < 0.0) throw ArgumentError("gronwall_constant: t must be >= 0");
  GronwallValue out;
  if (kind == GronwallKind::Theorem1) {
    if (!(c.c1 > 0.0) || c.c2 < 0.0 || !(c.v_norm > 0.0) || !(c.grad_v_norm > 0.0) ||
        c.t_final < 0.0) {
      throw ArgumentError("gronwall_constant: Theorem-1 constants must be positive");
    }
    const double a = c.c1 * c.grad_v_norm;
    auto c_of = [&](double s) { return 2.0 * a + 4.0 * (a + c.c2) * c.v_norm * s; };
    out.c_of_t = c_of(t);
    out.lambda = 1.0 / (4.0 * c.c0 * out.c_of_t);
    out.factor = std::exp(4.0 * c.c0 * c_of(c.t_final) * t);
    out.closed_form_c = std::exp(8.0 * c.c0 * a * c.t_final +
                                 16.0 * c.c0 * (a + c.c2) * c.v_norm * c.t_final * c.t_final);
    return out;
  }
  double c_w = c.c_w;
  if (c_w <= 0.0) {
    if (!(c.m0 > 0.0) || !(c.w_norm > 0.0)) {
      throw ArgumentError("gronwall_constant: Theorem-3 needs m0 > 0 and ||W|| > 0 or C_W > 0");
    }
    c_w = 4.0 * c.w_norm / c.m0;
  }
  out.c_of_t = c_w;
  out.lambda = 1.0 / (4.0 * c.c0 * c_w);
  out.factor = std::exp(4.0 * c.c0 * c_w * t);
  return out;
}

Theorem3Report theorem3_verify(const LindbladModel& model, int n, const HermitianOperator& gamma0_n,
                               const HermitianOperator& gamma0, double t_final,
                               const IntegratorConfig& config, Index cap) {
  if (!model.normal_l(1e-10)) throw ArgumentError("theorem3_verify: L must be normal");
  if (n < 2) throw ArgumentError("theorem3_verify: need at least two particles");
  const ManyBodySpace space(model.site_dim, n, cap);
  const double m0 = eigenvalues_hermitian(gamma0.matrix()).minCoeff();
  if (!(m0 > 0.0)) throw ArgumentError("theorem3_verify: gamma_0 must be faithful");
  if (symmetry_defect(gamma0_n.matrix(), space) > 1e-10) {
    throw ArgumentError("theorem3_verify: Gamma_0 must be permutation symmetric");
  }

  const Trajectory big = integrate(RhsKind::NBody, gamma0_n, model, n, t_final, config, cap);
  const Trajectory small = integrate(RhsKind::Hartree, gamma0, model, n, t_final, config, cap);
  const XNormReport xr = x_norm_bound_check(small, model.w);

  Theorem3Report report;
  report.m0 = m0;
  report.w_norm = operator_norm(model.w);
  report.sup_x_norm = xr.sup_x_norm;

  GronwallConstants g1;
  g1.t_final = t_final;
  g1.v_norm = std::max(report.w_norm, 1e-300);
  g1.grad_v_norm = 1.0;
  g1.c1 = std::max(0.5 * xr.sup_x_norm, 1e-300);
  g1.c2 = operator_norm(commutator(log_of_faithful(gamma0, kEigenvalueFloor), model.h.matrix()));
  report.theorem1_constants = g1;

  GronwallConstants g3;
  g3.m0 = m0;
  g3.w_norm = std::max(report.w_norm, 1e-300);
  GronwallConstants g3sup = g3;
  g3sup.c_w = std::max(xr.sup_x_norm, 1e-300);

  const double log2 = std::numbers::ln2;
  for (std::size_t k = 0; k < big.states.size(); ++k) {
    Theorem3Row row;
    row.t = big.times[k];
    const EntropyValue s = relative_entropy_to_product(hermitian_part(big.states[k]),
                                                       hermitian_part(small.states[k]), space);
    if (s.infinite) throw NumericalError("theorem3_verify: infinite relative entropy");
    row.entropy = s.value;
    if (k == 0) report.initial_entropy = s.value;
    const double base = report.initial_entropy + log2;
    row.bound_sup = gronwall_constant(GronwallKind::Theorem3, g3sup, row.t).factor * base;
    row.bound_explicit = gronwall_constant(GronwallKind::Theorem3, g3, row.t).factor * base;
    row.bound_theorem1 = gronwall_constant(GronwallKind::Theorem1, g1, row.t).factor * base;
    const double ms = row.bound_sup - row.entropy;
    const double me = row.bound_explicit - row.entropy;
    const double m1 = row.bound_theorem1 - row.entropy;
    if (k == 0) {
      report.worst_margin_sup = ms;
      report.worst_margin_explicit = me;
      report.worst_margin_theorem1 = m1;
    } else {
      report.worst_margin_sup = std::min(report.worst_margin_sup, ms);
      report.worst_margin_explicit = std::min(report.worst_margin_explicit, me);
      report.worst_margin_theorem1 = std::min(report.worst_margin_theorem1, m1);
    }
    report.rows.push_back(row);
  }
  return report;
}

PartitionBoundResult moment_partition_bound_check(const HermitianOperator& gamma,
                                                  const HermitianOperator& w, int n, double lambda,
                                                  double c0, Index cap) {
  if (!(lambda >= 0.0)) throw ArgumentError("moment_partition_bound_check: lambda must be >= 0");
  PartitionBoundResult out;
  out.lambda = lambda;
  out.x_norm = operator_norm(fluctuation_operator(gamma, w));
  const double ratio = 2.0 * c0 * out.x_norm * lambda;
  if (!(ratio < 1.0)) {
    throw ArgumentError("moment_partition_bound_check: lambda >= (2 C0 ||X||)^{-1}");
  }
  out.bound = 1.0 / (1.0 - ratio);
  const HermitianOperator a = entropy_production_operator(gamma, w, n, cap);
  const Matrix sigma = tensor_power(gamma.matrix(), n, cap);
  const SpectralDecomposition eig = eig_hermitian(a);
  const Matrix ea = eig.apply([&](double x) { return std::exp(lambda * x); });
  out.value = trace_of_product(sigma, ea).real();
  return out;
}

PartitionBoundResult moment_partition_bound_at_log2(const HermitianOperator& gamma,
                                                    const HermitianOperator& w, int n, double c0,
                                                    Index cap) {
  const double xn = operator_norm(fluctuation_operator(gamma, w));
  if (!(xn > 0.0)) {
    // A = 0: the partition function is exactly 1.
    PartitionBoundResult out;
    out.value = 1.0;
    out.bound = 2.0;
    out.lambda = std::numeric_limits<double>::infinity();
    return out;
  }
  return moment_partition_bound_check(gamma, w, n, 1.0 / (4.0 * c0 * xn), c0, cap);
}

}  // namespace qrelent
