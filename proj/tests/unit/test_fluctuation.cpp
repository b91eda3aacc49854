#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/fluctuation.hpp"
#include "qrelent/random.hpp"

using namespace qrelent;

namespace {

LindbladModel model(std::uint64_t seed, Index d = 2, double l_strength = 0.3) {
  RandomModelSpec spec;
  spec.site_dim = d;
  spec.seed = seed;
  spec.l_strength = l_strength;
  return random_model(spec);
}

IndexPattern pairs(std::initializer_list<std::pair<int, int>> ps) {
  std::vector<int> i, j;
  for (const auto& [a, b] : ps) {
    i.push_back(a);
    j.push_back(b);
  }
  return IndexPattern(i, j);
}

}  // namespace

TEST_CASE("fluctuation operator examples") {
  const LindbladModel m = model(3);
  const HermitianOperator mixed(Matrix::Identity(2, 2) / 2.0);
  CHECK(oracle::op_norm(fluctuation_operator(mixed, m.w)) < 1e-14);

  CounterRng rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + trial % 2;
    const LindbladModel mm = model(200 + trial, d);
    const HermitianOperator g = random_density(rng, d, 0.02);
    const HermitianOperator x = fluctuation_operator(g, mm.w);
    CHECK(oracle::op_norm(x.matrix() - oracle::fluctuation(g, mm.w)) < 1e-11);
    const double lmin = eigenvalues_hermitian(g.matrix())(0);
    CHECK(oracle::op_norm(x) <= 4.0 * oracle::op_norm(mm.w) / lmin);
    const Matrix first = oracle::partial_trace(oracle::kron(g, Matrix::Identity(d, d)) * x.matrix(), {2}, d, 2);
    CHECK(oracle::op_norm(first) < 1e-12);
  }
  RealVector sing(2);
  sing << 1.0, 0.0;
  CHECK_THROWS_AS(fluctuation_operator(HermitianOperator::diagonal(sing), m.w), DomainError);
}

TEST_CASE("Hamiltonian defect") {
  const HermitianOperator zero_w = HermitianOperator::zero(4);
  CounterRng rng(109);
  const HermitianOperator g = random_density(rng, 2, 0.1);
  CHECK(oracle::op_norm(hamiltonian_defect(g, zero_w, 3)) == 0.0);

  const LindbladModel bh = bose_hubbard_model(2);
  for (double p : {0.2, 0.5, 0.9}) {
    RealVector v(2);
    v << p, 1.0 - p;
    const HermitianOperator gp = HermitianOperator::diagonal(v);
    Matrix expected = bh.w.matrix();
    expected -= oracle::embed_one(gp.matrix(), 1, 2, 2) + oracle::embed_one(gp.matrix(), 2, 2, 2);
    CHECK(oracle::op_norm(hamiltonian_defect(gp, bh.w, 2).matrix() - expected) < 1e-15);
  }

  const LindbladModel m = model(5);
  CHECK(symmetry_defect(hamiltonian_defect(g, m.w, 4), ManyBodySpace(2, 4)) < 1e-12);
}

TEST_CASE("entropy production operator") {
  const LindbladModel m = model(7);
  const HermitianOperator mixed(Matrix::Identity(2, 2) / 2.0);
  CHECK(oracle::op_norm(entropy_production_operator(mixed, m.w, 3)) < 1e-14);

  CounterRng rng(113);
  const HermitianOperator g = random_density(rng, 2, 0.05);
  const Matrix x = oracle::fluctuation(g, m.w);
  const Matrix two = oracle::embed_two(x, 1, 2, 2, 2) + oracle::embed_two(x, 2, 1, 2, 2);
  CHECK(oracle::op_norm(entropy_production_operator(g, m.w, 2).matrix() - two) < 1e-11);

  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 2;
    const int n = 3;
    const LindbladModel mm = model(300 + trial, d);
    const HermitianOperator gg = random_density(rng, d, 0.05);
    const HermitianOperator a = entropy_production_operator(gg, mm.w, n);
    const HermitianOperator b = entropy_production_operator_commutator(gg, mm.w, n);
    CHECK(oracle::op_norm(a.matrix() - b.matrix()) <= 1e-10 * std::max(1.0, oracle::op_norm(a)));
  }
}

TEST_CASE("mixed moments") {
  CounterRng rng(127);
  const LindbladModel m = model(11);
  const HermitianOperator g = random_density(rng, 2, 0.05);
  const double xn = oracle::op_norm(fluctuation_operator(g, m.w));
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      CHECK(std::abs(mixed_moment(g, m.w, pairs({{i, j}}), 3)) < 1e-12);
    }
  }
  const IndexPattern repeated = pairs({{1, 2}, {1, 2}});
  const Complex rep = mixed_moment(g, m.w, repeated, 3);
  CHECK(std::abs(rep - oracle::mixed_moment(g, m.w, {1, 1}, {2, 2}, 3)) < 1e-12);
  CHECK(std::abs(rep) <= xn * xn + 1e-12);
  CHECK(std::abs(rep) > 1e-6);

  const IndexPattern three = pairs({{1, 3}, {3, 2}, {2, 1}});
  CHECK(std::abs(mixed_moment(g, m.w, three, 3) - oracle::mixed_moment(g, m.w, three.i, three.j, 3)) < 1e-12);
  CHECK_THROWS_AS(IndexPattern({1}, {1}), ArgumentError);
  CHECK_THROWS_AS(mixed_moment(g, m.w, pairs({{1, 4}}), 3), ArgumentError);
}

TEST_CASE("cancellation rule classification matches the literal singleton test") {
  for (int n = 2; n <= 4; ++n) {
    for (int mm = 1; mm <= 3; ++mm) {
      oracle::for_each_pattern(mm, n, [&](const std::vector<int>& i, const std::vector<int>& j) {
        for (int k = 0; k < mm; ++k)
          if (i[k] == j[k]) return;
        CHECK(cancellation_rule_applies(IndexPattern(i, j)) == oracle::has_singleton(i, j));
      });
    }
  }
  CHECK(cancellation_rule_applies(pairs({{1, 2}, {3, 2}})));
  CHECK_FALSE(cancellation_rule_applies(pairs({{1, 2}, {2, 1}})));
}

TEST_CASE("covered patterns have vanishing moments") {
  CounterRng rng(131);
  CHECK_THROWS_AS(cancellation_check(random_density(rng, 2, 0.1), model(1).w, pairs({{1, 2}, {2, 1}}), 2),
                  ArgumentError);
  CHECK(cancellation_check(random_density(rng, 2, 0.1), model(1).w, pairs({{1, 2}, {3, 2}}), 3).holds());

  // Dense oracle moments for every singleton-bearing pattern, m <= 2 on N = 3.
  for (int trial = 0; trial < 3; ++trial) {
    const LindbladModel m = model(400 + trial);
    const HermitianOperator g = random_density(rng, 2, 0.05);
    const double scale = std::max(1.0, std::pow(oracle::op_norm(oracle::fluctuation(g, m.w)), 2));
    oracle::for_each_pattern(2, 3, [&](const std::vector<int>& i, const std::vector<int>& j) {
      if (i[0] == j[0] || i[1] == j[1] || !oracle::has_singleton(i, j)) return;
      CHECK(std::abs(oracle::mixed_moment(g, m.w, i, j, 3)) / scale < 1e-10);
    });
  }

  for (Index d : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + trial % 3;
      if (d == 3 && n == 4 && trial % 2) continue;
      const LindbladModel m = model(600 + trial, d);
      const HermitianOperator g = random_density(rng, d, 0.02);
      const CancellationSweep sweep = cancellation_sweep(g, m.w, n, 3);
      CHECK(sweep.covered_patterns > 0);
      CHECK(sweep.worst_ratio < 1e-10);
    }
  }
}

TEST_CASE("cancellation sweep counts patterns") {
  CounterRng rng(137);
  const LindbladModel m = model(13);
  const HermitianOperator g = random_density(rng, 2, 0.05);
  for (int n = 2; n <= 4; ++n) {
    long covered = 0, uncovered = 0;
    for (int mm = 1; mm <= 3; ++mm) {
      oracle::for_each_pattern(mm, n, [&](const std::vector<int>& i, const std::vector<int>& j) {
        for (int k = 0; k < mm; ++k)
          if (i[k] == j[k]) return;
        (oracle::has_singleton(i, j) ? covered : uncovered) += 1;
      });
    }
    const CancellationSweep sweep = cancellation_sweep(g, m.w, n, 3);
    CHECK(sweep.covered_patterns == covered);
    CHECK(sweep.uncovered_patterns == uncovered);
  }
}

TEST_CASE("closed-system entropy production identity") {
  CounterRng rng(139);
  const LindbladModel m = model(17, 2, 0.0);
  const HermitianOperator g0 = random_density(rng, 2, 0.2);
  const HermitianOperator gamma0 = tensor_power(g0, 3);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    IntegratorConfig cfg;
    cfg.store_stride = 20 / (1 << k);
    const Trajectory nb = integrate(RhsKind::NBody, gamma0, m, 3, 0.4, cfg);
    const Trajectory hl = integrate(RhsKind::Hartree, g0, m, 1, 0.4, cfg);
    const ProductionReport r = entropy_production_identity_check(nb, hl, m.w, 3);
    err[k] = r.max_abs_error;
    CHECK(r.max_scaled_rel_error < 1e-3);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);

  // tr(-i[H, Gamma] log Gamma) = 0
  const HermitianOperator h = n_body_hamiltonian(m, 3);
  const HermitianOperator gamma = random_density(rng, 8, 0.01);
  const Matrix flow = Complex(0, -1) * commutator(h, gamma);
  CHECK(std::abs((flow * oracle::logm(gamma)).trace()) < 1e-10);
}

TEST_CASE("Lindblad entropy production inequality") {
  CounterRng rng(149);
  const LindbladModel m = model(19, 2, 0.3);
  const HermitianOperator g0 = random_density(rng, 2, 0.2);
  IntegratorConfig cfg;
  cfg.store_stride = 10;
  const Trajectory nb = integrate(RhsKind::NBody, tensor_power(g0, 3), m, 3, 0.5, cfg);
  const Trajectory hl = integrate(RhsKind::Hartree, g0, m, 1, 0.5, cfg);
  const ProductionReport r = entropy_production_identity_check(nb, hl, m.w, 3);
  CHECK(r.points.size() > 10);
  for (const auto& p : r.points) CHECK(p.fd_derivative <= p.production + 1e-6);
}

TEST_CASE("derivative formula on unitary-conjugated paths") {
  CounterRng rng(151);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 3;
    const HermitianOperator g = random_density(rng, d, 0.05);
    const HermitianOperator s = random_density(rng, d, 0.05);
    const Matrix k1 = random_hermitian(rng, d);
    const Matrix k2 = random_hermitian(rng, d);
    auto path = [](const Matrix& k, const Matrix& a, double t) {
      const Matrix u = oracle::expm(Complex(0, -t) * k);
      return Matrix(u * a * u.adjoint());
    };
    const double t = 0.3, h = 1e-4;
    auto s_at = [&](double tt) { return oracle::relative_entropy(path(k1, g, tt), path(k2, s, tt)); };
    const double fd = (s_at(t + h) - s_at(t - h)) / (2 * h);
    const Matrix gt = path(k1, g, t), st = path(k2, s, t);
    const Matrix gdot = Complex(0, -1) * (k1 * gt - gt * k1);
    const Matrix sdot = Complex(0, -1) * (k2 * st - st * k2);
    const Matrix dlog = frechet_log(HermitianOperator(oracle::herm(st)), HermitianOperator(oracle::herm(sdot)));
    const double formula =
        (gdot * (oracle::logm(gt) - oracle::logm(st))).trace().real() - (gt * dlog).trace().real();
    CHECK(std::abs(fd - formula) < 1e-4);
  }
}

TEST_CASE("X norm bound along a trajectory") {
  CounterRng rng(157);
  const LindbladModel m = model(23, 3, 0.3);
  const HermitianOperator g0 = random_density(rng, 3, 0.1);
  IntegratorConfig cfg;
  cfg.store_stride = 25;
  const Trajectory hl = integrate(RhsKind::Hartree, g0, m, 1, 1.0, cfg);
  const XNormReport r = x_norm_bound_check(hl, m.w);
  CHECK(r.m0 == doctest::Approx(eigenvalues_hermitian(g0.matrix())(0)).epsilon(1e-12));
  CHECK(r.worst_margin >= -1e-8);
  CHECK(r.worst_local_margin >= -1e-8);
  CHECK(r.worst_floor_margin >= -1e-8);
  for (const auto& p : r.points) CHECK(p.x_norm <= p.local_bound + 1e-8);

  Trajectory flat;
  flat.times = {0.0};
  flat.states = {Matrix::Identity(3, 3) / 3.0};
  const XNormReport z = x_norm_bound_check(flat, m.w);
  CHECK(z.sup_x_norm < 1e-14);
  CHECK(z.points[0].bound == doctest::Approx(4.0 * oracle::op_norm(m.w) * 3.0));
}

TEST_CASE("Gronwall constants") {
  GronwallConstants c3;
  c3.m0 = 0.2;
  c3.w_norm = 1.5;
  CHECK(gronwall_constant(GronwallKind::Theorem3, c3, 0.0).factor == 1.0);
  const double t = 0.37;
  CHECK(gronwall_constant(GronwallKind::Theorem3, c3, t).factor ==
        doctest::Approx(std::exp(128.0 * 1.5 * t / 0.2)).epsilon(1e-13));
  c3.c_w = 2.0;
  CHECK(gronwall_constant(GronwallKind::Theorem3, c3, t).factor == doctest::Approx(std::exp(32.0 * 2.0 * t)).epsilon(1e-13));

  GronwallConstants c1;
  c1.c1 = 0.1;
  c1.c2 = 0.2;
  c1.t_final = 2.0;
  c1.v_norm = 0.5;
  c1.grad_v_norm = 0.3;
  const GronwallValue v = gronwall_constant(GronwallKind::Theorem1, c1, 0.5);
  const double a = 0.1 * 0.3;
  CHECK(v.c_of_t == doctest::Approx(2 * a + 4 * (a + 0.2) * 0.5 * 0.5));
  CHECK(v.lambda == doctest::Approx(1.0 / (4 * 8 * v.c_of_t)));
  CHECK(v.closed_form_c == doctest::Approx(std::exp(8 * 8 * a * 2.0 + 16 * 8 * (a + 0.2) * 0.5 * 4.0)));
  double prev = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double f = gronwall_constant(GronwallKind::Theorem1, c1, 0.1 * k).factor;
    CHECK(f >= prev);
    prev = f;
  }
  c1.c1 = 0.0;
  CHECK_THROWS_AS(gronwall_constant(GronwallKind::Theorem1, c1, 0.5), ArgumentError);
  CHECK_THROWS_AS(gronwall_constant(GronwallKind::Theorem3, GronwallConstants{}, 0.5), ArgumentError);
}

TEST_CASE("entropy bound along simulated flows") {
  CounterRng rng(163);
  IntegratorConfig cfg;
  cfg.store_stride = 25;

  LindbladModel free = model(29);
  free.w = HermitianOperator::zero(4);
  const HermitianOperator g0 = random_density(rng, 2, 0.2);
  const Theorem3Report zero = theorem3_verify(free, 3, tensor_power(g0, 3), g0, 0.5, cfg);
  for (const auto& row : zero.rows) {
    CHECK(std::abs(row.entropy) < 1e-9);
    CHECK(row.bound_explicit == doctest::Approx(std::log(2.0)));
  }

  const LindbladModel m = model(31);
  const HermitianOperator floor = random_density_with_floor(rng, 2, 0.2);
  const Theorem3Report r = theorem3_verify(m, 3, tensor_power(floor, 3), floor, 0.5, cfg);
  CHECK(r.m0 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.worst_margin_sup >= 0.0);
  CHECK(r.worst_margin_explicit >= 0.0);
  CHECK(r.worst_margin_theorem1 >= 0.0);

  const LindbladModel closed = model(37, 2, 0.0);
  const Theorem3Report c = theorem3_verify(closed, 2, tensor_power(floor, 2), floor, 0.5, cfg);
  CHECK(c.worst_margin_theorem1 >= 0.0);

  CHECK_THROWS_AS(theorem3_verify(m, 3, HermitianOperator(oracle::kron_all({floor, g0, g0})), floor, 0.5, cfg),
                  ArgumentError);
}

TEST_CASE("moment partition bound") {
  CounterRng rng(167);
  const HermitianOperator mixed(Matrix::Identity(2, 2) / 2.0);
  const LindbladModel m = model(41);
  const PartitionBoundResult zero = moment_partition_bound_check(mixed, m.w, 3, 0.0);
  CHECK(zero.value == doctest::Approx(1.0));
  CHECK(zero.holds());
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator g = random_density(rng, 2, 0.05);
    const PartitionBoundResult r = moment_partition_bound_at_log2(g, model(700 + trial).w, 3);
    CHECK(r.bound == doctest::Approx(2.0));
    CHECK(r.value >= 1.0 - 1e-12);
    CHECK(r.holds());
    const PartitionBoundResult half = moment_partition_bound_check(g, model(700 + trial).w, 3, 0.5 * r.lambda);
    CHECK(half.holds());
    CHECK_THROWS_AS(moment_partition_bound_check(g, model(700 + trial).w, 3, 1.0 / (2 * 8 * r.x_norm)), ArgumentError);
  }
}
