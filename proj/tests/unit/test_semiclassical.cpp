#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/random.hpp"
#include "qrelent/semiclassical.hpp"

using namespace qrelent;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BoundParams params() {
  BoundParams p;
  p.c0 = 8.0;
  p.c1 = 0.01;
  p.c2 = 0.01;
  p.t_final = 1.0;
  p.n = 1e6;
  p.phi_norm = 0.1;
  p.grad_phi_norm = 0.1;
  p.lip_grad_phi = 0.5;
  return p;
}

}  // namespace

TEST_CASE("coherent states match the position-space oracle") {
  CounterRng rng(199);
  for (int trial = 0; trial < 6; ++trial) {
    const double hbar = trial % 2 ? 0.05 : 0.1;
    const TorusHilbert space(hbar, 20);
    const PhasePoint z{rng.uniform(), rng.uniform(-0.8, 0.8)};
    const Vector lib = coherent_state(z, space);
    const Vector ref = oracle::coherent_position_space(z[0], z[1], hbar, 20);
    CHECK((lib - ref).norm() < 1e-10);
  }
}

TEST_CASE("coherent state norm, overlap decay and momentum covariance") {
  CounterRng rng(211);
  for (double hbar : {0.02, 0.05, 0.1, 0.5}) {
    const int cutoff = static_cast<int>(std::ceil(1.0 / (kTwoPi * hbar) + std::sqrt(30.0 / hbar) / kTwoPi)) + 2;
    const TorusHilbert space(hbar, cutoff);
    for (int k = 0; k < 5; ++k) {
      const Vector v = coherent_state({rng.uniform(), rng.uniform(-1.0, 1.0)}, space);
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    }
  }
  const TorusHilbert space(0.02, 40);
  const Vector base = coherent_state({0.3, 0.0}, space);
  double prev = 1.1;
  for (int k = 0; k <= 8; ++k) {
    const double overlap = std::abs(base.dot(coherent_state({0.3 + 0.03 * k, 0.0}, space)));
    CHECK(overlap < prev);
    // Plane-wave formula up to the periodic images, which are below 2e-3 here.
    CHECK(std::abs(overlap - std::exp(-std::pow(0.03 * k, 2) / (4 * 0.02))) < 2e-3);
    prev = overlap;
  }
  // Shifting p by 2 pi hbar moves every coefficient up one mode.
  const double q = 0.37;
  const Vector a = coherent_state({q, 0.1}, space);
  const Vector b = coherent_state({q, 0.1 + kTwoPi * 0.02}, space);
  for (Index r = 1; r < space.dim(); ++r) {
    CHECK(std::abs(b(r) - a(r - 1)) < 1e-12);
  }
  CHECK_THROWS_AS(coherent_state({0.0, 0.0}, TorusHilbert(0.005, 3)), TruncationError);
}

TEST_CASE("Husimi transform") {
  const TorusHilbert space(0.02, 30);
  const PhaseSpaceGrid grid(40, 40, 1.0);
  const PhasePoint z0 = grid.point(17 * 40 + 22);
  const Vector v = coherent_state(z0, space);
  const DiscreteMeasure h = husimi(v * v.adjoint(), space, grid);
  std::size_t best = 0;
  double mass = 0.0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    CHECK(h.masses[a] >= 0.0);
    if (h.masses[a] > h.masses[best]) best = a;
    mass += h.masses[a];
  }
  CHECK(best == 17 * 40 + 22);
  CHECK(h.masses[best] / grid.weight() == doctest::Approx(1.0 / (kTwoPi * 0.02)).epsilon(1e-10));

  // Mass converges to 1 as the window and grid grow.
  CounterRng rng(223);
  const HermitianOperator gamma = hermitian_part(v * v.adjoint());
  double prev_err = 1.0;
  for (const auto& [n, p] : std::vector<std::pair<int, double>>{{16, 0.4}, {32, 0.7}, {64, 1.0}}) {
    const DiscreteMeasure hh = husimi(gamma, space, PhaseSpaceGrid(n, n, p));
    const double err = std::abs(hh.total_mass() - 1.0);
    CHECK(err <= prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-4);
}

TEST_CASE("Toeplitz quantization") {
  const TorusHilbert space(0.02, 30);
  const PhasePoint z0{0.4, 0.2};
  const DiscreteMeasure delta{{z0}, {1.0}};
  const HermitianOperator t = toeplitz(delta, space);
  const Vector v = coherent_state(z0, space);
  CHECK(oracle::op_norm(t.matrix() - v * v.adjoint()) < 1e-14);
  const RealVector ev = eigenvalues_hermitian(t.matrix());
  CHECK(ev(ev.size() - 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ev(ev.size() - 2)) < 1e-12);

  CounterRng rng(227);
  DiscreteMeasure mu;
  for (int a = 0; a < 30; ++a) {
    mu.points.push_back({rng.uniform(), rng.uniform(-0.5, 0.5)});
    mu.masses.push_back(1.0 / 30.0);
  }
  const HermitianOperator tm = toeplitz(mu, space);
  CHECK(eigenvalues_hermitian(tm.matrix())(0) >= -1e-10);
  CHECK(std::abs(tm.matrix().trace().real() - 1.0) < 1e-6);
  mu.masses[0] = -0.1;
  CHECK_THROWS_AS(toeplitz(mu, space), ArgumentError);
}

TEST_CASE("resolution of identity improves with the grid and window") {
  const TorusHilbert space(0.02, 12);
  const double coarse = resolution_identity_check(space, PhaseSpaceGrid(16, 16, 1.5));
  const double fine = resolution_identity_check(space, PhaseSpaceGrid(48, 48, 1.5));
  CHECK(fine < coarse);
  const double narrow = resolution_identity_check(space, PhaseSpaceGrid(48, 48, 1.0));
  CHECK(fine < narrow);
  CHECK(resolution_identity_check(space, PhaseSpaceGrid(64, 64, 2.2)) < 1e-4);
}

TEST_CASE("Husimi-Toeplitz duality") {
  const TorusHilbert space(0.005, 30);
  const PhaseSpaceGrid grid(32, 32, 1.296);
  CHECK(duality_check(DiscreteMeasure{{{0.5, 0.1}}, {1.0}}, space, grid) < 1e-6);

  DiscreteMeasure uniform;
  const int n = 24;
  for (int a = 0; a < n; ++a) {
    uniform.points.push_back({static_cast<double>(a) / n, 0.0});
    uniform.masses.push_back(1.0 / n);
  }
  const TorusHilbert wide(0.02, 30);
  const DiscreteMeasure h = husimi(toeplitz(uniform, wide), wide, PhaseSpaceGrid(24, 1, 0.01));
  double lo = 1e300, hi = 0.0;
  for (double m : h.masses) {
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK((hi - lo) / hi < 1e-3);

  const DiscreteMeasure off{{{0.5, 0.6}}, {1.0}};
  const double small_k = duality_check(off, TorusHilbert(0.005, 12), grid);
  const double large_k = duality_check(off, TorusHilbert(0.005, 30), grid);
  CHECK(large_k < small_k);
}

TEST_CASE("f and g examples") {
  const BoundParams p = params();
  double prev_f = INFINITY, prev_g = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double hbar = std::pow(10.0, -6.0 + 0.15 * k);
    const double lf = log_bound_f(hbar, 1.0, p);
    const double g = bound_g(hbar, 1.0, p);
    CHECK(lf < prev_f);
    CHECK(g > prev_g);
    prev_f = lf;
    prev_g = g;
  }
  CHECK(bound_f(0.3, 1e-12, p) == doctest::Approx(std::log(2.0) / 1e6).epsilon(1e-9));
  const double m0 = 16 * 8 * 0.01 * 0.1 * 1.0;
  const double m1 = 8 * 8 * 0.01 * 0.1;
  const double m2 = 16 * 8 * 0.01 * 0.1 * 0.1 * 1.0;
  CHECK(log_bound_f(0.2, 0.7, p) == doctest::Approx(std::log(std::log(2.0) / 1e6) + m0 * 0.7 + m1 * 0.7 / 0.2 + m2 * 0.7 / 0.04));
  const double lambda = 3 + 4 * 0.25;
  const double c = 8 * 0.1 / lambda;
  CHECK(bound_g(0.2, 0.7, p) == doctest::Approx(2 * (std::exp(lambda * 0.7) + 1) * 0.2 + c * std::exp(lambda * 0.7) / 1e6));
  CHECK(std::isinf(bound_f(1e-8, 1.0, p)));
  CHECK(std::isfinite(log_bound_f(1e-8, 1.0, p)));
  BoundParams bad = p;
  bad.c1 = -1.0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("hbar crossing and envelope") {
  BoundParams p = params();
  const CrossingResult cr = solve_hbar_crossing(p, 1.0);
  CHECK(cr.relative_gap < 1e-10);
  CHECK(std::abs(bound_f(cr.hbar, 1.0, p) - bound_g(cr.hbar, 1.0, p)) / bound_g(cr.hbar, 1.0, p) < 1e-10);

  double prev = INFINITY;
  std::vector<double> grid;
  for (int e = 4; e <= 12; ++e) {
    grid.push_back(std::pow(10.0, e));
    p.n = grid.back();
    const double h = solve_hbar_crossing(p, 1.0).hbar;
    CHECK(h < prev);
    prev = h;
  }
  const std::vector<EnvelopeRow> rows = uniform_envelope(p, 1.0, grid);
  REQUIRE(rows.size() == grid.size());
  double prev_env = INFINITY, max_scaled = 0.0;
  for (const auto& r : rows) {
    CHECK(r.hbar_crossing < r.hbar_sqrt);
    CHECK(r.envelope <= r.g_at_sqrt);
    CHECK(r.envelope < prev_env);
    CHECK(r.scaled == doctest::Approx(r.envelope * std::sqrt(std::log(r.n))));
    prev_env = r.envelope;
    max_scaled = std::max(max_scaled, r.scaled);
  }
  CHECK(max_scaled < 10.0 * rows.front().scaled);
  CHECK_THROWS_AS(uniform_envelope(p, 1.0, {1.0}), ArgumentError);
}
